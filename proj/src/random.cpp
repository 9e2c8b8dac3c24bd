#include "renyi/random.hpp"

#include <cmath>

namespace renyi::rnd {

using opalg::Complex;
using opalg::HermitianOperator;
using opalg::Index;
using opalg::Matrix;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng substream(std::uint64_t seed, std::uint64_t index) { return Rng(splitmix64(seed + index)); }

Matrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      double re = n(rng);
      double im = n(rng);
      g(r, c) = Complex(re, im);
    }
  }
  return g;
}

Matrix haar_unitary(Index dim, Rng& rng) {
  Matrix g = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution is exactly Haar.
  for (Index i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    double a = std::abs(d);
    if (a > 0) q.col(i) *= d / a;
  }
  return q;
}

opalg::DensityOperator random_density(Index dim, Rng& rng) { return random_density(dim, dim, rng); }

opalg::DensityOperator random_density(Index dim, Index rank, Rng& rng) {
  Matrix g = ginibre(dim, rank, rng);
  return opalg::DensityOperator::normalized(HermitianOperator::from_hermitian_part(g * g.adjoint()));
}

opalg::DensityOperator random_pure(Index dim, Rng& rng) {
  Matrix g = ginibre(dim, 1, rng);
  return opalg::DensityOperator::pure(g.col(0));
}

HermitianOperator random_psd(Index dim, Rng& rng) {
  Matrix g = ginibre(dim, dim, rng);
  return HermitianOperator::from_hermitian_part(g * g.adjoint() / static_cast<double>(dim));
}

opalg::Effect random_effect(Index dim, Rng& rng) { return random_positive_effect(dim, 0.0, rng); }

opalg::Effect random_positive_effect(Index dim, double floor, Rng& rng) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  Matrix q = haar_unitary(dim, rng);
  opalg::RealVector ev(dim);
  for (Index i = 0; i < dim; ++i) ev(i) = u(rng);
  return opalg::Effect(HermitianOperator::from_hermitian_part(q * ev.asDiagonal() * q.adjoint()));
}

HermitianOperator random_direction(Index dim, Rng& rng) {
  Matrix g = ginibre(dim, dim, rng);
  Matrix h = 0.5 * (g + g.adjoint());
  return HermitianOperator::from_hermitian_part(h / h.norm());
}

std::vector<double> random_simplex(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& v : p) {
    v = e(rng);
    s += v;
  }
  for (auto& v : p) v /= s;
  return p;
}

}  // namespace renyi::rnd
