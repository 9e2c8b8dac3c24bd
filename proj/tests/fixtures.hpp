#pragma once

#include <cmath>
#include <vector>

#include "renyi/opalg.hpp"
#include "renyi/random.hpp"

namespace fixture {

using renyi::opalg::Complex;
using renyi::opalg::DensityOperator;
using renyi::opalg::HermitianOperator;
using renyi::opalg::Matrix;
using renyi::opalg::Vector;

inline Vector ket(std::initializer_list<Complex> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (Complex c : v) out(i++) = c;
  return out.normalized();
}

inline DensityOperator diag(std::initializer_list<double> v) {
  std::vector<double> w(v);
  return DensityOperator::diagonal(w);
}

inline DensityOperator mix(const DensityOperator& a, const DensityOperator& b, double t) {
  return DensityOperator::normalized(a.op() * (1.0 - t) + b.op() * t);
}

inline DensityOperator plus_state() { return DensityOperator::pure(ket({1.0, 1.0})); }
inline DensityOperator zero_state() { return DensityOperator::pure(ket({1.0, 0.0})); }
inline DensityOperator one_state() { return DensityOperator::pure(ket({0.0, 1.0})); }

/// 0.9 |+><+| + 0.1 I/2 versus diag(0.7, 0.3).
inline DensityOperator designated_rho() {
  return mix(plus_state(), DensityOperator::maximally_mixed(2), 0.1);
}
inline DensityOperator designated_sigma() { return diag({0.7, 0.3}); }

struct Pair {
  DensityOperator rho;
  DensityOperator sigma;
};

/// Twenty fixed full-rank noncommuting qubit pairs.
inline std::vector<Pair> noncommuting_qubit_pairs() {
  std::vector<Pair> out;
  out.push_back({designated_rho(), designated_sigma()});
  renyi::rnd::Rng rng(renyi::rnd::splitmix64(20240611));
  while (out.size() < 20) {
    DensityOperator r = renyi::rnd::random_density(2, rng);
    DensityOperator s = renyi::rnd::random_density(2, rng);
    if (renyi::opalg::commutator_norm(r.op(), s.op()) < 0.05) continue;
    out.push_back({r, s});
  }
  return out;
}

/// Commuting pairs, including diagonal ones and a pair sharing a rotated eigenbasis.
inline std::vector<Pair> commuting_pairs() {
  std::vector<Pair> out;
  out.push_back({diag({0.5, 0.5}), diag({0.25, 0.75})});
  out.push_back({diag({0.9, 0.1}), diag({0.3, 0.7})});
  out.push_back({diag({0.2, 0.3, 0.5}), diag({0.6, 0.1, 0.3})});
  renyi::rnd::Rng rng(renyi::rnd::splitmix64(77));
  Matrix u = renyi::rnd::haar_unitary(3, rng);
  auto rotated = [&](std::initializer_list<double> v) {
    std::vector<double> w(v);
    Matrix d = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) d(i, i) = w[static_cast<std::size_t>(i)];
    return DensityOperator(HermitianOperator::from_hermitian_part(u * d * u.adjoint()));
  };
  out.push_back({rotated({0.1, 0.2, 0.7}), rotated({0.4, 0.4, 0.2})});
  return out;
}

}  // namespace fixture
