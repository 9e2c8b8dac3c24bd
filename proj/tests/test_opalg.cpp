#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "renyi/matrix_json.hpp"
#include "renyi/opalg.hpp"
#include "renyi/random.hpp"

using namespace renyi;
using namespace renyi::opalg;
using fixture::diag;
using fixture::ket;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

HermitianOperator herm_diag(std::initializer_list<double> v) {
  std::vector<double> w(v);
  return HermitianOperator::diagonal(w);
}

}  // namespace

TEST_CASE("hermitian operator validation") {
  Matrix m(2, 2);
  m << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 2.0;
  CHECK_THROWS_AS(HermitianOperator{m}, DomainError);
  m(1, 0) = Complex(0.0, -1.0);
  CHECK_NOTHROW(HermitianOperator{m});
}

TEST_CASE("density operator construction") {
  CHECK_THROWS_AS(DensityOperator(herm_diag({0.6, 0.6})), DomainError);
  CHECK_THROWS_AS(DensityOperator(herm_diag({1.1, -0.1})), DomainError);
  // Tiny negative eigenvalues are clamped.
  DensityOperator r(herm_diag({1.0 + 1e-11, -1e-11}));
  CHECK(r.spectrum().values.minCoeff() >= 0.0);
  CHECK(std::abs(r.op().trace() - 1.0) < 1e-12);
  DensityOperator n = DensityOperator::normalized(herm_diag({2.0, 6.0}));
  CHECK(std::abs(n.matrix()(1, 1).real() - 0.75) < 1e-15);
}

TEST_CASE("effect clamps into [0, 1]") {
  CHECK_THROWS_AS(Effect(herm_diag({1.5, 0.0})), DomainError);
  Effect t(herm_diag({1.0 + 1e-12, -1e-12}));
  CHECK(t.spectrum().values.maxCoeff() <= 1.0);
  CHECK(t.spectrum().values.minCoeff() >= 0.0);
}

TEST_CASE("pvm and povm validation") {
  CHECK_NOTHROW(Pvm({herm_diag({1, 0}), herm_diag({0, 1})}));
  CHECK_THROWS_AS(Pvm({herm_diag({1, 0}), herm_diag({1, 1})}), DomainError);
  CHECK_THROWS_AS(Pvm({herm_diag({0.5, 0}), herm_diag({0.5, 1})}), DomainError);
  CHECK_NOTHROW(Povm({herm_diag({0.5, 0.2}), herm_diag({0.5, 0.8})}));
  CHECK_THROWS_AS(Povm({herm_diag({0.5, 0.2}), herm_diag({0.4, 0.8})}), DomainError);
  rnd::Rng rng(3);
  Pvm b = Pvm::from_basis(rnd::haar_unitary(3, rng));
  CHECK(b.size() == 3);
}

TEST_CASE("frac_power examples") {
  HermitianOperator r = frac_power(herm_diag({4, 9}), 0.5);
  CHECK(max_abs(r.matrix() - herm_diag({2, 3}).matrix()) < 1e-14);
  HermitianOperator inv = frac_power(herm_diag({1, 0}), -1.0);
  CHECK(max_abs(inv.matrix() - herm_diag({1, 0}).matrix()) < 1e-14);
  rnd::Rng rng(11);
  for (int k = 0; k < 5; ++k) {
    HermitianOperator p = rnd::random_pure(3, rng).op();
    for (double t : {0.3, 1.0, 2.5}) CHECK(max_abs(frac_power(p, t).matrix() - p.matrix()) < 1e-12);
  }
  CHECK_THROWS_AS(frac_power(herm_diag({1, -0.1}), 0.5), DomainError);
}

TEST_CASE("function calculus consistency") {
  rnd::Rng rng(21);
  const double ts[] = {-1.0, -0.5, 1.0 / 3.0, 0.5, 2.0};
  for (int k = 0; k < 20; ++k) {
    HermitianOperator a = k % 2 ? rnd::random_psd(3, rng) : rnd::random_density(3, 2, rng).op();
    HermitianOperator proj = support_projector(a);
    for (double s : ts) {
      for (double t : ts) {
        Matrix lhs = frac_power(a, s + t).matrix();
        Matrix rhs = frac_power(a, s).matrix() * frac_power(a, t).matrix();
        if (s + t == 0.0) lhs = proj.matrix();
        CHECK(max_abs(lhs - rhs) <= 1e-10 * std::max(1.0, max_abs(rhs)));
      }
    }
  }
}

TEST_CASE("support projector examples") {
  CHECK(max_abs(support_projector(herm_diag({0.3, 0})).matrix() - herm_diag({1, 0}).matrix()) < 1e-14);
  CHECK(max_abs(support_projector(HermitianOperator::identity(3) * (1.0 / 3)).matrix() - Matrix::Identity(3, 3)) < 1e-14);
  rnd::Rng rng(5);
  DensityOperator pure = rnd::random_pure(2, rng);
  HermitianOperator p = support_projector(pure.op());
  CHECK(max_abs(p.matrix() - pure.matrix()) < 1e-12);
  CHECK(max_abs(p.matrix() * p.matrix() - p.matrix()) < 1e-10);
}

TEST_CASE("nc_quotient examples") {
  rnd::Rng rng(8);
  DensityOperator s = rnd::random_density(3, 2, rng);
  Quotient q = nc_quotient(s.op(), s.op());
  CHECK_FALSE(q.support_violation);
  CHECK(max_abs(q.value.matrix() - support_projector(s.op()).matrix()) < 1e-10);

  Quotient d = nc_quotient(HermitianOperator::identity(2) * 0.5, herm_diag({0.25, 0.75}));
  CHECK(max_abs(d.value.matrix() - herm_diag({2.0, 2.0 / 3.0}).matrix()) < 1e-12);

  DensityOperator r = rnd::random_density(2, rng);
  CHECK(max_abs(nc_quotient(r.op(), HermitianOperator::identity(2)).value.matrix() - r.matrix()) < 1e-12);

  Quotient bad = nc_quotient(fixture::plus_state().op(), herm_diag({1, 0}));
  CHECK(bad.support_violation);
}

TEST_CASE("weighted norm examples") {
  rnd::Rng rng(13);
  DensityOperator s = rnd::random_density(3, rng);
  for (double p : {0.3, 1.0, 2.0, 7.5}) {
    CHECK(std::abs(weighted_norm(HermitianOperator::identity(3), s.op(), p).value() - 1.0) < 1e-12);
  }
  CHECK(std::abs(weighted_norm(herm_diag({2, 0}), herm_diag({0.5, 0.5}), 1.0).value() - 1.0) < 1e-14);
  HermitianOperator x = rnd::random_direction(3, rng);
  Eigen::JacobiSVD<Matrix> svd(x.matrix());
  CHECK(std::abs(weighted_norm(x, s.op(), INFINITY).value() - svd.singularValues()(0)) < 1e-12);
  CHECK_THROWS_AS(weighted_norm(x, s.op(), 0.0), DomainError);
}

TEST_CASE("weighted norm is nonincreasing in p for positive x") {
  rnd::Rng rng(17);
  for (int k = 0; k < 200; ++k) {
    HermitianOperator x = rnd::random_psd(3, rng);
    DensityOperator s = rnd::random_density(3, rng);
    double n1 = weighted_norm(x, s.op(), 1.0).value();
    double n2 = weighted_norm(x, s.op(), 2.0).value();
    double n4 = weighted_norm(x, s.op(), 4.0).value();
    double ninf = weighted_norm(x, s.op(), INFINITY).value();
    CHECK(n1 <= n2 * (1 + 1e-12));
    CHECK(n2 <= n4 * (1 + 1e-12));
    CHECK(n4 <= ninf * (1 + 1e-12));
  }
}

TEST_CASE("kms inner product") {
  rnd::Rng rng(19);
  DensityOperator s = rnd::random_density(3, rng);
  CHECK(std::abs(kms_inner(HermitianOperator::identity(3), HermitianOperator::identity(3), s.op()) - 1.0) < 1e-12);
  HermitianOperator x = rnd::random_direction(3, rng), y = rnd::random_direction(3, rng);
  double expected = (x.matrix() * y.matrix()).trace().real() / 3.0;
  CHECK(std::abs(kms_inner(x, y, HermitianOperator::identity(3) * (1.0 / 3)) - expected) < 1e-12);
  CHECK_THROWS_AS(kms_inner(x, HermitianOperator::identity(2), s.op()), DimensionError);
}

TEST_CASE("change of measure through the noncommutative quotient") {
  rnd::Rng rng(23);
  for (int k = 0; k < 200; ++k) {
    DensityOperator r = rnd::random_density(2, rng);
    DensityOperator s = rnd::random_density(2, rng);
    Effect t = rnd::random_effect(2, rng);
    double lhs = kms_inner(nc_quotient(r.op(), s.op()).value, t.op(), s.op());
    CHECK(std::abs(lhs - trace_product(r.op(), t.op())) < 1e-10);
  }
}

TEST_CASE("kron and partial trace") {
  rnd::Rng rng(29);
  const Index dims[] = {2, 3};
  for (int k = 0; k < 20; ++k) {
    DensityOperator a = rnd::random_density(2, rng);
    DensityOperator b = rnd::random_density(3, rng);
    HermitianOperator ab = kron(a.op(), b.op());
    CHECK(max_abs(partial_trace(ab, dims, 0).matrix() - a.matrix()) < 1e-12);
    CHECK(max_abs(partial_trace(ab, dims, 1).matrix() - b.matrix()) < 1e-12);
    CHECK(std::abs(partial_trace(ab, dims, 0).trace() - ab.trace()) < 1e-12);
  }
  DensityOperator m = kron(DensityOperator::maximally_mixed(2), DensityOperator::maximally_mixed(2));
  CHECK(max_abs(m.matrix() - Matrix::Identity(4, 4) / 4.0) < 1e-15);

  DensityOperator bell = DensityOperator::pure(ket({1.0, 0.0, 0.0, 1.0}));
  const Index qq[] = {2, 2};
  CHECK(max_abs(partial_trace(bell.op(), qq, 0).matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-14);
  CHECK(max_abs(partial_trace(bell.op(), qq, 1).matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-14);
  const Index wrong[] = {3, 2};
  CHECK_THROWS_AS(partial_trace(bell.op(), wrong, 0), DimensionError);

  DensityOperator t3 = tensor_power(diag({0.25, 0.75}), 3);
  CHECK(t3.dim() == 8);
  CHECK(std::abs(t3.matrix()(7, 7).real() - 0.421875) < 1e-15);
}

TEST_CASE("direct sum") {
  std::vector<HermitianOperator> blocks{herm_diag({1, 2}), HermitianOperator::identity(1) * 3.0};
  HermitianOperator d = direct_sum(blocks);
  CHECK(d.dim() == 3);
  CHECK(max_abs(d.matrix() - herm_diag({1, 2, 3}).matrix()) < 1e-15);
}

TEST_CASE("matrix json round trip") {
  rnd::Rng rng(31);
  DensityOperator r = rnd::random_density(3, rng);
  auto j = io::matrix_to_json(r.matrix());
  Matrix back = io::matrix_from_json(j);
  CHECK(max_abs(back - r.matrix()) == 0.0);
  nlohmann::json bad = {{"dim", 2}, {"re", {{1.0, 0.0}}}};
  CHECK_THROWS_AS(io::matrix_from_json(bad), io::FormatError);
  nlohmann::json nonpsd = {{"dim", 2}, {"re", {{1.5, 0.0}, {0.0, -0.5}}}};
  CHECK_THROWS_AS(io::density_from_json(nonpsd), DomainError);
}
