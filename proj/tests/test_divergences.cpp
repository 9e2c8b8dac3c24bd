#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "renyi/divergences.hpp"
#include "renyi/random.hpp"

using namespace renyi;
using namespace renyi::div;
using opalg::HermitianOperator;
using fixture::diag;

namespace {

const RenyiOrder kTwo = RenyiOrder::finite(2.0);

std::vector<RenyiOrder> orders() {
  return {RenyiOrder::finite(0.3), RenyiOrder::finite(0.7), RenyiOrder::one(), RenyiOrder::finite(1.5),
          kTwo, RenyiOrder::finite(5.0), RenyiOrder::infinity()};
}

Effect diag_effect(std::vector<double> v) { return Effect(HermitianOperator::diagonal(v)); }

}  // namespace

TEST_CASE("renyi order") {
  CHECK_THROWS(RenyiOrder::finite(1.0));
  CHECK_THROWS(RenyiOrder::finite(0.0));
  CHECK_THROWS(RenyiOrder::finite(-2.0));
  CHECK(RenyiOrder::parse("inf").is_infinity());
  CHECK(RenyiOrder::parse("1").is_one());
  CHECK(RenyiOrder::parse("2.5").value() == 2.5);
  CHECK(kTwo.conjugate() == 2.0);
  CHECK(RenyiOrder::infinity().conjugate() == 1.0);
  CHECK(std::isinf(RenyiOrder::one().conjugate()));
  CHECK(RenyiOrder::infinity().ratio() == 1.0);
}

TEST_CASE("extended reals") {
  ExtReal a = ExtReal::pos_inf();
  CHECK(a > ExtReal(1e308));
  CHECK(a == ExtReal(INFINITY));
  CHECK_FALSE(a.is_finite());
  CHECK_THROWS(a.value());
  CHECK_THROWS(ExtReal(NAN));
  CHECK(a.to_string() == "inf");
  CHECK(ExtReal(0.25).to_string() == "0.25");
}

TEST_CASE("probability distributions") {
  CHECK_THROWS(ProbDist({0.5, 0.6}));
  CHECK_THROWS(ProbDist({1.1, -0.1}));
  ProbDist p({1.0 - 1e-15, 1e-15});
  CHECK(p[1] == 0.0);
}

TEST_CASE("classical renyi examples") {
  ProbDist p({0.5, 0.5}), q({0.25, 0.75});
  for (const auto& a : orders()) CHECK(classical_renyi(p, p, a).value() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(classical_renyi(p, q, kTwo).value() == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-14));
  CHECK(classical_renyi(ProbDist({1.0, 0.0}), p, RenyiOrder::infinity()).value() ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  // Support violation is +inf for alpha >= 1 but finite below 1.
  ProbDist r({0.5, 0.5}), s({1.0, 0.0});
  CHECK(classical_renyi(r, s, kTwo).is_pos_inf());
  CHECK(classical_renyi(r, s, RenyiOrder::one()).is_pos_inf());
  CHECK(classical_renyi(r, s, RenyiOrder::finite(0.5)).value() == doctest::Approx(-2.0 * std::log(std::sqrt(0.5))));
  CHECK_THROWS(classical_renyi(p, ProbDist({1.0}), kTwo));
}

TEST_CASE("sandwiched renyi examples") {
  rnd::Rng rng(101);
  for (int k = 0; k < 10; ++k) {
    DensityOperator r = rnd::random_density(3, rng);
    for (const auto& a : orders()) CHECK(std::abs(sandwiched_renyi(r, r, a).value()) < 1e-10);
  }
  CHECK(sandwiched_renyi(fixture::zero_state(), fixture::plus_state(), kTwo).is_pos_inf());
  CHECK(sandwiched_renyi(DensityOperator::maximally_mixed(2), diag({0.25, 0.75}), RenyiOrder::infinity()).value() ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("commuting pairs reduce to classical values") {
  for (const auto& pr : fixture::commuting_pairs()) {
    auto basis = common_eigenbasis(pr.rho.op(), pr.sigma.op());
    REQUIRE(basis.has_value());
    std::vector<double> p, q;
    for (opalg::Index i = 0; i < basis->cols(); ++i) {
      p.push_back((basis->col(i).adjoint() * pr.rho.matrix() * basis->col(i))(0, 0).real());
      q.push_back((basis->col(i).adjoint() * pr.sigma.matrix() * basis->col(i))(0, 0).real());
    }
    for (double alpha : {0.5, 1.0, 2.0, 3.5, double(INFINITY)}) {
      RenyiOrder a = RenyiOrder::from_value(alpha);
      double expected = oracle::classical(p, q, alpha);
      CHECK(sandwiched_renyi(pr.rho, pr.sigma, a).value() == doctest::Approx(expected).epsilon(1e-9));
      if (!a.is_infinity()) CHECK(petz_renyi(pr.rho, pr.sigma, a).value() == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("relative entropy examples") {
  rnd::Rng rng(103);
  DensityOperator r = rnd::random_density(3, rng);
  CHECK(std::abs(relative_entropy(r, r).value()) < 1e-12);
  CHECK(relative_entropy(diag({0.5, 0.5}), diag({0.25, 0.75})).value() ==
        doctest::Approx(0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0)).epsilon(1e-13));
  CHECK(relative_entropy(fixture::plus_state(), diag({1.0, 0.0})).is_pos_inf());
}

TEST_CASE("petz dominates sandwiched above one") {
  rnd::Rng rng(107);
  for (int k = 0; k < 100; ++k) {
    DensityOperator r = rnd::random_density(2, rng);
    DensityOperator s = rnd::random_density(2, rng);
    CHECK(petz_renyi(r, s, kTwo).value() >= sandwiched_renyi(r, s, kTwo).value() - 1e-12);
  }
}

TEST_CASE("sandwiched renyi is nondecreasing in alpha") {
  rnd::Rng rng(109);
  const double grid[] = {0.6, 0.9, 1.0, 1.1, 2.0, 5.0, INFINITY};
  for (int k = 0; k < 50; ++k) {
    DensityOperator r = rnd::random_density(3, rng);
    DensityOperator s = rnd::random_density(3, rng);
    double prev = -INFINITY;
    for (double alpha : grid) {
      double v = sandwiched_renyi(r, s, RenyiOrder::from_value(alpha)).value();
      CHECK(v >= prev - 1e-10);
      prev = v;
    }
  }
}

TEST_CASE("sandwiched renyi is additive") {
  rnd::Rng rng(113);
  for (int k = 0; k < 20; ++k) {
    DensityOperator r1 = rnd::random_density(2, rng), s1 = rnd::random_density(2, rng);
    DensityOperator r2 = rnd::random_density(2, rng), s2 = rnd::random_density(2, rng);
    for (const auto& a : {RenyiOrder::finite(0.7), RenyiOrder::one(), kTwo, RenyiOrder::infinity()}) {
      double joint = sandwiched_renyi(opalg::kron(r1, r2), opalg::kron(s1, s2), a).value();
      double sum = sandwiched_renyi(r1, s1, a).value() + sandwiched_renyi(r2, s2, a).value();
      CHECK(std::abs(joint - sum) <= 1e-8);
    }
  }
}

TEST_CASE("alpha near one approaches relative entropy") {
  rnd::Rng rng(127);
  for (int k = 0; k < 20; ++k) {
    DensityOperator r = rnd::random_density(3, rng), s = rnd::random_density(3, rng);
    double d = relative_entropy(r, s).value();
    CHECK(std::abs(sandwiched_renyi(r, s, RenyiOrder::finite(1 + 1e-4)).value() - d) <= 1e-3);
    CHECK(std::abs(sandwiched_renyi(r, s, RenyiOrder::finite(1 - 1e-4)).value() - d) <= 1e-3);
  }
}

TEST_CASE("variational objectives at the identity vanish") {
  rnd::Rng rng(131);
  DensityOperator r = rnd::random_density(3, rng), s = rnd::random_density(3, rng);
  Effect id = Effect::identity(3);
  for (const auto& a : {RenyiOrder::finite(0.5), kTwo, RenyiOrder::finite(4.0)}) {
    CHECK(std::abs(variational_objective_measured(r, s, a, id).value()) < 1e-12);
    CHECK(std::abs(variational_objective_sandwiched(r, s, a, id).value()) < 1e-12);
  }
  CHECK(std::abs(measured_alpha1_objective(r, s, id)) < 1e-12);
  CHECK_THROWS(variational_objective_measured(r, s, RenyiOrder::one(), id));
}

TEST_CASE("variational objectives are scale invariant") {
  rnd::Rng rng(137);
  for (int k = 0; k < 20; ++k) {
    DensityOperator r = rnd::random_density(2, rng), s = rnd::random_density(2, rng);
    Effect t = rnd::random_positive_effect(2, 0.05, rng);
    Effect half(t.op() * 0.5);
    for (const auto& a : {RenyiOrder::finite(0.6), kTwo}) {
      CHECK(variational_objective_measured(r, s, a, t).value() ==
            doctest::Approx(variational_objective_measured(r, s, a, half).value()).epsilon(1e-10));
      CHECK(variational_objective_sandwiched(r, s, a, t).value() ==
            doctest::Approx(variational_objective_sandwiched(r, s, a, half).value()).epsilon(1e-10));
    }
  }
}

TEST_CASE("variational objectives lower-bound the sandwiched divergence") {
  rnd::Rng rng(139);
  for (int k = 0; k < 1000; ++k) {
    DensityOperator r = rnd::random_density(2, rng), s = rnd::random_density(2, rng);
    Effect t = rnd::random_positive_effect(2, 1e-3, rng);
    for (const auto& a : {RenyiOrder::finite(0.4), RenyiOrder::finite(0.8), kTwo, RenyiOrder::finite(3.0)}) {
      double d = sandwiched_renyi(r, s, a).value();
      CHECK(variational_objective_measured(r, s, a, t).value() <= d + 1e-10);
      CHECK(variational_objective_sandwiched(r, s, a, t).value() <= d + 1e-10);
    }
    CHECK(measured_alpha1_objective(r, s, t) <= relative_entropy(r, s).value() + 1e-10);
  }
}

TEST_CASE("variational objectives saturate on commuting pairs") {
  std::vector<double> p{0.2, 0.3, 0.5}, q{0.6, 0.1, 0.3};
  DensityOperator r = DensityOperator::diagonal(p), s = DensityOperator::diagonal(q);
  for (double alpha : {2.0, 3.0}) {
    std::vector<double> t(3);
    double top = 0.0;
    for (int i = 0; i < 3; ++i) top = std::max(top, std::pow(p[i] / q[i], alpha - 1));
    for (int i = 0; i < 3; ++i) t[i] = std::pow(p[i] / q[i], alpha - 1) / top;
    double expected = oracle::classical(p, q, alpha);
    CHECK(variational_objective_measured(r, s, RenyiOrder::finite(alpha), diag_effect(t)).value() ==
          doctest::Approx(expected).epsilon(1e-12));
  }
  std::vector<double> ratio(3);
  for (int i = 0; i < 3; ++i) ratio[i] = p[i] / q[i] / 5.0;
  CHECK(measured_alpha1_objective(r, s, diag_effect(ratio)) ==
        doctest::Approx(oracle::classical(p, q, 1.0)).epsilon(1e-12));
}

TEST_CASE("optimal sandwiched test saturates the objective") {
  rnd::Rng rng(149);
  for (int k = 0; k < 50; ++k) {
    DensityOperator r = rnd::random_density(k % 2 ? 3 : 2, rng);
    DensityOperator s = rnd::random_density(r.dim(), rng);
    for (double alpha : {1.5, 2.0, 3.0}) {
      RenyiOrder a = RenyiOrder::finite(alpha);
      Effect t = optimal_sandwiched_test(r, s, a);
      CHECK(t.spectrum().values.maxCoeff() == doctest::Approx(1.0));
      CHECK(std::abs(variational_objective_sandwiched(r, s, a, t).value() - sandwiched_renyi(r, s, a).value()) <=
            1e-8);
    }
  }
  // Commuting pair: diagonal test with entries proportional to (p/q)^{alpha-1}.
  Effect t = optimal_sandwiched_test(diag({0.5, 0.5}), diag({0.25, 0.75}), kTwo);
  CHECK(t.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(t.matrix()(1, 1).real() == doctest::Approx((0.5 / 0.75) / 2.0));
  // rho = sigma: proportional to the support projector.
  DensityOperator low = rnd::random_density(3, 2, rng);
  Effect same = optimal_sandwiched_test(low, low, kTwo);
  CHECK((same.matrix() - opalg::support_projector(low.op()).matrix()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS(optimal_sandwiched_test(fixture::plus_state(), diag({1.0, 0.0}), kTwo));
}

TEST_CASE("petz variational objective") {
  rnd::Rng rng(151);
  for (int k = 0; k < 1000; ++k) {
    DensityOperator r = rnd::random_density(2, rng), s = rnd::random_density(2, rng);
    Effect t = rnd::random_effect(2, rng);
    for (double alpha : {1.5, 2.0, 3.0}) {
      RenyiOrder a = RenyiOrder::finite(alpha);
      CHECK(petz_variational_objective(r, s, a, t).value() <= petz_renyi(r, s, a).value() + 1e-10);
    }
  }
  DensityOperator r = rnd::random_density(3, rng);
  CHECK(std::abs(petz_variational_objective(r, r, kTwo, Effect::identity(3)).value()) < 1e-12);
  // Commuting pair: t proportional to (p/q)^{alpha-1} saturates the scalar Hoelder inequality.
  std::vector<double> p{0.2, 0.3, 0.5}, q{0.6, 0.1, 0.3};
  for (double alpha : {2.0, 3.0}) {
    std::vector<double> t(3);
    double top = 0.0;
    for (int i = 0; i < 3; ++i) top = std::max(top, p[i] / q[i]);
    for (int i = 0; i < 3; ++i) t[i] = std::pow(p[i] / q[i] / top, alpha - 1.0);
    double v = petz_variational_objective(DensityOperator::diagonal(p), DensityOperator::diagonal(q),
                                          RenyiOrder::finite(alpha), diag_effect(t))
                   .value();
    CHECK(v == doctest::Approx(oracle::classical(p, q, alpha)).epsilon(1e-8));
  }
}
