#include <cmath>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "renyi/divergences.hpp"
#include "renyi/hypotest.hpp"
#include "renyi/measured.hpp"
#include "renyi/random.hpp"

using namespace renyi;
using namespace renyi::hypotest;
using fixture::diag;
using opalg::HermitianOperator;

namespace {

/// sup over s in (0, 1] of s (r - D_{1/(1-s)}(p||q)), on a uniform grid of s.
double classical_exponent(const std::vector<double>& p, const std::vector<double>& q, double r) {
  double best = 0.0;
  const int n = 100000;
  for (int i = 1; i <= n; ++i) {
    double s = static_cast<double>(i) / n;
    double alpha = i == n ? INFINITY : 1.0 / (1.0 - s);
    best = std::max(best, s * (r - oracle::classical(p, q, alpha)));
  }
  return best;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

}  // namespace

TEST_CASE("default alpha grid") {
  auto g = default_alpha_grid();
  CHECK(g.size() == 13);
  CHECK(g.front().is_one());
  CHECK(g.back().is_infinity());
  auto parsed = parse_alpha_grid("1, 1.5,2,inf");
  REQUIRE(parsed.size() == 4);
  CHECK(parsed[1].value() == 1.5);
  CHECK(parsed[3].is_infinity());
  CHECK_THROWS(parse_alpha_grid("1,abc"));
}

TEST_CASE("sc bound examples") {
  rnd::Rng rng(401);
  DensityOperator r = rnd::random_density(2, rng), s = rnd::random_density(2, rng);
  BoundResult id = sc_bound(r, s, Effect::identity(2), default_alpha_grid());
  CHECK(id.bound >= 1.0);
  // rho = sigma: bound = Tr[sigma T]^{(a-1)/a}, minimized at alpha = inf.
  Effect t = rnd::random_effect(2, rng);
  BoundResult same = sc_bound(r, r, t, default_alpha_grid());
  double trt = opalg::trace_product(r.op(), t.op());
  CHECK(same.bound == doctest::Approx(trt).epsilon(1e-10));
  CHECK(same.argmax_alpha.is_infinity());
  // Grid without alpha = 1, orders below 1, orthogonal tests.
  CHECK_THROWS(sc_bound(r, s, t, {RenyiOrder::finite(2.0)}));
  CHECK_THROWS(sc_bound(r, s, t, {RenyiOrder::one(), RenyiOrder::finite(0.5)}));
  CHECK_THROWS(sc_bound(fixture::zero_state(), s, Effect(fixture::one_state().op()), default_alpha_grid()));
}

TEST_CASE("sc bound is valid on random triples") {
  auto grid = default_alpha_grid();
  for (opalg::Index d : {2, 3, 4}) {
    rnd::Rng rng(409 + static_cast<std::uint64_t>(d));
    for (int k = 0; k < 1000; ++k) {
      DensityOperator r = rnd::random_density(d, rng), s = rnd::random_density(d, rng);
      Effect t = rnd::random_effect(d, rng);
      double trt = opalg::trace_product(r.op(), t.op());
      if (trt <= 1e-14) continue;
      CHECK(trt <= sc_bound(r, s, t, grid).bound + 1e-12);
    }
  }
}

TEST_CASE("sc bound on commuting pairs uses the classical divergence") {
  DensityOperator r = diag({0.5, 0.5}), s = diag({0.25, 0.75});
  std::vector<double> tv{1.0, 0.0};
  Effect t(HermitianOperator::diagonal(tv));
  BoundResult b = sc_bound(r, s, t, {RenyiOrder::one(), RenyiOrder::finite(2.0)});
  double d2 = oracle::classical({0.5, 0.5}, {0.25, 0.75}, 2.0);
  double expected = std::min(1.0, std::exp(-0.5 * (-std::log(0.25) - d2)));
  CHECK(b.bound == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("exponent curve for identical states is the identity") {
  rnd::Rng rng(419);
  DensityOperator r = rnd::random_density(3, rng);
  auto rates = linspace(0.0, 2.0, 11);
  ExponentCurve c = sc_exponent_curve(r, r, rates, default_alpha_grid());
  REQUIRE(c.points.size() == rates.size());
  for (const auto& pt : c.points) CHECK(pt.exponent == doctest::Approx(pt.rate).epsilon(1e-12));
}

TEST_CASE("exponent curve matches the classical brute force") {
  std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  DensityOperator r = DensityOperator::diagonal(p), s = DensityOperator::diagonal(q);
  double d = div::relative_entropy(r, s).value();
  auto rates = linspace(0.0, 1.5, 16);
  rates.push_back(d + 1e-6);
  ExponentCurve c = sc_exponent_curve(r, s, rates, default_alpha_grid());
  for (const auto& pt : c.points) {
    double expected = classical_exponent(p, q, pt.rate);
    CHECK(pt.exponent <= expected + 1e-9);
    CHECK(pt.exponent >= expected - 1e-6);
  }
  CHECK(c.points.back().exponent <= 1e-4);
}

TEST_CASE("exponent threshold at the relative entropy") {
  for (const auto& pr : fixture::noncommuting_qubit_pairs()) {
    double d = div::relative_entropy(pr.rho, pr.sigma).value();
    ExponentCurve c = sc_exponent_curve(pr.rho, pr.sigma, {d - 1e-3, d + 1e-2}, default_alpha_grid());
    CHECK(c.points[0].exponent == 0.0);
    CHECK(c.points[1].exponent >= 1e-6);
  }
}

TEST_CASE("exponent curve is nondecreasing and convex") {
  rnd::Rng rng(421);
  auto rates = linspace(0.0, 3.0, 61);
  for (int k = 0; k < 10; ++k) {
    DensityOperator r = rnd::random_density(3, rng), s = rnd::random_density(3, rng);
    ExponentCurve c = sc_exponent_curve(r, s, rates, default_alpha_grid());
    CHECK_FALSE(c.support_violation);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      CHECK(c.points[i].exponent >= 0.0);
      if (i > 0) CHECK(c.points[i].exponent >= c.points[i - 1].exponent - 1e-12);
      if (i > 0 && i + 1 < c.points.size()) {
        double mid = 0.5 * (c.points[i - 1].exponent + c.points[i + 1].exponent);
        CHECK(c.points[i].exponent <= mid + 1e-12);
      }
    }
  }
}

TEST_CASE("exponent curve support violation") {
  ExponentCurve c = sc_exponent_curve(fixture::plus_state(), diag({1.0, 0.0}), {0.1, 1.0}, default_alpha_grid());
  CHECK(c.support_violation);
}

TEST_CASE("neyman pearson examples") {
  rnd::Rng rng(431);
  DensityOperator r = rnd::random_density(3, rng), s = rnd::random_density(3, rng);
  TestOutcome zero = evaluate_test(r, s, neyman_pearson_test(r, s, 0.0));
  CHECK(zero.type1_success == doctest::Approx(1.0).epsilon(1e-12));
  TestOutcome huge = evaluate_test(r, s, neyman_pearson_test(r, s, 1e12));
  CHECK(huge.type2_error <= 1e-9);
  // Commuting pair: the classical likelihood-ratio indicator.
  std::vector<double> p{0.2, 0.3, 0.5}, q{0.6, 0.1, 0.3};
  Effect t = neyman_pearson_test(DensityOperator::diagonal(p), DensityOperator::diagonal(q), 1.5);
  for (int i = 0; i < 3; ++i) {
    double expected = p[static_cast<std::size_t>(i)] >= 1.5 * q[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    CHECK(t.matrix()(i, i).real() == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK_THROWS(neyman_pearson_test(r, s, -1.0));
}

TEST_CASE("neyman pearson monotonicity") {
  rnd::Rng rng(433);
  for (int k = 0; k < 20; ++k) {
    DensityOperator r = rnd::random_density(3, rng), s = rnd::random_density(3, rng);
    TestOutcome prev{1.0 + 1e-12, 1.0 + 1e-12};
    for (double mu = 0.0; mu < 20.0; mu += 0.25) {
      TestOutcome o = evaluate_test(r, s, neyman_pearson_test(r, s, mu));
      CHECK(o.type1_success >= -1e-12);
      CHECK(o.type2_error <= 1.0 + 1e-12);
      CHECK(o.type1_success <= prev.type1_success + 1e-12);
      CHECK(o.type2_error <= prev.type2_error + 1e-12);
      prev = o;
    }
  }
}

TEST_CASE("nfold tradeoff") {
  DensityOperator r = fixture::designated_rho(), s = fixture::designated_sigma();
  auto mus = linspace(0.05, 5.0, 50);
  auto one = nfold_tradeoff(r, s, 1, mus);
  for (std::size_t i = 0; i < mus.size(); ++i) {
    TestOutcome o = evaluate_test(r, s, neyman_pearson_test(r, s, mus[i]));
    CHECK(one[i].outcome.type1_success == doctest::Approx(o.type1_success).epsilon(1e-12));
    CHECK(one[i].outcome.type2_error == doctest::Approx(o.type2_error).epsilon(1e-12));
  }
  // rho = sigma: both probabilities coincide.
  for (const auto& pt : nfold_tradeoff(r, r, 2, mus)) {
    CHECK(pt.outcome.type1_success == doctest::Approx(pt.outcome.type2_error).epsilon(1e-10));
  }
  CHECK_THROWS_AS(nfold_tradeoff(r, s, 7, mus), BudgetExceeded);
}

TEST_CASE("nfold tradeoff obeys the single-copy exponent") {
  DensityOperator r = fixture::designated_rho(), s = fixture::designated_sigma();
  auto mus = linspace(0.05, 5.0, 50);
  for (int n : {1, 2, 3, 4}) {
    auto pts = nfold_tradeoff(r, s, n, mus);
    std::vector<double> rates;
    std::vector<const TradeoffPoint*> kept;
    for (const auto& pt : pts) {
      if (pt.outcome.type2_error <= 0.0 || pt.outcome.type1_success <= 0.0) continue;
      rates.push_back(-std::log(pt.outcome.type2_error) / n);
      kept.push_back(&pt);
    }
    ExponentCurve c = sc_exponent_curve(r, s, rates, default_alpha_grid());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      double lhs = -std::log(kept[i]->outcome.type1_success) / n;
      CHECK(lhs >= c.points[i].exponent - 1e-9);
    }
  }
}

TEST_CASE("regularized measured sequence") {
  std::vector<double> p{0.8, 0.2}, q{0.3, 0.7};
  DensityOperator cr = DensityOperator::diagonal(p), cs = DensityOperator::diagonal(q);
  div::OptimizerConfig cfg;
  cfg.restarts = 2;
  for (double v : regularized_measured_sequence(cr, cs, RenyiOrder::finite(2.0), 3, cfg)) {
    CHECK(v == doctest::Approx(oracle::classical(p, q, 2.0)).epsilon(1e-8));
  }
  for (double v : regularized_measured_sequence(cr, cr, RenyiOrder::finite(2.0), 2, cfg)) CHECK(std::abs(v) < 1e-10);
  CHECK_THROWS_AS(regularized_measured_sequence(cr, cs, RenyiOrder::finite(2.0), 4, cfg), BudgetExceeded);
}

TEST_CASE("regularized measured sequence closes the gap at two copies") {
  DensityOperator r = fixture::designated_rho(), s = fixture::designated_sigma();
  RenyiOrder a = RenyiOrder::finite(2.0);
  div::OptimizerConfig cfg;
  cfg.restarts = 64;
  auto seq = regularized_measured_sequence(r, s, a, 2, cfg);
  REQUIRE(seq.size() == 2);
  double upper = div::sandwiched_renyi(r, s, a).value();
  CHECK(seq[1] - seq[0] >= 1e-4);
  for (double v : seq) CHECK(v <= upper + 1e-6);
  // Regression values of this configuration.
  CHECK(seq[0] == doctest::Approx(0.693385).epsilon(1e-5));
  CHECK(seq[1] == doctest::Approx(0.695534).epsilon(1e-5));
}
