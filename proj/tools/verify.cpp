#include "verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "renyi/cqcoding.hpp"
#include "renyi/divergences.hpp"
#include "renyi/holder.hpp"
#include "renyi/hypotest.hpp"
#include "renyi/measured.hpp"
#include "renyi/parallel.hpp"
#include "renyi/random.hpp"

namespace renyi::verify {

using div::DivergenceKind;
using opalg::DensityOperator;
using opalg::Effect;
using opalg::HermitianOperator;
using opalg::Index;

namespace {

struct Item {
  std::size_t checks = 0;
  std::vector<Failure> failures;
};

class Checker {
 public:
  Checker(std::string suite, std::uint64_t index, Item& item) : suite_(std::move(suite)), index_(index), item_(item) {}

  void expect(bool ok, const std::string& check, io::json values) {
    ++item_.checks;
    if (!ok) item_.failures.push_back({suite_, check, index_, std::move(values)});
  }

 private:
  std::string suite_;
  std::uint64_t index_;
  Item& item_;
};

io::json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

const RenyiOrder kTwo = RenyiOrder::finite(2.0);

void holder_item(rnd::Rng& rng, Checker& c) {
  const Index d = 2 + static_cast<Index>(rng() % 2);
  for (double alpha : {1.5, 2.0, 4.0}) {
    HermitianOperator x = rnd::random_psd(d, rng), y = rnd::random_psd(d, rng), s = rnd::random_psd(d, rng);
    div::HolderRecord h = div::holder_check(x, y, s, RenyiOrder::finite(alpha));
    c.expect(h.holds, "holder_forward", {{"alpha", alpha}, {"lhs", h.lhs}, {"rhs", h.rhs}});
  }
  for (double alpha : {0.3, 0.7}) {
    HermitianOperator x = rnd::random_psd(d, rng), y = rnd::random_psd(d, rng), s = rnd::random_psd(d, rng);
    div::HolderRecord h = div::holder_check(x, y, s, RenyiOrder::finite(alpha));
    c.expect(h.holds, "holder_reverse", {{"alpha", alpha}, {"lhs", h.lhs}, {"rhs", h.rhs}});
  }
  for (double alpha : {1.5, 3.0}) {
    RenyiOrder a = RenyiOrder::finite(alpha);
    HermitianOperator x = rnd::random_psd(d, rng);
    HermitianOperator s = rnd::random_density(d, rng).op();
    div::HolderRecord h = div::holder_check(x, div::holder_equality_witness(x, s, a), s, a);
    c.expect(std::abs(h.gap) <= 1e-10 * std::max(1.0, h.rhs), "holder_equality",
             {{"alpha", alpha}, {"gap", h.gap}, {"rhs", h.rhs}});
  }
}

/// Largest improvement of the sandwiched objective over local perturbations of t.
double perturbation_gain(const DensityOperator& r, const DensityOperator& s, RenyiOrder a, const Effect& t,
                         int directions, double step, rnd::Rng& rng) {
  const double base = div::variational_objective_sandwiched(r, s, a, t).to_double();
  double gain = -INFINITY;
  for (int k = 0; k < directions; ++k) {
    HermitianOperator moved = t.op() + rnd::random_direction(t.dim(), rng) * step;
    opalg::Spectrum sp = opalg::spectrum(moved);
    if (sp.values.minCoeff() < 0.0) continue;
    Effect e(moved * (1.0 / sp.values.maxCoeff()));
    gain = std::max(gain, div::variational_objective_sandwiched(r, s, a, e).to_double() - base);
  }
  return gain;
}

void variational_item(rnd::Rng& rng, Checker& c) {
  const Index d = 2 + static_cast<Index>(rng() % 2);
  DensityOperator r = rnd::random_density(d, rng), s = rnd::random_density(d, rng);
  for (double alpha : {1.5, 2.0, 3.0}) {
    RenyiOrder a = RenyiOrder::finite(alpha);
    double dstar = div::sandwiched_renyi(r, s, a).value();
    Effect t = div::optimal_sandwiched_test(r, s, a);
    double obj = div::variational_objective_sandwiched(r, s, a, t).value();
    c.expect(std::abs(obj - dstar) <= 1e-8, "optimal_test_saturates",
             {{"alpha", alpha}, {"objective", obj}, {"sandwiched", dstar}});
    double gain = perturbation_gain(r, s, a, t, 20, 1e-4, rng);
    c.expect(gain <= 1e-7, "optimal_test_local_max", {{"alpha", alpha}, {"gain", num(gain)}});
  }
  Effect t = rnd::random_positive_effect(d, 1e-3, rng);
  for (double alpha : {0.5, 0.8, 2.0, 3.0}) {
    RenyiOrder a = RenyiOrder::finite(alpha);
    double dstar = div::sandwiched_renyi(r, s, a).value();
    double m = div::variational_objective_measured(r, s, a, t).to_double();
    double w = div::variational_objective_sandwiched(r, s, a, t).to_double();
    c.expect(m <= dstar + 1e-10 && w <= dstar + 1e-10, "variational_upper_bound",
             {{"alpha", alpha}, {"measured_objective", num(m)}, {"sandwiched_objective", num(w)},
              {"sandwiched", dstar}});
  }
  double rel = div::relative_entropy(r, s).value();
  double a1 = div::measured_alpha1_objective(r, s, t);
  c.expect(a1 <= rel + 1e-10, "alpha1_objective_bound", {{"objective", a1}, {"relative_entropy", rel}});
  double pv = div::petz_variational_objective(r, s, kTwo, t).to_double();
  double petz = div::petz_renyi(r, s, kTwo).value();
  c.expect(pv <= petz + 1e-10, "petz_objective_bound", {{"objective", num(pv)}, {"petz", petz}});
  c.expect(petz >= div::sandwiched_renyi(r, s, kTwo).value() - 1e-12, "petz_above_sandwiched", {{"petz", petz}});

  // Ordering against the measured divergence (qubits keep the search cheap).
  DensityOperator r2 = rnd::random_density(2, rng), s2 = rnd::random_density(2, rng);
  div::OptimizerConfig cfg;
  cfg.restarts = 2;
  cfg.seed = rng();
  div::MeasuredResult mr = div::measured_renyi(r2, s2, kTwo, cfg);
  double mv = mr.result.value.value(), sv = mr.upper_bound.value();
  c.expect(mv <= sv + 1e-9, "measured_below_sandwiched", {{"measured", mv}, {"sandwiched", sv}});

  // Additivity and continuity.
  DensityOperator r3 = rnd::random_density(2, rng), s3 = rnd::random_density(2, rng);
  for (const RenyiOrder& a : {RenyiOrder::one(), kTwo, RenyiOrder::infinity()}) {
    double joint = div::sandwiched_renyi(opalg::kron(r2, r3), opalg::kron(s2, s3), a).value();
    double sum = div::sandwiched_renyi(r2, s2, a).value() + div::sandwiched_renyi(r3, s3, a).value();
    c.expect(std::abs(joint - sum) <= 1e-8, "sandwiched_additivity",
             {{"alpha", a.to_string()}, {"joint", joint}, {"sum", sum}});
  }
  for (double alpha : {1.0 - 1e-4, 1.0 + 1e-4}) {
    double v = div::sandwiched_renyi(r, s, RenyiOrder::finite(alpha)).value();
    c.expect(std::abs(v - rel) <= 1e-3, "continuity_at_one", {{"alpha", alpha}, {"value", v}, {"limit", rel}});
  }
  double dinf = div::sandwiched_renyi(r, s, RenyiOrder::infinity()).value();
  double dbig = div::sandwiched_renyi(r, s, RenyiOrder::finite(1e4)).value();
  c.expect(std::abs(dinf - dbig) <= 1e-3, "continuity_at_infinity", {{"inf", dinf}, {"alpha_1e4", dbig}});
}

void converse_item(rnd::Rng& rng, std::uint64_t index, Checker& c) {
  static const std::vector<RenyiOrder> grid = hypotest::default_alpha_grid();
  const Index d = 2 + static_cast<Index>(index % 3);
  for (Index dim : {Index{2}, d}) {
    DensityOperator r = rnd::random_density(dim, rng), s = rnd::random_density(dim, rng);
    Effect t = rnd::random_effect(dim, rng);
    hypotest::TestOutcome o = hypotest::evaluate_test(r, s, t);
    if (o.type1_success > 1e-14) {
      double b = hypotest::sc_bound(r, s, t, grid).bound;
      c.expect(o.type1_success <= b + 1e-12, "sc_bound_random_test",
               {{"dim", dim}, {"type1_success", o.type1_success}, {"bound", b}});
    }
    Effect np = hypotest::neyman_pearson_test(r, s, std::exp(std::uniform_real_distribution<double>(-2, 2)(rng)));
    o = hypotest::evaluate_test(r, s, np);
    if (o.type1_success > 1e-14) {
      double b = hypotest::sc_bound(r, s, np, grid).bound;
      c.expect(o.type1_success <= b + 1e-12, "sc_bound_neyman_pearson",
               {{"dim", dim}, {"type1_success", o.type1_success}, {"bound", b}});
    }
  }
  DensityOperator r = rnd::random_density(2, rng), s = rnd::random_density(2, rng);
  double rel = div::relative_entropy(r, s).value();
  std::vector<double> rates{rel - 1e-3, rel + 1e-2};
  for (int k = 0; k <= 10; ++k) rates.push_back(0.2 * k);
  hypotest::ExponentCurve curve = hypotest::sc_exponent_curve(r, s, rates, grid);
  c.expect(curve.points[0].exponent == 0.0 && curve.points[1].exponent > 0.0, "exponent_threshold",
           {{"relative_entropy", rel}, {"below", curve.points[0].exponent}, {"above", curve.points[1].exponent}});
  bool shape = true;
  for (std::size_t i = 2; i < curve.points.size(); ++i) {
    double e = curve.points[i].exponent;
    shape = shape && e >= 0.0;
    if (i > 2) shape = shape && e >= curve.points[i - 1].exponent - 1e-12;
    if (i > 2 && i + 1 < curve.points.size()) {
      shape = shape && e <= 0.5 * (curve.points[i - 1].exponent + curve.points[i + 1].exponent) + 1e-12;
    }
  }
  c.expect(shape, "exponent_monotone_convex", {{"relative_entropy", rel}});
}

void coding_item(rnd::Rng& rng, Checker& c) {
  static const std::vector<RenyiOrder> grid = hypotest::default_alpha_grid();
  cq::CqChannel ch({rnd::random_density(2, rng), rnd::random_density(2, rng)});
  cq::Codebook two({0, 1}, 2);
  double b2 = cq::coding_upper_bound(ch, two.empirical(2), 2, grid);
  double hel = cq::helstrom_success(ch, two), pgm2 = cq::pgm_success(ch, two);
  c.expect(hel <= b2 + 1e-10 && pgm2 <= b2 + 1e-10, "converse_two_messages",
           {{"helstrom", hel}, {"pgm", pgm2}, {"bound", b2}});
  std::vector<std::size_t> word(4);
  for (auto& x : word) x = rng() % 2;
  cq::Codebook four(word, 2);
  double b4 = cq::coding_upper_bound(ch, four.empirical(2), 4, grid);
  double pgm4 = cq::pgm_success(ch, four);
  c.expect(pgm4 <= b4 + 1e-10, "converse_four_messages", {{"pgm", pgm4}, {"bound", b4}});

  Effect t = hypotest::neyman_pearson_test(ch.output(0), ch.output(1), 1.0);
  opalg::Povm helstrom({t.op(), HermitianOperator::identity(2) - t.op()});
  DensityOperator sigma = rnd::random_density(2, rng);
  for (const RenyiOrder& a : {RenyiOrder::one(), kTwo}) {
    cq::DirectSumRecord rec = cq::direct_sum_reduction_check(ch, two, helstrom, sigma, a);
    c.expect(rec.passes, "direct_sum_reduction",
             {{"alpha", a.to_string()}, {"success", rec.success}, {"omega_success", rec.omega_success},
              {"omega_type2", rec.omega_type2}, {"divergence_omega", rec.divergence_omega},
              {"divergence_rho", rec.divergence_rho}});
  }

  div::ProbDist p(rnd::random_simplex(2, rng));
  cq::MutualInfoResult mi = cq::renyi_mutual_info(ch, p, kTwo, DivergenceKind::Sandwiched);
  double base = mi.value.value();
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    DensityOperator tau = rnd::random_density(2, rng);
    DensityOperator moved =
        DensityOperator::normalized(mi.sigma_star.op() * (1.0 - 1e-4) + tau.op() * 1e-4);
    double v = cq::mutual_info_objective(ch, p, kTwo, DivergenceKind::Sandwiched, moved).value();
    worst = std::min(worst, v - base);
  }
  c.expect(worst >= -1e-6, "sigma_star_first_order", {{"value", base}, {"decrease", worst}});
  cq::SolverConfig mcfg;
  mcfg.measured.restarts = 2;
  double measured = cq::renyi_mutual_info(ch, p, kTwo, DivergenceKind::Measured, mcfg).value.value();
  c.expect(base >= measured - 1e-6, "measured_information_below_sandwiched",
           {{"sandwiched", base}, {"measured", measured}});
  double cap = cq::renyi_capacity(ch, kTwo, DivergenceKind::Sandwiched).value.value();
  c.expect(cap >= base - 1e-9 && cap <= std::log(2.0) + 1e-10, "capacity_range",
           {{"capacity", cap}, {"information", base}});
}

using ItemFn = std::function<void(rnd::Rng&, std::uint64_t, Checker&)>;

const std::map<std::string, ItemFn>& suites() {
  static const std::map<std::string, ItemFn> table{
      {"holder", [](rnd::Rng& g, std::uint64_t, Checker& c) { holder_item(g, c); }},
      {"variational", [](rnd::Rng& g, std::uint64_t, Checker& c) { variational_item(g, c); }},
      {"converse", [](rnd::Rng& g, std::uint64_t k, Checker& c) { converse_item(g, k, c); }},
      {"coding", [](rnd::Rng& g, std::uint64_t, Checker& c) { coding_item(g, c); }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"holder", "variational", "converse", "coding"};
  return names;
}

SuiteReport run_suite(const std::string& suite, std::size_t seeds, std::uint64_t seed) {
  auto it = suites().find(suite);
  if (it == suites().end()) throw std::invalid_argument("unknown suite '" + suite + "'");
  const ItemFn& fn = it->second;
  auto start = std::chrono::steady_clock::now();
  std::vector<Item> items = parallel_map<Item>(seeds, [&](std::size_t k) {
    Item item;
    Checker c(suite, k, item);
    rnd::Rng rng = rnd::substream(seed, k);
    try {
      fn(rng, k, c);
    } catch (const std::exception& e) {
      c.expect(false, "exception", {{"what", e.what()}});
    }
    return item;
  });
  SuiteReport report;
  report.suite = suite;
  report.instances = seeds;
  for (auto& item : items) {
    report.checks += item.checks;
    for (auto& f : item.failures) report.failures.push_back(std::move(f));
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

io::json to_json(const SuiteReport& r) {
  io::json failures = io::json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"suite", f.suite}, {"check", f.check}, {"index", f.index}, {"values", f.values}});
  }
  return {{"suite", r.suite},
          {"instances", r.instances},
          {"checks", r.checks},
          {"passed", r.failures.empty()},
          {"failures", failures}};
}

}  // namespace renyi::verify
