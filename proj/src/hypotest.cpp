#include "renyi/hypotest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace renyi::hypotest {

using opalg::DomainError;
using opalg::HermitianOperator;
using opalg::Index;
using opalg::Matrix;

namespace {

constexpr double kOrthogonalTol = 1e-14;
constexpr double kGolden = 0.6180339887498949;

/// s = (alpha - 1) / alpha  <->  alpha = 1 / (1 - s).
RenyiOrder order_from_ratio(double s) {
  if (s <= 0.0) return RenyiOrder::one();
  if (s >= 1.0) return RenyiOrder::infinity();
  return RenyiOrder::from_value(1.0 / (1.0 - s));
}

void check_dims(const DensityOperator& rho, const DensityOperator& sigma, const char* what) {
  if (rho.dim() != sigma.dim()) throw opalg::DimensionError(std::string(what) + ": dimension mismatch");
}

/// D*_alpha as a function of s, memoized; every evaluated s stays available
/// so that all rates share one family of affine lower bounds.
class SandwichedTable {
 public:
  SandwichedTable(const DensityOperator& rho, const DensityOperator& sigma) : rho_(rho), sigma_(sigma) {}

  double at(double s) {
    auto it = cache_.find(s);
    if (it != cache_.end()) return it->second;
    double d = div::sandwiched_renyi(rho_, sigma_, order_from_ratio(s)).to_double();
    cache_.emplace(s, d);
    return d;
  }

  const std::map<double, double>& entries() const { return cache_; }

 private:
  const DensityOperator& rho_;
  const DensityOperator& sigma_;
  std::map<double, double> cache_;
};

double affine(double s, double d, double r) {
  if (s == 0.0) return 0.0;
  if (std::isinf(d)) return -std::numeric_limits<double>::infinity();
  return s * (r - d);
}

}  // namespace

TestOutcome evaluate_test(const DensityOperator& rho, const DensityOperator& sigma, const Effect& t) {
  check_dims(rho, sigma, "evaluate_test");
  if (t.dim() != rho.dim()) throw opalg::DimensionError("evaluate_test: dimension mismatch");
  TestOutcome out;
  out.type1_success = std::clamp(opalg::trace_product(rho.op(), t.op()), 0.0, 1.0);
  out.type2_error = std::clamp(opalg::trace_product(sigma.op(), t.op()), 0.0, 1.0);
  return out;
}

std::vector<RenyiOrder> default_alpha_grid() {
  std::vector<RenyiOrder> grid{RenyiOrder::one()};
  for (int k = -6; k <= 4; ++k) grid.push_back(RenyiOrder::finite(1.0 + std::pow(10.0, 0.5 * k)));
  grid.push_back(RenyiOrder::infinity());
  return grid;
}

std::vector<RenyiOrder> parse_alpha_grid(const std::string& text) {
  std::vector<RenyiOrder> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    auto last = item.find_last_not_of(" \t");
    grid.push_back(RenyiOrder::parse(std::string_view(item).substr(first, last - first + 1)));
  }
  if (grid.empty()) throw std::invalid_argument("empty alpha grid");
  return grid;
}

BoundResult sc_bound(const DensityOperator& rho, const DensityOperator& sigma, const Effect& t,
                     const std::vector<RenyiOrder>& alphas) {
  check_dims(rho, sigma, "sc_bound");
  if (std::none_of(alphas.begin(), alphas.end(), [](const RenyiOrder& a) { return a.is_one(); })) {
    throw std::invalid_argument("sc_bound: the alpha grid must contain 1");
  }
  TestOutcome o = evaluate_test(rho, sigma, t);
  if (o.type1_success <= kOrthogonalTol) throw DomainError("sc_bound: test is orthogonal to rho");

  auto common = div::common_eigenbasis(rho.op(), sigma.op());
  const double log_beta = std::log(o.type2_error);  // -inf when Tr[sigma T] = 0

  BoundResult best;
  best.bound = std::numeric_limits<double>::infinity();
  for (const RenyiOrder& a : alphas) {
    if (a.below_one()) throw std::invalid_argument("sc_bound: alpha must be >= 1");
    double log_bound = 0.0;
    if (!a.is_one()) {
      ExtReal d = common ? div::basis_divergence(rho, sigma, a, *common) : div::sandwiched_renyi(rho, sigma, a);
      if (d.is_pos_inf()) continue;
      log_bound = a.ratio() * (log_beta + d.to_double());
    }
    double b = std::exp(log_bound);
    if (b < best.bound) {
      best.bound = b;
      best.argmax_alpha = a;
    }
  }
  return best;
}

ExponentCurve sc_exponent_curve(const DensityOperator& rho, const DensityOperator& sigma,
                                const std::vector<double>& rates, const std::vector<RenyiOrder>& alphas,
                                int refine_iterations) {
  check_dims(rho, sigma, "sc_exponent_curve");
  ExponentCurve curve;
  curve.support_violation = !opalg::support_contained(rho.op(), sigma.spectrum());
  if (curve.support_violation) {
    for (double r : rates) curve.points.push_back({r, 0.0, RenyiOrder::one()});
    return curve;
  }

  std::vector<double> grid;
  for (const RenyiOrder& a : alphas) {
    if (a.below_one()) throw std::invalid_argument("sc_exponent_curve: alpha must be >= 1");
    grid.push_back(a.ratio());
  }
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  SandwichedTable table(rho, sigma);
  for (double s : grid) table.at(s);

  for (double r : rates) {
    auto f = [&](double s) { return affine(s, table.at(s), r); };
    std::size_t k = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (f(grid[i]) > f(grid[k])) k = i;
    }
    if (refine_iterations > 0 && grid.size() > 1) {
      double lo = grid[k == 0 ? 0 : k - 1];
      double hi = grid[std::min(k + 1, grid.size() - 1)];
      double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
      double f1 = f(x1), f2 = f(x2);
      for (int it = 0; it < refine_iterations; ++it) {
        if (f1 < f2) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + kGolden * (hi - lo);
          f2 = f(x2);
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - kGolden * (hi - lo);
          f1 = f(x1);
        }
      }
    }
  }

  // Every rate takes the supremum over all evaluated orders, which keeps the
  // curve nondecreasing and convex in r.
  for (double r : rates) {
    CurvePoint pt{r, 0.0, RenyiOrder::one()};
    for (const auto& [s, d] : table.entries()) {
      double v = affine(s, d, r);
      if (v > pt.exponent) {
        pt.exponent = v;
        pt.argmax_alpha = order_from_ratio(s);
      }
    }
    curve.points.push_back(pt);
  }
  return curve;
}

Effect neyman_pearson_test(const DensityOperator& rho, const DensityOperator& sigma, double mu) {
  check_dims(rho, sigma, "neyman_pearson_test");
  if (!(mu >= 0.0) || std::isinf(mu)) throw std::invalid_argument("neyman_pearson_test: mu must be finite and >= 0");
  opalg::Spectrum s = opalg::spectrum(rho.op() - sigma.op() * mu);
  const double tol = 1e-12 * std::max(1.0, mu);
  return Effect(opalg::apply_spectral(s, [&](double v) { return v >= -tol ? 1.0 : 0.0; }));
}

std::vector<TradeoffPoint> nfold_tradeoff(const DensityOperator& rho, const DensityOperator& sigma, int n,
                                          const std::vector<double>& mus) {
  check_dims(rho, sigma, "nfold_tradeoff");
  if (n < 1) throw std::invalid_argument("nfold_tradeoff: n must be >= 1");
  double dim = std::pow(static_cast<double>(rho.dim()), n);
  if (dim > static_cast<double>(kMaxDim)) {
    throw BudgetExceeded("nfold_tradeoff: dimension " + format_double(dim) + " exceeds " + std::to_string(kMaxDim));
  }
  DensityOperator rn = opalg::tensor_power(rho, n);
  DensityOperator sn = opalg::tensor_power(sigma, n);
  std::vector<TradeoffPoint> out;
  out.reserve(mus.size());
  for (double mu : mus) {
    Effect t = neyman_pearson_test(rn, sn, mu);
    out.push_back({n, mu, evaluate_test(rn, sn, t)});
  }
  return out;
}

std::vector<double> regularized_measured_sequence(const DensityOperator& rho, const DensityOperator& sigma,
                                                  RenyiOrder a, int n_max, const div::OptimizerConfig& cfg) {
  check_dims(rho, sigma, "regularized_measured_sequence");
  if (n_max < 1) throw std::invalid_argument("regularized_measured_sequence: n_max must be >= 1");
  double dim = std::pow(static_cast<double>(rho.dim()), n_max);
  if (dim > static_cast<double>(kMaxMeasuredDim)) {
    throw BudgetExceeded("regularized_measured_sequence: dimension " + format_double(dim) + " exceeds " +
                         std::to_string(kMaxMeasuredDim));
  }
  std::vector<double> out;
  Matrix single;
  Matrix previous;
  for (int n = 1; n <= n_max; ++n) {
    DensityOperator rn = opalg::tensor_power(rho, n);
    DensityOperator sn = opalg::tensor_power(sigma, n);
    div::OptimizerConfig c = cfg;
    // Product of the best smaller bases: at least as good as the previous entry.
    if (n > 1) c.initial_bases.insert(c.initial_bases.begin(), opalg::kron_matrix(previous, single));
    div::MeasuredResult m = div::measured_renyi(rn, sn, a, c);
    if (n == 1) single = m.basis;
    previous = m.basis;
    ExtReal v = m.result.value;
    out.push_back(v.is_finite() ? v.value() / n : v.to_double());
  }
  return out;
}

}  // namespace renyi::hypotest
