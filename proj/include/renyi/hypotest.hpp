#pragma once

// One-shot strong-converse bounds and exponent curves for binary quantum
// hypothesis testing between rho (null) and sigma (alternative).

#include <string>
#include <vector>

#include "renyi/divergences.hpp"
#include "renyi/measured.hpp"

namespace renyi::hypotest {

using opalg::DensityOperator;
using opalg::Effect;

using opalg::BudgetExceeded;

/// Largest operator dimension handled by the n-fold studies.
inline constexpr opalg::Index kMaxDim = 64;

struct TestOutcome {
  double type1_success = 0.0;  // Tr[rho T]
  double type2_error = 0.0;    // Tr[sigma T]
};

TestOutcome evaluate_test(const DensityOperator& rho, const DensityOperator& sigma, const Effect& t);

struct CurvePoint {
  double rate = 0.0;
  double exponent = 0.0;
  RenyiOrder argmax_alpha = RenyiOrder::one();
};

struct ExponentCurve {
  std::vector<CurvePoint> points;
  /// Set when supp(rho) is not inside supp(sigma); all exponents are then 0.
  bool support_violation = false;
};

/// Default order grid: {1} U {1 + 10^k : k = -3, -2.5, ..., 2} U {inf} (13 points).
std::vector<RenyiOrder> default_alpha_grid();
/// Parses a comma separated list ("1,1.5,2,inf").
std::vector<RenyiOrder> parse_alpha_grid(const std::string& text);

struct BoundResult {
  double bound = 1.0;
  RenyiOrder argmax_alpha = RenyiOrder::one();
};

/// min over the grid of exp(-((a-1)/a)(-log Tr[sigma T] - D_a)) with D_a the
/// sandwiched divergence (the exact measured value for commuting pairs). The
/// grid must contain alpha = 1; T must not be orthogonal to rho.
BoundResult sc_bound(const DensityOperator& rho, const DensityOperator& sigma, const Effect& t,
                     const std::vector<RenyiOrder>& alphas);

/// Pointwise sup over alpha >= 1 of ((a-1)/a)(r - D*_a), grid maximum refined
/// by golden-section search in s = (a-1)/a over the neighbouring grid cell.
ExponentCurve sc_exponent_curve(const DensityOperator& rho, const DensityOperator& sigma,
                                const std::vector<double>& rates, const std::vector<RenyiOrder>& alphas,
                                int refine_iterations = 20);

/// Projector onto the nonnegative eigenspace of rho - mu sigma.
Effect neyman_pearson_test(const DensityOperator& rho, const DensityOperator& sigma, double mu);

struct TradeoffPoint {
  int n = 1;
  double mu = 0.0;
  TestOutcome outcome;
};

/// Neyman-Pearson trade-off on rho^{(x)n} versus sigma^{(x)n}.
std::vector<TradeoffPoint> nfold_tradeoff(const DensityOperator& rho, const DensityOperator& sigma, int n,
                                          const std::vector<double>& mus);

/// Per-copy measured lower bounds (1/n) D^M(rho^{(x)n} || sigma^{(x)n}) for n = 1..n_max.
std::vector<double> regularized_measured_sequence(const DensityOperator& rho, const DensityOperator& sigma,
                                                  RenyiOrder a, int n_max, const div::OptimizerConfig& cfg = {});

/// Largest operator dimension reachable by regularized_measured_sequence.
inline constexpr opalg::Index kMaxMeasuredDim = 8;

}  // namespace renyi::hypotest
