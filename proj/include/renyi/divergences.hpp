#pragma once

// Classical and quantum Renyi divergences (classical, Petz, sandwiched,
// Umegaki) and the variational objectives whose suprema recover the measured
// and sandwiched divergences. All logarithms are natural (nats).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "renyi/ext_real.hpp"
#include "renyi/opalg.hpp"
#include "renyi/order.hpp"

namespace renyi::div {

using opalg::DensityOperator;
using opalg::Effect;
using opalg::HermitianOperator;

/// Probability mass function. Entries in [-1e-10, 1e-14) are clamped to 0.
class ProbDist {
 public:
  explicit ProbDist(std::vector<double> weights);
  static ProbDist uniform(std::size_t n);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> weights() const { return w_; }

 private:
  std::vector<double> w_;
};

enum class DivergenceKind { Classical, Petz, Sandwiched, Measured };
enum class DivergenceStatus { Exact, LowerBound };

std::string to_string(DivergenceKind k);
std::string to_string(DivergenceStatus s);
DivergenceKind parse_kind(const std::string& text);

struct DivergenceResult {
  ExtReal value;
  RenyiOrder alpha = RenyiOrder::one();
  DivergenceKind kind = DivergenceKind::Sandwiched;
  DivergenceStatus status = DivergenceStatus::Exact;
  std::optional<opalg::Pvm> pvm_witness;
  std::optional<opalg::Effect> effect_witness;

  bool finite() const { return value.is_finite(); }
};

/// Classical Renyi divergence with the usual support conventions
/// (+inf when alpha >= 1 and supp p is not inside supp q).
ExtReal classical_renyi(const ProbDist& p, const ProbDist& q, RenyiOrder a);
/// Unvalidated variant over raw nonnegative weights (no normalization check).
ExtReal classical_renyi(std::span<const double> p, std::span<const double> q, RenyiOrder a);

/// Umegaki relative entropy Tr[rho (log rho - log sigma)].
ExtReal relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);

/// Sandwiched Renyi divergence. alpha = 1 gives the relative entropy and
/// alpha = inf gives log lambda_max(sigma^{-1/2} rho sigma^{-1/2}).
ExtReal sandwiched_renyi(const DensityOperator& rho, const DensityOperator& sigma, RenyiOrder a);

/// log Tr[(sigma^g rho sigma^g)^alpha], g = (1-alpha)/(2 alpha), pseudo-inverse
/// convention. -inf when the sandwiched operator vanishes. Support is not checked.
double sandwiched_log_q(const HermitianOperator& rho, const opalg::Spectrum& sigma, double alpha);

/// Petz Renyi divergence (1/(alpha-1)) log Tr[rho^alpha sigma^{1-alpha}].
/// Defined for alpha in (0, inf); alpha = 1 gives the relative entropy.
ExtReal petz_renyi(const DensityOperator& rho, const DensityOperator& sigma, RenyiOrder a);

/// alpha' log Tr[rho T] - log Tr[sigma T^alpha'], alpha' = alpha/(alpha-1).
/// For alpha in (0,1) T must be positive definite; returns -inf when
/// Tr[rho T] = 0 and alpha > 1.
ExtReal variational_objective_measured(const DensityOperator& rho, const DensityOperator& sigma,
                                       RenyiOrder a, const Effect& t);

/// alpha' log Tr[rho T] - log Tr[(T^{1/2} sigma^{1/alpha'} T^{1/2})^alpha'].
ExtReal variational_objective_sandwiched(const DensityOperator& rho, const DensityOperator& sigma,
                                         RenyiOrder a, const Effect& t);

/// Maximizer of the sandwiched objective for finite alpha > 1:
/// s |s rho s|^{alpha-1} s with s = sigma^{-(alpha-1)/(2 alpha)}, rescaled to
/// operator norm 1.
Effect optimal_sandwiched_test(const DensityOperator& rho, const DensityOperator& sigma, RenyiOrder a);

/// Tr[rho log T] - log Tr[sigma T] for positive definite T.
double measured_alpha1_objective(const DensityOperator& rho, const DensityOperator& sigma,
                                 const Effect& t);

/// (alpha/(alpha-1)) log Tr[(T^{a/2} rho^a T^{a/2})^{1/a}]
///   - log Tr[(T^{a/2} sigma^{a-1} T^{a/2})^{1/(a-1)}], finite alpha > 1.
ExtReal petz_variational_objective(const DensityOperator& rho, const DensityOperator& sigma,
                                   RenyiOrder a, const Effect& t);

/// Unitary whose columns simultaneously diagonalize two commuting operators,
/// or nullopt if none is found.
std::optional<opalg::Matrix> common_eigenbasis(const HermitianOperator& a, const HermitianOperator& b);

/// ||[rho, sigma]|| below this counts as commuting.
inline constexpr double kCommuteTol = 1e-12;

}  // namespace renyi::div
