#pragma once

// Classical-quantum channel coding: Renyi mutual information and capacity,
// the randomness-assisted strong-converse bound, coding exponent curves and
// achievable decoder baselines (Helstrom, pretty-good measurement).

#include <cstdint>
#include <optional>
#include <vector>

#include "renyi/divergences.hpp"
#include "renyi/hypotest.hpp"
#include "renyi/measured.hpp"

namespace renyi::cq {

using div::DivergenceKind;
using div::DivergenceStatus;
using div::ProbDist;
using opalg::DensityOperator;
using opalg::Index;

/// x -> rho_B^x on a common output dimension.
class CqChannel {
 public:
  explicit CqChannel(std::vector<DensityOperator> outputs);

  std::size_t input_size() const { return outputs_.size(); }
  Index output_dim() const { return outputs_.front().dim(); }
  const DensityOperator& output(std::size_t x) const { return outputs_.at(x); }
  const std::vector<DensityOperator>& outputs() const { return outputs_; }

 private:
  std::vector<DensityOperator> outputs_;
};

/// Alphabet X1 x X2 (letter x1 * |X2| + x2), outputs rho^{x1} (x) rho^{x2}.
CqChannel product_channel(const CqChannel& a, const CqChannel& b);

/// Deterministic encoder m -> x(m) for equiprobable messages.
class Codebook {
 public:
  Codebook(std::vector<std::size_t> codewords, std::size_t alphabet_size);

  std::size_t message_count() const { return codewords_.size(); }
  std::size_t operator[](std::size_t m) const { return codewords_[m]; }
  const std::vector<std::size_t>& codewords() const { return codewords_; }
  /// Fraction of messages mapped to each letter.
  ProbDist empirical(std::size_t alphabet_size) const;

 private:
  std::vector<std::size_t> codewords_;
};

/// rho_XB = sum_x p(x) |x><x| (x) rho_B^x.
struct JointState {
  DensityOperator rho_xb;
  ProbDist p;
  Index d_x;
  Index d_b;
};

JointState joint_state(const CqChannel& ch, const ProbDist& p);

struct SolverConfig {
  /// Stop once one descent step improves the objective by less than this (relative).
  double improvement_tol = 1e-9;
  int max_iterations = 400;
  double fd_step = 1e-6;
  /// Outer restarts of the capacity maximization.
  int capacity_restarts = 8;
  int capacity_iterations = 200;
  std::uint64_t seed = 0x5eed2023ULL;
  /// Inner measured-divergence search.
  div::OptimizerConfig measured;
  /// Starting point of the sigma search; defaults to the output average.
  std::optional<DensityOperator> sigma_start;
  /// Starting point of the input-distribution search (added to the restarts).
  std::optional<ProbDist> p_start;
};

/// Largest d_X * d_B for which the measured kind is evaluated.
inline constexpr Index kMaxMeasuredJointDim = 8;

struct MutualInfoResult {
  ExtReal value;
  DensityOperator sigma_star;
  DivergenceStatus status = DivergenceStatus::Exact;
  bool converged = true;
  int iterations = 0;
};

/// inf over sigma_B of D_alpha(rho_XB || rho_X (x) sigma_B) for kind sandwiched
/// or measured, by entropic mirror descent over sigma_B.
MutualInfoResult renyi_mutual_info(const CqChannel& ch, const ProbDist& p, RenyiOrder a, DivergenceKind kind,
                                   const SolverConfig& cfg = {});

/// D_alpha(rho_XB || rho_X (x) sigma_B) at a fixed sigma_B.
ExtReal mutual_info_objective(const CqChannel& ch, const ProbDist& p, RenyiOrder a, DivergenceKind kind,
                              const DensityOperator& sigma, const div::OptimizerConfig& cfg = {});

struct CapacityResult {
  ExtReal value;
  ProbDist p_star;
  DensityOperator sigma_star;
  DivergenceStatus status = DivergenceStatus::Exact;
  bool converged = true;
};

/// sup over p_X of the Renyi mutual information, alpha >= 1.
CapacityResult renyi_capacity(const CqChannel& ch, RenyiOrder a, DivergenceKind kind, const SolverConfig& cfg = {});

/// min over the grid (alpha >= 1) of exp(-((a-1)/a)(log M - I_a)), clamped to at most 1.
double coding_upper_bound(const CqChannel& ch, const ProbDist& p, std::size_t message_count,
                          const std::vector<RenyiOrder>& alphas,
                          DivergenceKind kind = DivergenceKind::Sandwiched, const SolverConfig& cfg = {});

/// Optimal success probability for two equiprobable messages.
double helstrom_success(const CqChannel& ch, const Codebook& codebook);

/// Pretty-good measurement E_m = S^{-1/2} rho_{x(m)} S^{-1/2} / M, S = sum_m rho_{x(m)} / M.
opalg::Povm pgm_decoder(const CqChannel& ch, const Codebook& codebook);
double pgm_success(const CqChannel& ch, const Codebook& codebook);

/// Success of the randomness-assisted code whose codewords are drawn i.i.d.
/// from p and decoded by the pretty-good measurement of each realization.
double pgm_success_assisted(const CqChannel& ch, const ProbDist& p, std::size_t message_count);
/// Largest |X|^M enumerated by pgm_success_assisted.
inline constexpr std::size_t kMaxCodebooks = 4096;

/// sup over alpha >= 1 of ((a-1)/a)(R - C*_a) with sandwiched capacities.
hypotest::ExponentCurve coding_exponent_curve(const CqChannel& ch, const std::vector<double>& rates,
                                              const std::vector<RenyiOrder>& alphas, const SolverConfig& cfg = {},
                                              int refine_iterations = 20);

/// Shared-randomness code: realization k (probability weight) uses its own
/// codebook and decoder.
struct AssistedCode {
  struct Realization {
    double weight;
    Codebook codebook;
    opalg::Povm decoder;
  };
  std::vector<Realization> realizations;

  std::size_t message_count() const { return realizations.front().codebook.message_count(); }
  /// Average codeword distribution (1/M) sum_m P(x(m) = x).
  ProbDist input_distribution(std::size_t alphabet_size) const;
};

struct DirectSumRecord {
  double success = 0.0;           // (1/M) sum_m E Tr[rho_{x(m)} T_m]
  double omega_success = 0.0;     // Tr[omega_MXB T_MXB]
  double omega_type2 = 0.0;       // Tr[(omega_MX (x) sigma_B) T_MXB]
  double inverse_messages = 0.0;  // 1/M
  double divergence_omega = 0.0;  // D*_alpha(omega_MXB || omega_MX (x) sigma_B)
  double divergence_rho = 0.0;    // D*_alpha(rho_XB || rho_X (x) sigma_B)
  bool passes = false;
};

/// Builds omega_MXB and T_MXB for the code and checks
/// Tr[omega T] = success, Tr[(omega_MX (x) sigma) T] = 1/M (within 1e-10) and
/// the direct-sum identity of the sandwiched divergence (within 1e-8).
DirectSumRecord direct_sum_reduction_check(const CqChannel& ch, const AssistedCode& code,
                                           const DensityOperator& sigma_b, RenyiOrder a);
DirectSumRecord direct_sum_reduction_check(const CqChannel& ch, const Codebook& codebook,
                                           const opalg::Povm& decoder, const DensityOperator& sigma_b,
                                           RenyiOrder a);

}  // namespace renyi::cq
