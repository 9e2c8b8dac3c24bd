#pragma once

// Measured Renyi divergence: supremum of the classical Renyi divergence of
// measurement statistics. The search runs over rank-one PVMs (orthonormal
// bases), moving the basis U along U exp(iH) by gradient ascent with
// central-difference gradients and random restarts. The result is a
// certified lower bound, bracketed above by the sandwiched divergence.

#include <cstdint>
#include <vector>

#include "renyi/divergences.hpp"

namespace renyi::div {

struct OptimizerConfig {
  /// Random Haar restarts, in addition to the structured starting bases.
  int restarts = 16;
  double fd_step = 1e-5;
  /// Stop once the objective gained less than this over `patience` iterations.
  double improvement_tol = 1e-9;
  int patience = 50;
  int max_iterations = 3000;
  std::uint64_t seed = 0x5eed2023ULL;
  /// Extra starting bases (unitaries), tried before anything else.
  std::vector<opalg::Matrix> initial_bases;
  /// Skip the structured starts (eigenbases of rho, sigma, ...).
  bool structured_starts = true;
};

struct MeasuredResult {
  DivergenceResult result;
  /// Sandwiched divergence, an upper bound on the measured divergence.
  ExtReal upper_bound;
  /// Columns form the optimal measurement basis.
  opalg::Matrix basis;
  bool converged = true;
  int evaluations = 0;
};

MeasuredResult measured_renyi(const DensityOperator& rho, const DensityOperator& sigma, RenyiOrder a,
                              const OptimizerConfig& cfg = {});

/// Classical Renyi divergence of the outcome statistics of a rank-one basis measurement.
ExtReal basis_divergence(const DensityOperator& rho, const DensityOperator& sigma, RenyiOrder a,
                         const opalg::Matrix& basis);

}  // namespace renyi::div
