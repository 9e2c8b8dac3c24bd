#pragma once

// Hoelder's inequality for the sigma-weighted norms and the KMS inner product:
//   <X, Y>_sigma <= ||X||_{alpha,sigma} ||Y||_{alpha',sigma}   (alpha >= 1)
// and the reverse inequality for alpha in (0, 1) when supp(sigma) <= supp(Y).

#include "renyi/divergences.hpp"

namespace renyi::div {

struct HolderRecord {
  double lhs = 0.0;  // <x, y>_sigma
  double rhs = 0.0;  // ||x||_{alpha,sigma} * ||y||_{alpha',sigma}
  bool holds = false;
  /// rhs - lhs for the forward inequality, lhs - rhs for the reverse one.
  double gap = 0.0;
  bool reverse = false;
};

/// Relative slack allowed when deciding `holds`.
inline constexpr double kHolderTol = 1e-12;

HolderRecord holder_check(const HermitianOperator& x, const HermitianOperator& y,
                          const HermitianOperator& sigma, RenyiOrder a);

/// y = sigma^{-1/2a'} |sigma^{1/2a} x sigma^{1/2a}|^{alpha-1} sigma^{-1/2a'}, which
/// turns the forward inequality into an equality. Needs full-rank sigma and
/// finite alpha > 1.
HermitianOperator holder_equality_witness(const HermitianOperator& x, const HermitianOperator& sigma,
                                          RenyiOrder a);

}  // namespace renyi::div
