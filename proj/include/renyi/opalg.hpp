#pragma once

// Finite-dimensional Hermitian operator algebra: spectral function calculus,
// supports, weighted Schatten-type norms, the KMS inner product and tensor
// structure. All operators are dense; intended dimensions are <= 64.

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "renyi/ext_real.hpp"

namespace renyi::opalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative hermiticity tolerance (relative to the largest absolute entry).
inline constexpr double kHermitianTol = 1e-12;
/// Relative spectral cutoff: eigenvalues <= kSpectralCutoff * lambda_max are zero.
inline constexpr double kSpectralCutoff = 1e-12;
/// Eigenvalues below -kPsdTol (scaled by max(1, ||a||)) make an operator non-PSD.
inline constexpr double kPsdTol = 1e-8;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kProjectorTol = 1e-10;
inline constexpr double kSupportTol = 1e-10;

/// Input that violates a mathematical precondition (non-PSD, bad trace, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operands of incompatible dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problem size beyond the dense-evaluation budget of an operation.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigendecomposition a = vectors * diag(values) * vectors^dagger, ascending values.
struct Spectrum {
  RealVector values;
  Matrix vectors;

  Index dim() const { return values.size(); }
  /// Absolute threshold below which an eigenvalue counts as zero.
  double cutoff() const;
  Index rank() const;
};

class HermitianOperator {
 public:
  HermitianOperator() = default;
  /// Validates hermiticity within kHermitianTol and symmetrizes.
  explicit HermitianOperator(Matrix m);

  static HermitianOperator identity(Index dim);
  static HermitianOperator zero(Index dim);
  static HermitianOperator diagonal(std::span<const double> entries);
  static HermitianOperator projector(const Vector& v);  // |v><v| / <v|v>
  /// Wraps a matrix that is Hermitian by construction; only symmetrizes.
  static HermitianOperator from_hermitian_part(const Matrix& m);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(Index r, Index c) const { return m_(r, c); }

  double trace() const { return m_.diagonal().real().sum(); }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;
  friend HermitianOperator operator*(double s, const HermitianOperator& a) { return a * s; }

 private:
  Matrix m_;
};

/// Positive semi-definite, unit-trace operator. Eigenvalues in [-kPsdTol, 0) are
/// clamped to zero and the trace is renormalized; larger violations throw.
class DensityOperator {
 public:
  /// Requires trace 1 within kTraceTol.
  explicit DensityOperator(const HermitianOperator& op);
  /// Divides a PSD operator by its trace first.
  static DensityOperator normalized(const HermitianOperator& op);
  static DensityOperator maximally_mixed(Index dim);
  static DensityOperator pure(const Vector& psi);
  static DensityOperator diagonal(std::span<const double> probabilities);

  Index dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const Spectrum& spectrum() const { return spectrum_; }

  operator const HermitianOperator&() const { return op_; }  // NOLINT

 private:
  DensityOperator(HermitianOperator op, Spectrum s) : op_(std::move(op)), spectrum_(std::move(s)) {}
  static DensityOperator build(const HermitianOperator& op, bool normalize);

  HermitianOperator op_;
  Spectrum spectrum_;
};

/// Operator T with 0 <= T <= 1 (a test). Eigenvalues within kPsdTol outside
/// [0, 1] are clamped; larger violations throw.
class Effect {
 public:
  explicit Effect(const HermitianOperator& op);
  static Effect identity(Index dim);

  Index dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const Spectrum& spectrum() const { return spectrum_; }

  operator const HermitianOperator&() const { return op_; }  // NOLINT

 private:
  HermitianOperator op_;
  Spectrum spectrum_;
};

/// Projection-valued measure: idempotent, mutually orthogonal, summing to 1.
class Pvm {
 public:
  explicit Pvm(std::vector<HermitianOperator> projectors);
  /// Rank-one PVM from the columns of a unitary.
  static Pvm from_basis(const Matrix& unitary);

  Index dim() const { return projectors_.front().dim(); }
  std::size_t size() const { return projectors_.size(); }
  const std::vector<HermitianOperator>& projectors() const { return projectors_; }

 private:
  std::vector<HermitianOperator> projectors_;
};

/// Positive operator-valued measure: PSD elements summing to 1.
class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator> effects);

  Index dim() const { return effects_.front().dim(); }
  std::size_t size() const { return effects_.size(); }
  const std::vector<HermitianOperator>& effects() const { return effects_; }

 private:
  std::vector<HermitianOperator> effects_;
};

// ---------------------------------------------------------------------------
// Spectral calculus

Spectrum spectrum(const HermitianOperator& a);

/// U f(Lambda) U^dagger.
HermitianOperator apply_spectral(const Spectrum& s, const std::function<double(double)>& f);

/// Smallest eigenvalue is >= -kPsdTol * max(1, ||a||).
bool is_psd(const Spectrum& s);
void require_psd(const Spectrum& s, const char* what);

/// a^t on the support of a (pseudo-inverse convention for t < 0; zero
/// eigenvalues map to zero for every t). Throws DomainError for non-PSD a.
HermitianOperator frac_power(const HermitianOperator& a, double t);
HermitianOperator frac_power(const Spectrum& s, double t);

/// log a on the support of a (zero elsewhere).
HermitianOperator log_on_support(const Spectrum& s);

/// exp of a Hermitian operator.
HermitianOperator exp_hermitian(const HermitianOperator& h);

/// Projector onto eigenspaces with eigenvalue above the spectral cutoff.
HermitianOperator support_projector(const HermitianOperator& a);
HermitianOperator support_projector(const Spectrum& s);

/// True when supp(a) is contained in supp(b), with a PSD.
bool support_contained(const HermitianOperator& a, const Spectrum& b);

struct Quotient {
  HermitianOperator value;
  /// ||(1 - supp y) x (1 - supp y)|| > kSupportTol.
  bool support_violation = false;
};

/// Noncommutative quotient y^{-1/2} x y^{-1/2} (pseudo-inverse square root).
Quotient nc_quotient(const HermitianOperator& x, const HermitianOperator& y);

/// Weighted p-norm (Tr |s^{1/2p} x s^{1/2p}|^p)^{1/p} for p != 0; p = +inf gives
/// the operator norm of x. For p < 0 the negative powers use the pseudo-inverse;
/// if the trace diverges on supp(sigma) the value is its limit, 0.
ExtReal weighted_norm(const HermitianOperator& x, const HermitianOperator& sigma, double p);

/// KMS inner product Tr[x^dagger s^{1/2} y s^{1/2}].
double kms_inner(const HermitianOperator& x, const HermitianOperator& y,
                 const HermitianOperator& sigma);

// ---------------------------------------------------------------------------
// Norms and traces

double operator_norm(const HermitianOperator& a);
double trace_norm(const HermitianOperator& a);
/// Re Tr[a b].
double trace_product(const HermitianOperator& a, const HermitianOperator& b);
/// ||a b - b a||_op.
double commutator_norm(const HermitianOperator& a, const HermitianOperator& b);

// ---------------------------------------------------------------------------
// Tensor structure

Matrix kron_matrix(const Matrix& a, const Matrix& b);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);
DensityOperator kron(const DensityOperator& a, const DensityOperator& b);
/// n-fold tensor power.
DensityOperator tensor_power(const DensityOperator& a, int n);

/// Partial trace over every subsystem except `keep`.
HermitianOperator partial_trace(const HermitianOperator& a, std::span<const Index> dims,
                                std::size_t keep);

/// Direct sum (block-diagonal embedding).
HermitianOperator direct_sum(std::span<const HermitianOperator> blocks);

}  // namespace renyi::opalg
