#include "renyi/opalg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

namespace renyi {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace renyi

namespace renyi::opalg {

namespace {

double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix");
  }
}

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

Matrix reconstruct(const Spectrum& s, const RealVector& f) {
  return s.vectors * f.asDiagonal() * s.vectors.adjoint();
}

}  // namespace

double Spectrum::cutoff() const {
  if (values.size() == 0) return 0.0;
  double top = values.cwiseAbs().maxCoeff();
  return kSpectralCutoff * top;
}

Index Spectrum::rank() const {
  double c = cutoff();
  return static_cast<Index>((values.array() > c).count());
}

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(Matrix m) {
  require_square(m, "HermitianOperator");
  double scale = max_abs_entry(m);
  double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTol * std::max(scale, 1e-300)) {
    throw DomainError("HermitianOperator: matrix is not Hermitian (asymmetry " +
                      format_double(asym) + ")");
  }
  m_ = symmetrized(m);
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(Index dim) {
  return HermitianOperator(Matrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> entries) {
  Matrix m = Matrix::Zero(static_cast<Index>(entries.size()), static_cast<Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = entries[i];
  return HermitianOperator(std::move(m));
}

HermitianOperator HermitianOperator::projector(const Vector& v) {
  double n2 = v.squaredNorm();
  if (n2 <= 0.0) throw DomainError("projector: zero vector");
  return from_hermitian_part(v * v.adjoint() / n2);
}

HermitianOperator HermitianOperator::from_hermitian_part(const Matrix& m) {
  require_square(m, "HermitianOperator");
  HermitianOperator h;
  h.m_ = symmetrized(m);
  return h;
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  require_same_dim(dim(), o.dim(), "operator+");
  return from_hermitian_part(m_ + o.m_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  require_same_dim(dim(), o.dim(), "operator-");
  return from_hermitian_part(m_ - o.m_);
}

HermitianOperator HermitianOperator::operator*(double s) const {
  return from_hermitian_part(m_ * s);
}

// ---------------------------------------------------------------------------
// Spectral calculus

Spectrum spectrum(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  if (es.info() != Eigen::Success) throw DomainError("spectrum: eigensolver failed");
  return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

HermitianOperator apply_spectral(const Spectrum& s, const std::function<double(double)>& f) {
  RealVector fv(s.dim());
  for (Index i = 0; i < s.dim(); ++i) fv(i) = f(s.values(i));
  return HermitianOperator::from_hermitian_part(reconstruct(s, fv));
}

bool is_psd(const Spectrum& s) {
  if (s.dim() == 0) return true;
  double scale = std::max(1.0, s.values.cwiseAbs().maxCoeff());
  return s.values.minCoeff() >= -kPsdTol * scale;
}

void require_psd(const Spectrum& s, const char* what) {
  if (!is_psd(s)) {
    throw DomainError(std::string(what) + ": operator is not positive semi-definite (eigenvalue " +
                      format_double(s.values.minCoeff()) + ")");
  }
}

HermitianOperator frac_power(const Spectrum& s, double t) {
  require_psd(s, "frac_power");
  double c = s.cutoff();
  return apply_spectral(s, [c, t](double x) { return x > c ? std::pow(x, t) : 0.0; });
}

HermitianOperator frac_power(const HermitianOperator& a, double t) {
  return frac_power(spectrum(a), t);
}

HermitianOperator log_on_support(const Spectrum& s) {
  require_psd(s, "log_on_support");
  double c = s.cutoff();
  return apply_spectral(s, [c](double x) { return x > c ? std::log(x) : 0.0; });
}

HermitianOperator exp_hermitian(const HermitianOperator& h) {
  Spectrum s = spectrum(h);
  return apply_spectral(s, [](double x) { return std::exp(x); });
}

HermitianOperator support_projector(const Spectrum& s) {
  require_psd(s, "support_projector");
  double c = s.cutoff();
  return apply_spectral(s, [c](double x) { return x > c ? 1.0 : 0.0; });
}

HermitianOperator support_projector(const HermitianOperator& a) {
  return support_projector(spectrum(a));
}

bool support_contained(const HermitianOperator& a, const Spectrum& b) {
  require_same_dim(a.dim(), b.dim(), "support_contained");
  HermitianOperator perp = HermitianOperator::identity(b.dim()) - support_projector(b);
  Matrix leak = perp.matrix() * a.matrix() * perp.matrix();
  return operator_norm(HermitianOperator::from_hermitian_part(leak)) <= kSupportTol;
}

Quotient nc_quotient(const HermitianOperator& x, const HermitianOperator& y) {
  require_same_dim(x.dim(), y.dim(), "nc_quotient");
  Spectrum sy = spectrum(y);
  HermitianOperator inv_sqrt = frac_power(sy, -0.5);
  HermitianOperator perp = HermitianOperator::identity(y.dim()) - support_projector(sy);
  Matrix leak = perp.matrix() * x.matrix() * perp.matrix();
  Quotient q;
  q.value = HermitianOperator::from_hermitian_part(inv_sqrt.matrix() * x.matrix() * inv_sqrt.matrix());
  q.support_violation = operator_norm(HermitianOperator::from_hermitian_part(leak)) > kSupportTol;
  return q;
}

ExtReal weighted_norm(const HermitianOperator& x, const HermitianOperator& sigma, double p) {
  require_same_dim(x.dim(), sigma.dim(), "weighted_norm");
  if (p == 0.0 || std::isnan(p)) throw DomainError("weighted_norm: p must be a nonzero real");
  if (std::isinf(p)) {
    if (p < 0) throw DomainError("weighted_norm: p = -inf is not supported");
    return operator_norm(x);
  }
  Spectrum ss = spectrum(sigma);
  HermitianOperator w = frac_power(ss, 1.0 / (2.0 * p));
  Matrix z = w.matrix() * x.matrix() * w.matrix();
  Spectrum sz = spectrum(HermitianOperator::from_hermitian_part(z));
  RealVector mags = sz.values.cwiseAbs();
  std::sort(mags.data(), mags.data() + mags.size(), std::greater<>());
  double top = mags.size() ? mags(0) : 0.0;
  double c = kSpectralCutoff * top;

  if (p > 0) {
    if (top == 0.0) return 0.0;
    // Sum of |z|^p scaled by the top magnitude to avoid overflow.
    double acc = 0.0;
    for (Index i = 0; i < mags.size(); ++i) {
      if (mags(i) > c) acc += std::pow(mags(i) / top, p);
    }
    return top * std::pow(acc, 1.0 / p);
  }

  // p < 0: z lives on supp(sigma); its compression there must be invertible.
  Index r = ss.rank();
  if (r == 0 || top == 0.0) return 0.0;
  double acc = 0.0;
  for (Index i = 0; i < r; ++i) {
    if (mags(i) <= c) return 0.0;  // Tr |z|^p diverges, (inf)^{1/p} -> 0
    acc += std::pow(mags(i) / top, p);
  }
  return top * std::pow(acc, 1.0 / p);
}

double kms_inner(const HermitianOperator& x, const HermitianOperator& y,
                 const HermitianOperator& sigma) {
  require_same_dim(x.dim(), y.dim(), "kms_inner");
  require_same_dim(x.dim(), sigma.dim(), "kms_inner");
  HermitianOperator root = frac_power(sigma, 0.5);
  Complex v = (x.matrix().adjoint() * root.matrix() * y.matrix() * root.matrix()).trace();
  double scale = std::max(1.0, std::abs(v.real()));
  if (std::abs(v.imag()) > 1e-10 * scale) {
    throw DomainError("kms_inner: imaginary residue " + format_double(v.imag()));
  }
  return v.real();
}

// ---------------------------------------------------------------------------
// Norms and traces

double operator_norm(const HermitianOperator& a) {
  if (a.dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double trace_norm(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "trace_product");
  // Tr[ab] = sum_ij a_ij b_ji = sum_ij a_ij conj(b_ij) for Hermitian b.
  return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

double commutator_norm(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "commutator_norm");
  Matrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  // i[a, b] is Hermitian.
  return operator_norm(HermitianOperator::from_hermitian_part(Complex(0, 1) * c));
}

// ---------------------------------------------------------------------------
// Typed operators

DensityOperator DensityOperator::build(const HermitianOperator& op, bool normalize) {
  Spectrum s = opalg::spectrum(op);
  require_psd(s, "DensityOperator");
  double tr = s.values.sum();
  if (normalize) {
    if (!(tr > 0.0)) throw DomainError("DensityOperator: operator has non-positive trace");
  } else if (std::abs(tr - 1.0) > kTraceTol) {
    throw DomainError("DensityOperator: trace " + format_double(tr) + " differs from 1");
  }
  RealVector v = s.values.cwiseMax(0.0);
  v /= v.sum();
  s.values = v;
  HermitianOperator clean = HermitianOperator::from_hermitian_part(reconstruct(s, v));
  return DensityOperator(std::move(clean), std::move(s));
}

DensityOperator::DensityOperator(const HermitianOperator& op) : DensityOperator(build(op, false)) {}

DensityOperator DensityOperator::normalized(const HermitianOperator& op) { return build(op, true); }

DensityOperator DensityOperator::maximally_mixed(Index dim) {
  return DensityOperator(HermitianOperator::identity(dim) * (1.0 / static_cast<double>(dim)));
}

DensityOperator DensityOperator::pure(const Vector& psi) {
  return DensityOperator(HermitianOperator::projector(psi));
}

DensityOperator DensityOperator::diagonal(std::span<const double> probabilities) {
  return DensityOperator(HermitianOperator::diagonal(probabilities));
}

Effect::Effect(const HermitianOperator& op) {
  Spectrum s = opalg::spectrum(op);
  double lo = s.values.minCoeff();
  double hi = s.values.maxCoeff();
  if (lo < -kPsdTol || hi > 1.0 + kPsdTol) {
    throw DomainError("Effect: eigenvalues must lie in [0, 1] (found [" + format_double(lo) + ", " +
                      format_double(hi) + "])");
  }
  s.values = s.values.cwiseMax(0.0).cwiseMin(1.0);
  op_ = HermitianOperator::from_hermitian_part(reconstruct(s, s.values));
  spectrum_ = std::move(s);
}

Effect Effect::identity(Index dim) { return Effect(HermitianOperator::identity(dim)); }

Pvm::Pvm(std::vector<HermitianOperator> projectors) : projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw DomainError("Pvm: no elements");
  Index d = projectors_.front().dim();
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    const Matrix& p = projectors_[i].matrix();
    require_same_dim(p.rows(), d, "Pvm");
    if ((p * p - p).cwiseAbs().maxCoeff() > kProjectorTol) {
      throw DomainError("Pvm: element " + std::to_string(i) + " is not idempotent");
    }
    for (std::size_t j = i + 1; j < projectors_.size(); ++j) {
      Matrix prod = p * projectors_[j].matrix();
      if (prod.norm() > kProjectorTol) throw DomainError("Pvm: elements are not orthogonal");
    }
    sum += p;
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kProjectorTol) {
    throw DomainError("Pvm: elements do not sum to the identity");
  }
}

Pvm Pvm::from_basis(const Matrix& unitary) {
  std::vector<HermitianOperator> ps;
  ps.reserve(static_cast<std::size_t>(unitary.cols()));
  for (Index i = 0; i < unitary.cols(); ++i) {
    ps.push_back(HermitianOperator::projector(unitary.col(i)));
  }
  return Pvm(std::move(ps));
}

Povm::Povm(std::vector<HermitianOperator> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw DomainError("Povm: no elements");
  Index d = effects_.front().dim();
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < effects_.size(); ++i) {
    require_same_dim(effects_[i].dim(), d, "Povm");
    Eigen::SelfAdjointEigenSolver<Matrix> es(effects_[i].matrix(), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kHermitianTol) {
      throw DomainError("Povm: element " + std::to_string(i) + " is not positive semi-definite");
    }
    sum += effects_[i].matrix();
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kTraceTol) {
    throw DomainError("Povm: elements do not sum to the identity");
  }
}

// ---------------------------------------------------------------------------
// Tensor structure

Matrix kron_matrix(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return k;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator::from_hermitian_part(kron_matrix(a.matrix(), b.matrix()));
}

DensityOperator kron(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::normalized(kron(a.op(), b.op()));
}

DensityOperator tensor_power(const DensityOperator& a, int n) {
  if (n < 1) throw DomainError("tensor_power: n must be >= 1");
  HermitianOperator acc = a.op();
  for (int i = 1; i < n; ++i) acc = kron(acc, a.op());
  return DensityOperator::normalized(acc);
}

HermitianOperator partial_trace(const HermitianOperator& a, std::span<const Index> dims,
                                std::size_t keep) {
  if (dims.empty() || keep >= dims.size()) throw DimensionError("partial_trace: bad subsystem index");
  Index total = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
  require_same_dim(a.dim(), total, "partial_trace");
  Index dk = dims[keep];
  Index inner = 1;  // product of dims after keep
  for (std::size_t i = keep + 1; i < dims.size(); ++i) inner *= dims[i];
  Index outer = total / (dk * inner);

  Matrix out = Matrix::Zero(dk, dk);
  for (Index o = 0; o < outer; ++o) {
    for (Index in = 0; in < inner; ++in) {
      for (Index r = 0; r < dk; ++r) {
        for (Index c = 0; c < dk; ++c) {
          Index row = (o * dk + r) * inner + in;
          Index col = (o * dk + c) * inner + in;
          out(r, c) += a(row, col);
        }
      }
    }
  }
  return HermitianOperator::from_hermitian_part(out);
}

HermitianOperator direct_sum(std::span<const HermitianOperator> blocks) {
  Index total = 0;
  for (const auto& b : blocks) total += b.dim();
  Matrix m = Matrix::Zero(total, total);
  Index off = 0;
  for (const auto& b : blocks) {
    m.block(off, off, b.dim(), b.dim()) = b.matrix();
    off += b.dim();
  }
  return HermitianOperator::from_hermitian_part(m);
}

}  // namespace renyi::opalg
