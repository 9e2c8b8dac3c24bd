#include "renyi/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "numerics.hpp"

namespace renyi::div {

using opalg::DomainError;
using opalg::Index;
using opalg::Matrix;
using opalg::RealVector;
using opalg::Spectrum;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kProbZero = 1e-14;

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) throw opalg::DimensionError(std::string(what) + ": dimension mismatch");
}

/// Eigenvalues clamped at zero, with entries below the relative cutoff zeroed.
RealVector clean_eigenvalues(const Spectrum& s) {
  RealVector v = s.values.cwiseMax(0.0);
  double c = s.cutoff();
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) <= c) v(i) = 0.0;
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// ProbDist

ProbDist::ProbDist(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw DomainError("ProbDist: empty distribution");
  double s = 0.0;
  for (double& v : w_) {
    if (std::isnan(v) || v < -1e-10) throw DomainError("ProbDist: negative or NaN weight");
    if (v < kProbZero) v = 0.0;
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-10) {
    throw DomainError("ProbDist: weights sum to " + format_double(s) + ", not 1");
  }
}

ProbDist ProbDist::uniform(std::size_t n) {
  return ProbDist(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::string to_string(DivergenceKind k) {
  switch (k) {
    case DivergenceKind::Classical: return "classical";
    case DivergenceKind::Petz: return "petz";
    case DivergenceKind::Sandwiched: return "sandwiched";
    case DivergenceKind::Measured: return "measured";
  }
  return "unknown";
}

std::string to_string(DivergenceStatus s) {
  return s == DivergenceStatus::Exact ? "exact" : "lower_bound";
}

DivergenceKind parse_kind(const std::string& text) {
  if (text == "classical") return DivergenceKind::Classical;
  if (text == "petz") return DivergenceKind::Petz;
  if (text == "sandwiched") return DivergenceKind::Sandwiched;
  if (text == "measured") return DivergenceKind::Measured;
  throw std::invalid_argument("unknown divergence kind '" + text + "'");
}

// ---------------------------------------------------------------------------
// Classical

ExtReal classical_renyi(std::span<const double> p, std::span<const double> q, RenyiOrder a) {
  if (p.size() != q.size()) throw opalg::DimensionError("classical_renyi: length mismatch");
  const std::size_t n = p.size();

  bool contained = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 0.0 && q[i] <= 0.0) contained = false;
  }

  if (a.is_one()) {
    if (!contained) return ExtReal::pos_inf();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] > 0.0) acc += p[i] * (std::log(p[i]) - std::log(q[i]));
    }
    return acc;
  }
  if (a.is_infinity()) {
    if (!contained) return ExtReal::pos_inf();
    double best = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] > 0.0) best = std::max(best, std::log(p[i]) - std::log(q[i]));
    }
    return best;
  }

  const double alpha = a.value();
  if (alpha > 1.0 && !contained) return ExtReal::pos_inf();
  std::vector<double> terms;
  terms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 0.0 && q[i] > 0.0) {
      terms.push_back(alpha * std::log(p[i]) + (1.0 - alpha) * std::log(q[i]));
    }
  }
  double log_q = detail::log_sum_exp(terms);
  if (std::isinf(log_q)) return ExtReal::pos_inf();  // disjoint supports, alpha < 1
  return log_q / (alpha - 1.0);
}

ExtReal classical_renyi(const ProbDist& p, const ProbDist& q, RenyiOrder a) {
  return classical_renyi(p.weights(), q.weights(), a);
}

// ---------------------------------------------------------------------------
// Quantum

ExtReal relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "relative_entropy");
  const Spectrum& ss = sigma.spectrum();
  if (!opalg::support_contained(rho.op(), ss)) return ExtReal::pos_inf();

  RealVector lr = clean_eigenvalues(rho.spectrum());
  double neg_entropy = 0.0;
  for (Index i = 0; i < lr.size(); ++i) {
    if (lr(i) > 0.0) neg_entropy += lr(i) * std::log(lr(i));
  }
  RealVector ls = clean_eigenvalues(ss);
  double cross = 0.0;
  for (Index j = 0; j < ls.size(); ++j) {
    if (ls(j) <= 0.0) continue;
    double w = (ss.vectors.col(j).adjoint() * rho.matrix() * ss.vectors.col(j))(0, 0).real();
    cross += w * std::log(ls(j));
  }
  return neg_entropy - cross;
}

double sandwiched_log_q(const HermitianOperator& rho, const Spectrum& sigma, double alpha) {
  HermitianOperator s = opalg::frac_power(sigma, (1.0 - alpha) / (2.0 * alpha));
  Matrix z = s.matrix() * rho.matrix() * s.matrix();
  Spectrum sz = opalg::spectrum(HermitianOperator::from_hermitian_part(z));
  RealVector v = clean_eigenvalues(sz);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) > 0.0) terms.push_back(alpha * std::log(v(i)));
  }
  return detail::log_sum_exp(terms);
}

ExtReal sandwiched_renyi(const DensityOperator& rho, const DensityOperator& sigma, RenyiOrder a) {
  require_same_dim(rho.dim(), sigma.dim(), "sandwiched_renyi");
  if (a.is_one()) return relative_entropy(rho, sigma);
  const Spectrum& ss = sigma.spectrum();
  const bool contained = opalg::support_contained(rho.op(), ss);
  if (a.above_one() && !contained) return ExtReal::pos_inf();

  if (a.is_infinity()) {
    HermitianOperator inv = opalg::frac_power(ss, -0.5);
    Matrix z = inv.matrix() * rho.matrix() * inv.matrix();
    return std::log(opalg::operator_norm(HermitianOperator::from_hermitian_part(z)));
  }
  const double alpha = a.value();
  double log_q = sandwiched_log_q(rho.op(), ss, alpha);
  if (std::isinf(log_q)) return ExtReal::pos_inf();
  return log_q / (alpha - 1.0);
}

ExtReal petz_renyi(const DensityOperator& rho, const DensityOperator& sigma, RenyiOrder a) {
  require_same_dim(rho.dim(), sigma.dim(), "petz_renyi");
  if (a.is_one()) return relative_entropy(rho, sigma);
  if (a.is_infinity()) throw DomainError("petz_renyi: alpha = inf is not supported");
  const Spectrum& sr = rho.spectrum();
  const Spectrum& ss = sigma.spectrum();
  const double alpha = a.value();
  if (alpha > 1.0 && !opalg::support_contained(rho.op(), ss)) return ExtReal::pos_inf();

  RealVector lr = clean_eigenvalues(sr);
  RealVector ls = clean_eigenvalues(ss);
  Matrix overlap = sr.vectors.adjoint() * ss.vectors;
  std::vector<double> terms;
  for (Index i = 0; i < lr.size(); ++i) {
    if (lr(i) <= 0.0) continue;
    for (Index j = 0; j < ls.size(); ++j) {
      if (ls(j) <= 0.0) continue;
      double w = std::norm(overlap(i, j));
      if (w <= 0.0) continue;
      terms.push_back(alpha * std::log(lr(i)) + (1.0 - alpha) * std::log(ls(j)) + std::log(w));
    }
  }
  double log_q = detail::log_sum_exp(terms);
  if (std::isinf(log_q)) return ExtReal::pos_inf();
  return log_q / (alpha - 1.0);
}

// ---------------------------------------------------------------------------
// Variational objectives

namespace {

void check_objective_order(RenyiOrder a, const Effect& t, const char* what) {
  if (a.is_one()) throw DomainError(std::string(what) + ": alpha = 1 has its own objective");
  if (a.below_one() && t.spectrum().values.minCoeff() <= 0.0) {
    throw DomainError(std::string(what) + ": alpha < 1 requires a positive definite test");
  }
}

/// log sum_i w_i x_i^e over x_i > cutoff (pseudo-inverse convention for e < 0).
double log_weighted_power_sum(const RealVector& x, const RealVector& w, double e, double cutoff) {
  std::vector<double> terms;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) > cutoff && w(i) > 0.0) terms.push_back(std::log(w(i)) + e * std::log(x(i)));
  }
  return detail::log_sum_exp(terms);
}

ExtReal combine_objective(double conj, double tr_rho_t, double log_second) {
  if (tr_rho_t <= 0.0) return ExtReal::neg_inf();
  if (std::isinf(log_second) && log_second < 0) return ExtReal::pos_inf();
  if (std::isinf(log_second)) return ExtReal::neg_inf();
  return conj * std::log(tr_rho_t) - log_second;
}

}  // namespace

ExtReal variational_objective_measured(const DensityOperator& rho, const DensityOperator& sigma,
                                       RenyiOrder a, const Effect& t) {
  require_same_dim(rho.dim(), sigma.dim(), "variational_objective_measured");
  require_same_dim(rho.dim(), t.dim(), "variational_objective_measured");
  check_objective_order(a, t, "variational_objective_measured");
  const double conj = a.conjugate();
  const Spectrum& st = t.spectrum();
  double tr_rho_t = opalg::trace_product(rho.op(), t.op());

  // Tr[sigma T^conj] = sum_i <t_i|sigma|t_i> t_i^conj.
  RealVector w(st.dim());
  for (Index i = 0; i < st.dim(); ++i) {
    w(i) = (st.vectors.col(i).adjoint() * sigma.matrix() * st.vectors.col(i))(0, 0).real();
  }
  double log_second = log_weighted_power_sum(st.values, w, conj, st.cutoff());
  return combine_objective(conj, tr_rho_t, log_second);
}

ExtReal variational_objective_sandwiched(const DensityOperator& rho, const DensityOperator& sigma,
                                         RenyiOrder a, const Effect& t) {
  require_same_dim(rho.dim(), sigma.dim(), "variational_objective_sandwiched");
  require_same_dim(rho.dim(), t.dim(), "variational_objective_sandwiched");
  check_objective_order(a, t, "variational_objective_sandwiched");
  const double conj = a.conjugate();
  double tr_rho_t = opalg::trace_product(rho.op(), t.op());

  HermitianOperator t_half = opalg::frac_power(t.spectrum(), 0.5);
  HermitianOperator s_pow = opalg::frac_power(sigma.spectrum(), 1.0 / conj);
  Matrix m = t_half.matrix() * s_pow.matrix() * t_half.matrix();
  Spectrum sm = opalg::spectrum(HermitianOperator::from_hermitian_part(m));
  RealVector ones = RealVector::Ones(sm.dim());
  double log_second = log_weighted_power_sum(sm.values, ones, conj, sm.cutoff());
  return combine_objective(conj, tr_rho_t, log_second);
}

Effect optimal_sandwiched_test(const DensityOperator& rho, const DensityOperator& sigma, RenyiOrder a) {
  require_same_dim(rho.dim(), sigma.dim(), "optimal_sandwiched_test");
  if (!a.is_finite() || a.value() <= 1.0) {
    throw DomainError("optimal_sandwiched_test: requires finite alpha > 1");
  }
  if (!opalg::support_contained(rho.op(), sigma.spectrum())) {
    throw DomainError("optimal_sandwiched_test: supp(rho) is not contained in supp(sigma)");
  }
  const double alpha = a.value();
  HermitianOperator s = opalg::frac_power(sigma.spectrum(), -(alpha - 1.0) / (2.0 * alpha));
  Matrix z = s.matrix() * rho.matrix() * s.matrix();
  Spectrum sz = opalg::spectrum(HermitianOperator::from_hermitian_part(z));
  // Normalizing z first keeps the power in range; the objective is homogeneous.
  double top = sz.values.cwiseAbs().maxCoeff();
  double c = sz.cutoff();
  HermitianOperator zp = opalg::apply_spectral(sz, [&](double x) {
    double m = std::abs(x);
    return m > c ? std::pow(m / top, alpha - 1.0) : 0.0;
  });
  Matrix tm = s.matrix() * zp.matrix() * s.matrix();
  HermitianOperator th = HermitianOperator::from_hermitian_part(tm);
  double norm = opalg::operator_norm(th);
  if (!(norm > 0.0)) throw DomainError("optimal_sandwiched_test: degenerate test");
  HermitianOperator scaled = th * (1.0 / norm);
  // Remove rounding so that the spectrum lies inside [0, 1].
  Spectrum st = opalg::spectrum(scaled);
  return Effect(opalg::apply_spectral(st, [](double x) { return std::clamp(x, 0.0, 1.0); }));
}

double measured_alpha1_objective(const DensityOperator& rho, const DensityOperator& sigma,
                                 const Effect& t) {
  require_same_dim(rho.dim(), sigma.dim(), "measured_alpha1_objective");
  require_same_dim(rho.dim(), t.dim(), "measured_alpha1_objective");
  const Spectrum& st = t.spectrum();
  if (st.values.minCoeff() <= 0.0) {
    throw DomainError("measured_alpha1_objective: test must be positive definite");
  }
  HermitianOperator log_t = opalg::apply_spectral(st, [](double x) { return std::log(x); });
  return opalg::trace_product(rho.op(), log_t) - std::log(opalg::trace_product(sigma.op(), t.op()));
}

ExtReal petz_variational_objective(const DensityOperator& rho, const DensityOperator& sigma,
                                   RenyiOrder a, const Effect& t) {
  require_same_dim(rho.dim(), sigma.dim(), "petz_variational_objective");
  require_same_dim(rho.dim(), t.dim(), "petz_variational_objective");
  if (!a.is_finite() || a.value() <= 1.0) {
    throw DomainError("petz_variational_objective: requires finite alpha > 1");
  }
  const double alpha = a.value();
  if (opalg::trace_product(rho.op(), t.op()) <= 0.0) {
    throw DomainError("petz_variational_objective: test is orthogonal to rho");
  }
  HermitianOperator t_pow = opalg::frac_power(t.spectrum(), alpha / 2.0);
  HermitianOperator rho_pow = opalg::frac_power(rho.spectrum(), alpha);
  HermitianOperator sigma_pow = opalg::frac_power(sigma.spectrum(), alpha - 1.0);

  auto log_trace_power = [&](const HermitianOperator& mid, double e) {
    Matrix m = t_pow.matrix() * mid.matrix() * t_pow.matrix();
    Spectrum sm = opalg::spectrum(HermitianOperator::from_hermitian_part(m));
    return log_weighted_power_sum(sm.values, RealVector::Ones(sm.dim()), e, sm.cutoff());
  };
  double first = log_trace_power(rho_pow, 1.0 / alpha);
  double second = log_trace_power(sigma_pow, 1.0 / (alpha - 1.0));
  if (std::isinf(first)) return ExtReal::neg_inf();
  if (std::isinf(second)) return ExtReal::pos_inf();
  return alpha / (alpha - 1.0) * first - second;
}

// ---------------------------------------------------------------------------

std::optional<Matrix> common_eigenbasis(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "common_eigenbasis");
  if (opalg::commutator_norm(a, b) > kCommuteTol * std::max(1.0, opalg::operator_norm(a) * opalg::operator_norm(b))) {
    return std::nullopt;
  }
  const double mixes[] = {0.5772156649015329, 1.618033988749895, 2.718281828459045, 0.3183098861837907};
  const double scale = std::max(1e-300, std::max(a.matrix().cwiseAbs().maxCoeff(), b.matrix().cwiseAbs().maxCoeff()));
  for (double c : mixes) {
    Spectrum s = opalg::spectrum(a + b * c);
    Matrix da = s.vectors.adjoint() * a.matrix() * s.vectors;
    Matrix db = s.vectors.adjoint() * b.matrix() * s.vectors;
    da.diagonal().setZero();
    db.diagonal().setZero();
    if (da.cwiseAbs().maxCoeff() <= 1e-10 * scale && db.cwiseAbs().maxCoeff() <= 1e-10 * scale) {
      return s.vectors;
    }
  }
  return std::nullopt;
}

}  // namespace renyi::div
