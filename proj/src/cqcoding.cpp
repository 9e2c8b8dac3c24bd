#include "renyi/cqcoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "numerics.hpp"
#include "renyi/random.hpp"

namespace renyi::cq {

using opalg::Complex;
using opalg::DomainError;
using opalg::HermitianOperator;
using opalg::Matrix;
using opalg::RealVector;
using opalg::Spectrum;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;

/// Orthonormal basis of the real space of d x d Hermitian matrices.
std::vector<Matrix> hermitian_basis(Index d) {
  std::vector<Matrix> out;
  const double r = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < d; ++i) {
    Matrix e = Matrix::Zero(d, d);
    e(i, i) = 1.0;
    out.push_back(e);
    for (Index j = i + 1; j < d; ++j) {
      Matrix x = Matrix::Zero(d, d);
      x(i, j) = r;
      x(j, i) = r;
      out.push_back(x);
      Matrix y = Matrix::Zero(d, d);
      y(i, j) = Complex(0, -r);
      y(j, i) = Complex(0, r);
      out.push_back(y);
    }
  }
  return out;
}

/// Spectrum of exp(l) / Tr exp(l).
Spectrum gibbs_spectrum(const Matrix& l) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(l);
  Spectrum s;
  s.vectors = es.eigenvectors();
  const auto& lam = es.eigenvalues();
  const double top = lam.maxCoeff();
  s.values = (lam.array() - top).exp().matrix();
  s.values /= s.values.sum();
  return s;
}

Matrix reconstruct(const Spectrum& s) { return s.vectors * s.values.cast<Complex>().asDiagonal() * s.vectors.adjoint(); }

DensityOperator density_from(const Spectrum& s) {
  return DensityOperator::normalized(HermitianOperator::from_hermitian_part(reconstruct(s)));
}

/// D_alpha(rho_XB || rho_X (x) sigma) as a function of sigma, on the support
/// of the averaged output. Letters with p(x) = 0 are dropped.
class InnerObjective {
 public:
  enum class Mode { Fixed, Search };

  InnerObjective(const CqChannel& ch, const ProbDist& p, RenyiOrder a, DivergenceKind kind,
                 const div::OptimizerConfig& mcfg)
      : a_(a), kind_(kind), mcfg_(mcfg) {
    HermitianOperator avg = HermitianOperator::zero(ch.output_dim());
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
      if (p[x] > 0.0) avg = avg + ch.output(x).op() * p[x];
    }
    Spectrum sa = opalg::spectrum(avg);
    const double c = sa.cutoff();
    Index rank = 0;
    for (Index i = 0; i < sa.dim(); ++i) rank += sa.values(i) > c ? 1 : 0;
    iso_ = sa.vectors.rightCols(rank);
    for (std::size_t x = 0; x < ch.input_size(); ++x) {
      if (!(p[x] > 0.0)) continue;
      Matrix r = iso_.adjoint() * ch.output(x).matrix() * iso_;
      blocks_.push_back(DensityOperator::normalized(HermitianOperator::from_hermitian_part(r)));
      logp_.push_back(std::log(p[x]));
      letters_.push_back(x);
    }
    Matrix avg_r = iso_.adjoint() * avg.matrix() * iso_;
    average_ = DensityOperator::normalized(HermitianOperator::from_hermitian_part(avg_r)).spectrum();
    block_div_.assign(blocks_.size(), 0.0);
    bases_.assign(blocks_.size(), Matrix());
  }

  Index dim() const { return iso_.cols(); }
  const Matrix& isometry() const { return iso_; }
  const Spectrum& average() const { return average_; }
  const std::vector<double>& block_divergences() const { return block_div_; }
  const std::vector<std::size_t>& letters() const { return letters_; }
  const std::vector<double>& log_weights() const { return logp_; }

  /// In Search mode the measured blocks are re-optimized (warm-started) and the
  /// bases are kept; in Fixed mode the current bases are reused unchanged.
  double eval(const Spectrum& sigma, Mode mode) {
    std::vector<double> d(blocks_.size());
    if (kind_ == DivergenceKind::Measured && !a_.is_infinity()) {
      DensityOperator s = density_from(sigma);
      for (std::size_t k = 0; k < blocks_.size(); ++k) {
        if (mode == Mode::Fixed && bases_[k].size() > 0) {
          d[k] = div::basis_divergence(blocks_[k], s, a_, bases_[k]).to_double();
          continue;
        }
        div::OptimizerConfig c = mcfg_;
        if (bases_[k].size() > 0) {
          c.initial_bases.insert(c.initial_bases.begin(), bases_[k]);
          c.restarts = 0;
        }
        div::MeasuredResult m = div::measured_renyi(blocks_[k], s, a_, c);
        if (mode == Mode::Search || bases_[k].size() == 0) bases_[k] = m.basis;
        d[k] = m.result.value.to_double();
      }
    } else {
      for (std::size_t k = 0; k < blocks_.size(); ++k) d[k] = sandwiched_block(blocks_[k], sigma);
    }
    if (mode == Mode::Search) block_div_ = d;
    return combine(d);
  }

  /// Combines per-letter divergences into the joint divergence.
  double combine(const std::vector<double>& d) const {
    if (a_.is_infinity()) return *std::max_element(d.begin(), d.end());
    if (a_.is_one()) {
      double v = 0.0;
      for (std::size_t k = 0; k < d.size(); ++k) {
        if (std::isinf(d[k])) return d[k];
        v += std::exp(logp_[k]) * d[k];
      }
      return v;
    }
    const double am1 = a_.value() - 1.0;
    std::vector<double> terms(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) terms[k] = logp_[k] + am1 * d[k];
    return detail::log_sum_exp(terms) / am1;
  }

  /// d/dp(x) of the joint divergence at the current sigma, for each kept letter.
  std::vector<double> letter_gradient() const {
    std::vector<double> g(blocks_.size());
    if (a_.is_one()) return block_div_;
    const double am1 = a_.value() - 1.0;
    std::vector<double> terms(blocks_.size());
    for (std::size_t k = 0; k < blocks_.size(); ++k) terms[k] = logp_[k] + am1 * block_div_[k];
    const double lse = detail::log_sum_exp(terms);
    for (std::size_t k = 0; k < blocks_.size(); ++k) g[k] = std::exp(am1 * block_div_[k] - lse) / am1;
    return g;
  }

 private:
  double sandwiched_block(const DensityOperator& rho, const Spectrum& sigma) const {
    if (!opalg::support_contained(rho.op(), sigma)) return a_.below_one() ? finite_below_one(rho, sigma) : kInf;
    if (a_.is_one()) {
      HermitianOperator ls = opalg::log_on_support(sigma);
      HermitianOperator lr = opalg::log_on_support(rho.spectrum());
      return opalg::trace_product(rho.op(), lr) - opalg::trace_product(rho.op(), ls);
    }
    if (a_.is_infinity()) {
      HermitianOperator w = opalg::frac_power(sigma, -0.5);
      Matrix q = w.matrix() * rho.matrix() * w.matrix();
      return std::log(opalg::spectrum(HermitianOperator::from_hermitian_part(q)).values.maxCoeff());
    }
    return div::sandwiched_log_q(rho.op(), sigma, a_.value()) / (a_.value() - 1.0);
  }

  double finite_below_one(const DensityOperator& rho, const Spectrum& sigma) const {
    return div::sandwiched_log_q(rho.op(), sigma, a_.value()) / (a_.value() - 1.0);
  }

  RenyiOrder a_;
  DivergenceKind kind_;
  div::OptimizerConfig mcfg_;
  Matrix iso_;
  Spectrum average_;
  std::vector<DensityOperator> blocks_;
  std::vector<double> logp_;
  std::vector<std::size_t> letters_;
  std::vector<double> block_div_;
  std::vector<Matrix> bases_;
};

struct DescentResult {
  Spectrum sigma;
  Matrix log_sigma;
  double value = kInf;
  bool converged = false;
  int iterations = 0;
};

/// Entropic mirror descent: L <- L - eta grad, sigma = exp(L) / Tr exp(L).
DescentResult mirror_descent(InnerObjective& obj, const Matrix& l0, const SolverConfig& cfg) {
  const Index d = obj.dim();
  DescentResult out;
  out.log_sigma = l0;
  out.sigma = gibbs_spectrum(l0);
  out.value = obj.eval(out.sigma, InnerObjective::Mode::Search);
  if (d <= 1) {
    out.converged = true;
    return out;
  }
  const std::vector<Matrix> basis = hermitian_basis(d);
  const double h = cfg.fd_step;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    out.iterations = it + 1;
    Matrix grad = Matrix::Zero(d, d);
    double gnorm2 = 0.0;
    for (const Matrix& e : basis) {
      double fp = obj.eval(gibbs_spectrum(out.log_sigma + h * e), InnerObjective::Mode::Fixed);
      double fm = obj.eval(gibbs_spectrum(out.log_sigma - h * e), InnerObjective::Mode::Fixed);
      double g = (fp - fm) / (2.0 * h);
      if (!std::isfinite(g)) g = 0.0;
      grad += g * e;
      gnorm2 += g * g;
    }
    if (gnorm2 < 1e-30) {
      out.converged = true;
      break;
    }
    bool moved = false;
    double gain = 0.0;
    for (double eta = 1.0; eta >= kMinStep; eta *= 0.5) {
      Matrix lc = out.log_sigma - eta * grad;
      Spectrum sc = gibbs_spectrum(lc);
      double fc = obj.eval(sc, InnerObjective::Mode::Search);
      if (fc <= out.value - kArmijo * eta * gnorm2) {
        gain = out.value - fc;
        out.log_sigma = std::move(lc);
        out.sigma = std::move(sc);
        out.value = fc;
        moved = true;
        break;
      }
    }
    // Restore the block data of the accepted point.
    obj.eval(out.sigma, InnerObjective::Mode::Search);
    if (!moved || gain < cfg.improvement_tol * std::max(1.0, std::abs(out.value))) {
      out.converged = true;
      break;
    }
  }
  return out;
}

Matrix initial_log(const InnerObjective& obj, const SolverConfig& cfg) {
  const Index d = obj.dim();
  Spectrum s;
  if (cfg.sigma_start && cfg.sigma_start->dim() == obj.isometry().rows()) {
    Matrix r = obj.isometry().adjoint() * cfg.sigma_start->matrix() * obj.isometry();
    s = opalg::spectrum(HermitianOperator::from_hermitian_part(r));
    double tr = s.values.cwiseMax(0.0).sum();
    if (!(tr > 0.0)) s = obj.average();
  } else {
    s = obj.average();
  }
  RealVector v = s.values.cwiseMax(0.0);
  v /= v.sum();
  // Keep the start strictly positive definite.
  v = (1.0 - 1e-6) * v + RealVector::Constant(d, 1e-6 / static_cast<double>(d));
  return s.vectors * v.array().log().matrix().cast<Complex>().asDiagonal() * s.vectors.adjoint();
}

DensityOperator embed(const Matrix& iso, const Spectrum& s) {
  Matrix m = iso * reconstruct(s) * iso.adjoint();
  return DensityOperator::normalized(HermitianOperator::from_hermitian_part(m));
}

struct InnerSolution {
  double value = kInf;
  Spectrum sigma;  // on the reduced space
  Matrix isometry;
  std::vector<double> gradient;  // per kept letter
  std::vector<std::size_t> letters;
  bool converged = true;
  int iterations = 0;
};

InnerSolution solve_inner(const CqChannel& ch, const ProbDist& p, RenyiOrder a, DivergenceKind kind,
                          const SolverConfig& cfg) {
  if (kind == DivergenceKind::Measured && a.is_infinity()) kind = DivergenceKind::Sandwiched;
  InnerSolution sol;
  if (a.is_infinity()) {
    // Continuation through large finite orders, then the exact max-divergence.
    SolverConfig c = cfg;
    InnerObjective exact(ch, p, a, kind, cfg.measured);
    Matrix l = initial_log(exact, cfg);
    Spectrum best_sigma = exact.average();
    double best = exact.eval(best_sigma, InnerObjective::Mode::Search);
    bool converged = true;
    for (double alpha : {16.0, 128.0, 1024.0}) {
      InnerObjective obj(ch, p, RenyiOrder::finite(alpha), kind, cfg.measured);
      DescentResult r = mirror_descent(obj, l, c);
      l = r.log_sigma;
      converged = converged && r.converged;
      sol.iterations += r.iterations;
      Spectrum candidate = gibbs_spectrum(l);
      double v = exact.eval(candidate, InnerObjective::Mode::Search);
      if (v < best) {
        best = v;
        best_sigma = std::move(candidate);
      }
    }
    sol.sigma = std::move(best_sigma);
    sol.value = exact.eval(sol.sigma, InnerObjective::Mode::Search);
    sol.isometry = exact.isometry();
    sol.letters = exact.letters();
    // Subgradient: the letters attaining the maximum share the weight.
    const auto& bd = exact.block_divergences();
    sol.gradient.assign(bd.size(), 0.0);
    for (std::size_t k = 0; k < bd.size(); ++k) sol.gradient[k] = bd[k] >= sol.value - 1e-9 ? 1.0 : 0.0;
    sol.converged = converged;
    return sol;
  }

  InnerObjective obj(ch, p, a, kind, cfg.measured);
  if (a.is_one() && kind == DivergenceKind::Sandwiched) {
    // The minimizer is the averaged output (Holevo quantity).
    sol.sigma = obj.average();
    sol.value = obj.eval(sol.sigma, InnerObjective::Mode::Search);
  } else {
    DescentResult r = mirror_descent(obj, initial_log(obj, cfg), cfg);
    if (kind == DivergenceKind::Measured) {
      // Also descend from the sandwiched minimizer, where the measured value
      // is already below the sandwiched information.
      InnerSolution sw = solve_inner(ch, p, a, DivergenceKind::Sandwiched, cfg);
      SolverConfig c = cfg;
      c.sigma_start = embed(sw.isometry, sw.sigma);
      DescentResult alt = mirror_descent(obj, initial_log(obj, c), cfg);
      if (alt.value < r.value) r = std::move(alt);
      obj.eval(r.sigma, InnerObjective::Mode::Search);
    }
    sol.sigma = r.sigma;
    sol.value = r.value;
    sol.converged = r.converged;
    sol.iterations = r.iterations;
  }
  sol.isometry = obj.isometry();
  sol.letters = obj.letters();
  sol.gradient = obj.letter_gradient();
  return sol;
}

void require_budget(const CqChannel& ch, DivergenceKind kind) {
  if (kind != DivergenceKind::Measured) return;
  const auto joint = static_cast<Index>(ch.input_size()) * ch.output_dim();
  if (joint > kMaxMeasuredJointDim) {
    throw opalg::BudgetExceeded("measured mutual information: d_X * d_B = " + std::to_string(joint) +
                                " exceeds " + std::to_string(kMaxMeasuredJointDim));
  }
}

void require_kind(DivergenceKind kind) {
  if (kind != DivergenceKind::Sandwiched && kind != DivergenceKind::Measured) {
    throw std::invalid_argument("mutual information supports kinds sandwiched and measured");
  }
}

DivergenceStatus status_for(DivergenceKind kind, RenyiOrder a) {
  return kind == DivergenceKind::Measured && !a.is_infinity() ? DivergenceStatus::LowerBound
                                                               : DivergenceStatus::Exact;
}

ProbDist from_log(const std::vector<double>& lp) {
  const double lse = detail::log_sum_exp(lp);
  std::vector<double> w(lp.size());
  for (std::size_t i = 0; i < lp.size(); ++i) w[i] = std::exp(lp[i] - lse);
  double s = 0.0;
  for (double v : w) s += v;
  for (double& v : w) v /= s;
  return ProbDist(std::move(w));
}

}  // namespace

CqChannel::CqChannel(std::vector<DensityOperator> outputs) : outputs_(std::move(outputs)) {
  if (outputs_.empty()) throw std::invalid_argument("CqChannel: empty input alphabet");
  for (const auto& o : outputs_) {
    if (o.dim() != outputs_.front().dim()) throw opalg::DimensionError("CqChannel: output dimensions differ");
  }
}

CqChannel product_channel(const CqChannel& a, const CqChannel& b) {
  std::vector<DensityOperator> out;
  out.reserve(a.input_size() * b.input_size());
  for (const auto& ra : a.outputs()) {
    for (const auto& rb : b.outputs()) out.push_back(opalg::kron(ra, rb));
  }
  return CqChannel(std::move(out));
}

Codebook::Codebook(std::vector<std::size_t> codewords, std::size_t alphabet_size)
    : codewords_(std::move(codewords)) {
  if (codewords_.empty()) throw std::invalid_argument("Codebook: no messages");
  for (std::size_t x : codewords_) {
    if (x >= alphabet_size) throw std::invalid_argument("Codebook: codeword outside the input alphabet");
  }
}

ProbDist Codebook::empirical(std::size_t alphabet_size) const {
  std::vector<double> w(alphabet_size, 0.0);
  for (std::size_t x : codewords_) w.at(x) += 1.0 / static_cast<double>(codewords_.size());
  return ProbDist(std::move(w));
}

JointState joint_state(const CqChannel& ch, const ProbDist& p) {
  if (p.size() != ch.input_size()) throw opalg::DimensionError("joint_state: distribution size mismatch");
  std::vector<HermitianOperator> blocks;
  for (std::size_t x = 0; x < ch.input_size(); ++x) blocks.push_back(ch.output(x).op() * p[x]);
  return JointState{DensityOperator::normalized(opalg::direct_sum(blocks)), p,
                    static_cast<Index>(ch.input_size()), ch.output_dim()};
}

ExtReal mutual_info_objective(const CqChannel& ch, const ProbDist& p, RenyiOrder a, DivergenceKind kind,
                              const DensityOperator& sigma, const div::OptimizerConfig& cfg) {
  require_kind(kind);
  if (p.size() != ch.input_size()) throw opalg::DimensionError("mutual_info_objective: distribution size mismatch");
  if (sigma.dim() != ch.output_dim()) throw opalg::DimensionError("mutual_info_objective: sigma dimension mismatch");
  if (kind == DivergenceKind::Measured && a.is_infinity()) kind = DivergenceKind::Sandwiched;
  std::vector<double> terms, d;
  for (std::size_t x = 0; x < ch.input_size(); ++x) {
    if (!(p[x] > 0.0)) continue;
    ExtReal v = kind == DivergenceKind::Sandwiched ? div::sandwiched_renyi(ch.output(x), sigma, a)
                                                   : div::measured_renyi(ch.output(x), sigma, a, cfg).result.value;
    d.push_back(v.to_double());
    terms.push_back(std::log(p[x]));
  }
  if (a.is_infinity()) return *std::max_element(d.begin(), d.end());
  if (a.is_one()) {
    double v = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (std::isinf(d[k])) return d[k];
      v += std::exp(terms[k]) * d[k];
    }
    return v;
  }
  const double am1 = a.value() - 1.0;
  for (std::size_t k = 0; k < d.size(); ++k) terms[k] += am1 * d[k];
  return detail::log_sum_exp(terms) / am1;
}

MutualInfoResult renyi_mutual_info(const CqChannel& ch, const ProbDist& p, RenyiOrder a, DivergenceKind kind,
                                   const SolverConfig& cfg) {
  require_kind(kind);
  require_budget(ch, kind);
  if (p.size() != ch.input_size()) throw opalg::DimensionError("renyi_mutual_info: distribution size mismatch");
  InnerSolution sol = solve_inner(ch, p, a, kind, cfg);
  return MutualInfoResult{sol.value, embed(sol.isometry, sol.sigma), status_for(kind, a), sol.converged,
                          sol.iterations};
}

CapacityResult renyi_capacity(const CqChannel& ch, RenyiOrder a, DivergenceKind kind, const SolverConfig& cfg) {
  require_kind(kind);
  require_budget(ch, kind);
  if (a.below_one()) throw std::invalid_argument("renyi_capacity: alpha must be >= 1");
  const std::size_t nx = ch.input_size();

  if (a.is_infinity() || nx == 1) {
    // I_inf only depends on the support of p, and grows with it.
    ProbDist u = ProbDist::uniform(nx);
    InnerSolution sol = solve_inner(ch, u, a, kind, cfg);
    return CapacityResult{sol.value, u, embed(sol.isometry, sol.sigma), status_for(kind, a), sol.converged};
  }

  std::vector<std::vector<double>> starts;
  if (cfg.p_start && cfg.p_start->size() == nx) {
    std::vector<double> lp(nx);
    for (std::size_t x = 0; x < nx; ++x) lp[x] = std::log(std::max(cfg.p_start->operator[](x), 1e-8));
    starts.push_back(lp);
  }
  rnd::Rng rng(rnd::splitmix64(cfg.seed));
  for (int k = 0; k < cfg.capacity_restarts; ++k) {
    std::vector<double> lp(nx, 0.0);
    if (k == 0) {
      // barycentre
    } else if (static_cast<std::size_t>(k) <= nx) {
      for (std::size_t x = 0; x < nx; ++x) {
        double w = 0.1 / static_cast<double>(nx) + (x == static_cast<std::size_t>(k - 1) ? 0.9 : 0.0);
        lp[x] = std::log(w);
      }
    } else {
      std::vector<double> w = rnd::random_simplex(nx, rng);
      for (std::size_t x = 0; x < nx; ++x) lp[x] = std::log(std::max(w[x], 1e-8));
    }
    starts.push_back(lp);
  }

  std::optional<CapacityResult> best;
  for (const auto& start : starts) {
    std::vector<double> lp = start;
    SolverConfig inner = cfg;
    ProbDist p = from_log(lp);
    InnerSolution sol = solve_inner(ch, p, a, kind, inner);
    bool converged = false;
    double eta = 1.0;
    for (int it = 0; it < cfg.capacity_iterations; ++it) {
      // Centered envelope gradient on the kept letters.
      std::vector<double> g(nx, 0.0);
      double mean = 0.0;
      for (std::size_t k = 0; k < sol.letters.size(); ++k) mean += p[sol.letters[k]] * sol.gradient[k];
      for (std::size_t k = 0; k < sol.letters.size(); ++k) g[sol.letters[k]] = sol.gradient[k] - mean;
      bool moved = false;
      double gain = 0.0;
      for (eta = std::min(1.0, 2.0 * eta); eta >= kMinStep; eta *= 0.5) {
        std::vector<double> lc(nx);
        for (std::size_t x = 0; x < nx; ++x) lc[x] = lp[x] + eta * g[x];
        ProbDist pc = from_log(lc);
        inner.sigma_start = embed(sol.isometry, sol.sigma);
        InnerSolution sc = solve_inner(ch, pc, a, kind, inner);
        if (sc.value > sol.value) {
          gain = sc.value - sol.value;
          lp = std::move(lc);
          p = pc;
          sol = std::move(sc);
          moved = true;
          break;
        }
      }
      if (!moved || gain < cfg.improvement_tol * std::max(1.0, std::abs(sol.value))) {
        converged = true;
        break;
      }
    }
    CapacityResult r{sol.value, p, embed(sol.isometry, sol.sigma), status_for(kind, a), converged && sol.converged};
    if (!best || r.value > best->value) best = std::move(r);
  }
  return *best;
}

double coding_upper_bound(const CqChannel& ch, const ProbDist& p, std::size_t message_count,
                          const std::vector<RenyiOrder>& alphas, DivergenceKind kind, const SolverConfig& cfg) {
  if (message_count < 1) throw std::invalid_argument("coding_upper_bound: message_count must be >= 1");
  const double log_m = std::log(static_cast<double>(message_count));
  double best = 1.0;
  for (const RenyiOrder& a : alphas) {
    if (a.below_one()) throw std::invalid_argument("coding_upper_bound: alpha must be >= 1");
    if (a.is_one()) continue;
    double i = renyi_mutual_info(ch, p, a, kind, cfg).value.to_double();
    best = std::min(best, std::exp(-a.ratio() * (log_m - i)));
  }
  return best;
}

double helstrom_success(const CqChannel& ch, const Codebook& codebook) {
  if (codebook.message_count() != 2) throw std::invalid_argument("helstrom_success: exactly two messages required");
  HermitianOperator diff = (ch.output(codebook[0]).op() - ch.output(codebook[1]).op()) * 0.5;
  return 0.5 * (1.0 + opalg::trace_norm(diff));
}

opalg::Povm pgm_decoder(const CqChannel& ch, const Codebook& codebook) {
  const double inv_m = 1.0 / static_cast<double>(codebook.message_count());
  const Index d = ch.output_dim();
  HermitianOperator s = HermitianOperator::zero(d);
  for (std::size_t x : codebook.codewords()) s = s + ch.output(x).op() * inv_m;
  Spectrum ss = opalg::spectrum(s);
  HermitianOperator w = opalg::frac_power(ss, -0.5);
  HermitianOperator fill = (HermitianOperator::identity(d) - opalg::support_projector(ss)) * inv_m;
  std::vector<HermitianOperator> effects;
  for (std::size_t x : codebook.codewords()) {
    Matrix e = w.matrix() * ch.output(x).matrix() * w.matrix() * inv_m;
    effects.push_back(HermitianOperator::from_hermitian_part(e) + fill);
  }
  return opalg::Povm(std::move(effects));
}

double pgm_success(const CqChannel& ch, const Codebook& codebook) {
  opalg::Povm pgm = pgm_decoder(ch, codebook);
  double total = 0.0;
  for (std::size_t m = 0; m < codebook.message_count(); ++m) {
    total += opalg::trace_product(ch.output(codebook[m]).op(), pgm.effects()[m]);
  }
  return std::clamp(total / static_cast<double>(codebook.message_count()), 0.0, 1.0);
}

double pgm_success_assisted(const CqChannel& ch, const ProbDist& p, std::size_t message_count) {
  const std::size_t nx = ch.input_size();
  if (p.size() != nx) throw opalg::DimensionError("pgm_success_assisted: distribution size mismatch");
  if (message_count < 1) throw std::invalid_argument("pgm_success_assisted: message_count must be >= 1");
  double count = std::pow(static_cast<double>(nx), static_cast<double>(message_count));
  if (count > static_cast<double>(kMaxCodebooks)) {
    throw opalg::BudgetExceeded("pgm_success_assisted: " + format_double(count) + " codebooks exceed " +
                                std::to_string(kMaxCodebooks));
  }
  std::vector<std::size_t> word(message_count, 0);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t x : word) w *= p[x];
    if (w > 0.0) total += w * pgm_success(ch, Codebook(word, nx));
    std::size_t i = 0;
    while (i < message_count && ++word[i] == nx) word[i++] = 0;
    if (i == message_count) break;
  }
  return std::clamp(total, 0.0, 1.0);
}

hypotest::ExponentCurve coding_exponent_curve(const CqChannel& ch, const std::vector<double>& rates,
                                              const std::vector<RenyiOrder>& alphas, const SolverConfig& cfg,
                                              int refine_iterations) {
  constexpr double kGolden = 0.6180339887498949;
  auto order_from_ratio = [](double s) {
    if (s <= 0.0) return RenyiOrder::one();
    if (s >= 1.0) return RenyiOrder::infinity();
    return RenyiOrder::from_value(1.0 / (1.0 - s));
  };

  std::map<double, CapacityResult> table;
  auto capacity = [&](double s) -> double {
    auto it = table.find(s);
    if (it != table.end()) return it->second.value.to_double();
    SolverConfig c = cfg;
    if (!table.empty()) {
      // Warm start from the closest computed order.
      auto near = table.lower_bound(s);
      if (near == table.end() || (near != table.begin() && s - std::prev(near)->first < near->first - s)) --near;
      c.p_start = near->second.p_star;
      c.sigma_start = near->second.sigma_star;
      c.capacity_restarts = 1;
    }
    CapacityResult r = renyi_capacity(ch, order_from_ratio(s), DivergenceKind::Sandwiched, c);
    double v = r.value.to_double();
    table.emplace(s, std::move(r));
    return v;
  };
  auto affine = [](double s, double c, double r) { return s == 0.0 ? 0.0 : s * (r - c); };

  std::vector<double> grid{0.0};
  for (const RenyiOrder& a : alphas) {
    if (a.below_one()) throw std::invalid_argument("coding_exponent_curve: alpha must be >= 1");
    grid.push_back(a.ratio());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (double s : grid) capacity(s);

  for (double r : rates) {
    auto f = [&](double s) { return affine(s, capacity(s), r); };
    std::size_t k = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (f(grid[i]) > f(grid[k])) k = i;
    }
    if (refine_iterations <= 0 || grid.size() < 2 || f(grid[k]) <= 0.0) continue;
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

  hypotest::ExponentCurve curve;
  for (double r : rates) {
    hypotest::CurvePoint pt{r, 0.0, RenyiOrder::one()};
    for (const auto& [s, cap] : table) {
      double v = affine(s, cap.value.to_double(), r);
      if (v > pt.exponent) {
        pt.exponent = v;
        pt.argmax_alpha = order_from_ratio(s);
      }
    }
    curve.points.push_back(pt);
  }
  return curve;
}

ProbDist AssistedCode::input_distribution(std::size_t alphabet_size) const {
  std::vector<double> w(alphabet_size, 0.0);
  const double inv_m = 1.0 / static_cast<double>(message_count());
  for (const auto& r : realizations) {
    for (std::size_t x : r.codebook.codewords()) w.at(x) += r.weight * inv_m;
  }
  return ProbDist(std::move(w));
}

DirectSumRecord direct_sum_reduction_check(const CqChannel& ch, const AssistedCode& code,
                                           const DensityOperator& sigma_b, RenyiOrder a) {
  if (code.realizations.empty()) throw std::invalid_argument("direct_sum_reduction_check: empty code");
  const std::size_t nm = code.message_count();
  const std::size_t nx = ch.input_size();
  const Index db = ch.output_dim();
  if (sigma_b.dim() != db) throw opalg::DimensionError("direct_sum_reduction_check: sigma dimension mismatch");
  double total_weight = 0.0;
  for (const auto& r : code.realizations) {
    if (r.codebook.message_count() != nm || r.decoder.size() != nm || r.decoder.dim() != db) {
      throw std::invalid_argument("direct_sum_reduction_check: decoder does not match the codebook");
    }
    if (!(r.weight >= 0.0)) throw std::invalid_argument("direct_sum_reduction_check: negative weight");
    total_weight += r.weight;
  }
  if (std::abs(total_weight - 1.0) > opalg::kTraceTol) {
    throw std::invalid_argument("direct_sum_reduction_check: weights must sum to 1");
  }
  const double inv_m = 1.0 / static_cast<double>(nm);

  DirectSumRecord rec;
  rec.inverse_messages = inv_m;
  // w(m, x) and the conditional average decoder T(m, x).
  std::vector<double> w(nm * nx, 0.0);
  std::vector<HermitianOperator> t(nm * nx, HermitianOperator::zero(db));
  for (const auto& r : code.realizations) {
    for (std::size_t m = 0; m < nm; ++m) {
      const std::size_t x = r.codebook[m];
      w[m * nx + x] += r.weight * inv_m;
      t[m * nx + x] = t[m * nx + x] + r.decoder.effects()[m] * r.weight;
      rec.success += r.weight * inv_m * opalg::trace_product(ch.output(x).op(), r.decoder.effects()[m]);
    }
  }
  std::vector<HermitianOperator> omega, omega_sigma, test;
  for (std::size_t m = 0; m < nm; ++m) {
    for (std::size_t x = 0; x < nx; ++x) {
      const std::size_t k = m * nx + x;
      const double px = w[k] / inv_m;  // P(x(m) = x)
      HermitianOperator tk = px > 0.0 ? t[k] * (1.0 / px) : HermitianOperator::zero(db);
      omega.push_back(ch.output(x).op() * w[k]);
      omega_sigma.push_back(sigma_b.op() * w[k]);
      test.push_back(tk);
      rec.omega_success += w[k] * opalg::trace_product(ch.output(x).op(), tk);
      rec.omega_type2 += w[k] * opalg::trace_product(sigma_b.op(), tk);
    }
  }
  opalg::Effect t_mxb(opalg::direct_sum(test));
  DensityOperator om = DensityOperator::normalized(opalg::direct_sum(omega));
  DensityOperator oms = DensityOperator::normalized(opalg::direct_sum(omega_sigma));
  const double check_success = opalg::trace_product(om.op(), t_mxb.op());
  const double check_type2 = opalg::trace_product(oms.op(), t_mxb.op());

  ProbDist p = code.input_distribution(nx);
  JointState js = joint_state(ch, p);
  std::vector<HermitianOperator> prod;
  for (std::size_t x = 0; x < nx; ++x) prod.push_back(sigma_b.op() * p[x]);
  DensityOperator rs = DensityOperator::normalized(opalg::direct_sum(prod));

  rec.divergence_omega = div::sandwiched_renyi(om, oms, a).to_double();
  rec.divergence_rho = div::sandwiched_renyi(js.rho_xb, rs, a).to_double();
  const bool same_div = rec.divergence_omega == rec.divergence_rho ||
                        std::abs(rec.divergence_omega - rec.divergence_rho) <= 1e-8;
  rec.passes = std::abs(rec.omega_success - rec.success) <= 1e-10 && std::abs(check_success - rec.success) <= 1e-10 &&
               std::abs(rec.omega_type2 - inv_m) <= 1e-10 && std::abs(check_type2 - inv_m) <= 1e-10 && same_div;
  return rec;
}

DirectSumRecord direct_sum_reduction_check(const CqChannel& ch, const Codebook& codebook,
                                           const opalg::Povm& decoder, const DensityOperator& sigma_b,
                                           RenyiOrder a) {
  AssistedCode code;
  code.realizations.push_back({1.0, codebook, decoder});
  return direct_sum_reduction_check(ch, code, sigma_b, a);
}

}  // namespace renyi::cq
