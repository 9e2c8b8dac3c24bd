#include "renyi/measured.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "renyi/random.hpp"

namespace renyi::div {

using opalg::Complex;
using opalg::Index;
using opalg::Matrix;
using opalg::Spectrum;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kOutcomeZero = 1e-14;

/// Orthonormal basis whose first column is parallel to w.
Matrix complete_basis(const opalg::Vector& w) {
  const Index d = w.size();
  Matrix m(d, d + 1);
  m.col(0) = w.normalized();
  m.rightCols(d) = Matrix::Identity(d, d);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  return q;
}

Matrix reunitarize(const Matrix& u) {
  Eigen::HouseholderQR<Matrix> qr(u);
  Matrix q = qr.householderQ() * Matrix::Identity(u.rows(), u.cols());
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < u.cols(); ++i) {
    Complex d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

/// Objective over orthonormal bases with cached basis-frame matrices.
class BasisSearch {
 public:
  BasisSearch(const DensityOperator& rho, const DensityOperator& sigma, RenyiOrder a, bool contained)
      : rho_(rho.matrix()), sigma_(sigma.matrix()), a_(a), contained_(contained), d_(rho.dim()),
        p_(static_cast<std::size_t>(d_)), q_(static_cast<std::size_t>(d_)) {}

  int evaluations() const { return evals_; }

  double value(const Matrix& u) {
    for (Index i = 0; i < d_; ++i) {
      p_[static_cast<std::size_t>(i)] = (u.col(i).adjoint() * rho_ * u.col(i))(0, 0).real();
      q_[static_cast<std::size_t>(i)] = (u.col(i).adjoint() * sigma_ * u.col(i))(0, 0).real();
    }
    return score(p_, q_);
  }

  struct Result {
    Matrix basis;
    double value = kNegInf;
    bool converged = false;
  };

  Result ascend(Matrix u, const OptimizerConfig& cfg) {
    Result out;
    double f = value(u);
    if (std::isinf(f) && f > 0) return {u, f, true};

    const Index d = d_;
    const double h = cfg.fd_step;
    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(cfg.max_iterations) + 1);
    history.push_back(f);
    double step = 0.1;
    bool converged = false;

    for (int it = 0; it < cfg.max_iterations; ++it) {
      Matrix r = u.adjoint() * rho_ * u;
      Matrix s = u.adjoint() * sigma_ * u;
      for (Index i = 0; i < d; ++i) {
        p_[static_cast<std::size_t>(i)] = r(i, i).real();
        q_[static_cast<std::size_t>(i)] = s(i, i).real();
      }

      Matrix gen = Matrix::Zero(d, d);
      double gnorm2 = 0.0;
      for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
          double gy = (rotated(r, s, i, j, h, false) - rotated(r, s, i, j, -h, false)) / (2 * h);
          double gx = (rotated(r, s, i, j, h, true) - rotated(r, s, i, j, -h, true)) / (2 * h);
          if (!std::isfinite(gy)) gy = 0.0;
          if (!std::isfinite(gx)) gx = 0.0;
          // Pauli-Y and Pauli-X generators on the (i, j) plane.
          gen(i, j) += Complex(gx, -gy);
          gen(j, i) += Complex(gx, gy);
          gnorm2 += gx * gx + gy * gy;
        }
      }
      if (gnorm2 < 1e-28) {
        converged = true;
        break;
      }
      gen /= std::sqrt(gnorm2);
      Eigen::SelfAdjointEigenSolver<Matrix> es(gen);
      const Matrix& v = es.eigenvectors();
      const auto& lam = es.eigenvalues();

      bool moved = false;
      while (step > 1e-12) {
        opalg::Vector phase(d);
        for (Index k = 0; k < d; ++k) phase(k) = std::polar(1.0, step * lam(k));
        Matrix cand = u * (v * phase.asDiagonal() * v.adjoint());
        double fc = value(cand);
        if (fc > f) {
          u = std::move(cand);
          f = fc;
          moved = true;
          step = std::min(step * 2.0, 1.0);
          break;
        }
        step *= 0.5;
      }
      if (!moved) {
        converged = true;
        break;
      }
      if (std::isinf(f)) {
        converged = true;
        break;
      }
      if (it % 100 == 99) u = reunitarize(u);
      history.push_back(f);
      const auto n = history.size();
      if (n > static_cast<std::size_t>(cfg.patience) &&
          f - history[n - 1 - static_cast<std::size_t>(cfg.patience)] < cfg.improvement_tol) {
        converged = true;
        break;
      }
    }
    out.basis = u;
    out.value = f;
    out.converged = converged;
    return out;
  }

 private:
  double score(const std::vector<double>& p, const std::vector<double>& q) {
    ++evals_;
    std::vector<double> pc(p.size()), qc(q.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      pc[i] = p[i] < kOutcomeZero ? 0.0 : p[i];
      qc[i] = q[i] < kOutcomeZero ? 0.0 : q[i];
    }
    ExtReal v = classical_renyi(std::span<const double>(pc), std::span<const double>(qc), a_);
    if (v.is_pos_inf() && contained_ && !a_.below_one()) return kNegInf;  // rounding artefact
    return v.to_double();
  }

  /// Objective after rotating columns i, j of the current basis by angle t.
  double rotated(const Matrix& r, const Matrix& s, Index i, Index j, double t, bool complex_gen) {
    const double c = std::cos(t), sn = std::sin(t);
    auto pair = [&](const Matrix& m, double& vi, double& vj) {
      const double mii = m(i, i).real(), mjj = m(j, j).real();
      const double cross = complex_gen ? m(i, j).imag() : m(i, j).real();
      vi = c * c * mii + sn * sn * mjj - 2 * c * sn * cross;
      vj = sn * sn * mii + c * c * mjj + 2 * c * sn * cross;
    };
    std::vector<double> p = p_, q = q_;
    pair(r, p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
    pair(s, q[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(j)]);
    return score(p, q);
  }

  const Matrix& rho_;
  const Matrix& sigma_;
  RenyiOrder a_;
  bool contained_;
  Index d_;
  std::vector<double> p_, q_;
  int evals_ = 0;
};

std::vector<Matrix> structured_starts(const DensityOperator& rho, const DensityOperator& sigma,
                                      RenyiOrder a, bool contained) {
  std::vector<Matrix> starts;
  starts.push_back(rho.spectrum().vectors);
  starts.push_back(sigma.spectrum().vectors);
  starts.push_back(opalg::spectrum(rho.op() - sigma.op()).vectors);
  if (contained) {
    opalg::Quotient ratio = opalg::nc_quotient(rho.op(), sigma.op());
    Spectrum sr = opalg::spectrum(ratio.value);
    starts.push_back(sr.vectors);
    // Basis containing sigma^{-1/2} v_max: attains the max-ratio outcome.
    HermitianOperator inv = opalg::frac_power(sigma.spectrum(), -0.5);
    opalg::Vector w = inv.matrix() * sr.vectors.col(sr.dim() - 1);
    if (w.norm() > 0) starts.push_back(complete_basis(w));
    if (a.is_finite() && a.value() > 1.0) {
      starts.push_back(optimal_sandwiched_test(rho, sigma, a).spectrum().vectors);
    }
    if (rho.spectrum().rank() == rho.dim() && sigma.spectrum().rank() == sigma.dim()) {
      HermitianOperator diff =
          opalg::log_on_support(rho.spectrum()) - opalg::log_on_support(sigma.spectrum());
      starts.push_back(opalg::spectrum(diff).vectors);
    }
  }
  return starts;
}

}  // namespace

ExtReal basis_divergence(const DensityOperator& rho, const DensityOperator& sigma, RenyiOrder a,
                         const Matrix& basis) {
  if (rho.dim() != sigma.dim() || basis.rows() != rho.dim()) {
    throw opalg::DimensionError("basis_divergence: dimension mismatch");
  }
  std::vector<double> p(static_cast<std::size_t>(basis.cols())), q(p.size());
  for (Index i = 0; i < basis.cols(); ++i) {
    p[static_cast<std::size_t>(i)] = std::max(0.0, (basis.col(i).adjoint() * rho.matrix() * basis.col(i))(0, 0).real());
    q[static_cast<std::size_t>(i)] = std::max(0.0, (basis.col(i).adjoint() * sigma.matrix() * basis.col(i))(0, 0).real());
  }
  return classical_renyi(std::span<const double>(p), std::span<const double>(q), a);
}

MeasuredResult measured_renyi(const DensityOperator& rho, const DensityOperator& sigma, RenyiOrder a,
                              const OptimizerConfig& cfg) {
  if (rho.dim() != sigma.dim()) throw opalg::DimensionError("measured_renyi: dimension mismatch");
  MeasuredResult out;
  out.result.alpha = a;
  out.result.kind = DivergenceKind::Measured;
  out.upper_bound = sandwiched_renyi(rho, sigma, a);
  const bool contained = opalg::support_contained(rho.op(), sigma.spectrum());

  // A support violation is detected by the two-outcome PVM {P_sigma, 1 - P_sigma}.
  if (!contained && !a.below_one()) {
    HermitianOperator ps = opalg::support_projector(sigma.spectrum());
    HermitianOperator perp = HermitianOperator::identity(rho.dim()) - ps;
    out.result.value = ExtReal::pos_inf();
    out.result.status = DivergenceStatus::Exact;
    out.result.pvm_witness = opalg::Pvm({ps, perp});
    out.basis = sigma.spectrum().vectors;
    return out;
  }

  // Commuting pair: the common eigenbasis is optimal and the value is exact.
  if (auto common = common_eigenbasis(rho.op(), sigma.op())) {
    out.basis = *common;
    out.result.value = basis_divergence(rho, sigma, a, *common);
    out.result.status = DivergenceStatus::Exact;
    out.result.pvm_witness = opalg::Pvm::from_basis(*common);
    return out;
  }

  BasisSearch search(rho, sigma, a, contained);
  std::vector<Matrix> starts = cfg.initial_bases;
  if (cfg.structured_starts) {
    auto extra = structured_starts(rho, sigma, a, contained);
    starts.insert(starts.end(), extra.begin(), extra.end());
  }
  rnd::Rng rng(rnd::splitmix64(cfg.seed));
  for (int k = 0; k < cfg.restarts; ++k) starts.push_back(rnd::haar_unitary(rho.dim(), rng));
  if (starts.empty()) starts.push_back(Matrix::Identity(rho.dim(), rho.dim()));

  BasisSearch::Result best;
  for (const Matrix& s0 : starts) {
    BasisSearch::Result r = search.ascend(reunitarize(s0), cfg);
    if (r.value > best.value || best.basis.size() == 0) best = std::move(r);
    if (std::isinf(best.value) && best.value > 0) break;
  }
  out.basis = best.basis;
  out.result.value = best.value;
  out.result.status = DivergenceStatus::LowerBound;
  out.result.pvm_witness = opalg::Pvm::from_basis(reunitarize(best.basis));
  out.converged = best.converged;
  out.evaluations = search.evaluations();
  return out;
}

}  // namespace renyi::div
