#include "renyi/holder.hpp"

#include <algorithm>
#include <cmath>

namespace renyi::div {

using opalg::DomainError;
using opalg::Matrix;
using opalg::Spectrum;

HolderRecord holder_check(const HermitianOperator& x, const HermitianOperator& y,
                          const HermitianOperator& sigma, RenyiOrder a) {
  if (x.dim() != y.dim() || x.dim() != sigma.dim()) {
    throw opalg::DimensionError("holder_check: dimension mismatch");
  }
  HolderRecord rec;
  rec.reverse = a.below_one();
  if (rec.reverse) {
    Spectrum sy = opalg::spectrum(y);
    if (!opalg::support_contained(sigma, sy)) {
      throw DomainError("holder_check: reverse inequality requires supp(sigma) inside supp(y)");
    }
  }
  const double p = a.is_one() ? 1.0 : a.value();
  const double q = a.conjugate();
  rec.lhs = opalg::kms_inner(x, y, sigma);
  rec.rhs = opalg::weighted_norm(x, sigma, p).to_double() * opalg::weighted_norm(y, sigma, q).to_double();
  rec.gap = rec.reverse ? rec.lhs - rec.rhs : rec.rhs - rec.lhs;
  double scale = std::max({std::abs(rec.lhs), std::abs(rec.rhs), 1.0});
  rec.holds = rec.gap >= -kHolderTol * scale;
  return rec;
}

HermitianOperator holder_equality_witness(const HermitianOperator& x, const HermitianOperator& sigma,
                                          RenyiOrder a) {
  if (x.dim() != sigma.dim()) throw opalg::DimensionError("holder_equality_witness: dimension mismatch");
  if (!a.is_finite() || a.value() <= 1.0) {
    throw DomainError("holder_equality_witness: requires finite alpha > 1");
  }
  Spectrum ss = opalg::spectrum(sigma);
  opalg::require_psd(ss, "holder_equality_witness");
  if (ss.rank() < ss.dim()) throw DomainError("holder_equality_witness: sigma must be full rank");
  if (x.matrix().cwiseAbs().maxCoeff() == 0.0) throw DomainError("holder_equality_witness: x = 0");

  const double alpha = a.value();
  const double conj = a.conjugate();
  HermitianOperator wx = opalg::frac_power(ss, 1.0 / (2.0 * alpha));
  HermitianOperator wy = opalg::frac_power(ss, -1.0 / (2.0 * conj));
  Matrix tx = wx.matrix() * x.matrix() * wx.matrix();
  Spectrum st = opalg::spectrum(HermitianOperator::from_hermitian_part(tx));
  double c = st.cutoff();
  HermitianOperator mag = opalg::apply_spectral(st, [&](double v) {
    double m = std::abs(v);
    return m > c ? std::pow(m, alpha - 1.0) : 0.0;
  });
  return HermitianOperator::from_hermitian_part(wy.matrix() * mag.matrix() * wy.matrix());
}

}  // namespace renyi::div
