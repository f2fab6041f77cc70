#include "bimdecomp/mean_metric.hpp"

#include <cmath>

#include "bimdecomp/errors.hpp"

namespace bimdecomp {

MeanSpatial mean_spatial(const Mat3& g_vielbein, const Mat3& f_vielbein,
                         const LorentzFrame& frame, const ToleranceProfile& tol) {
  const Mat3 raw = mul(transpose(g_vielbein),
                       mul(frame.boost.full(), mul(frame.rotation, f_vielbein)));
  const double residual = asym_norm(raw) / (1.0 + norm_inf(raw));
  if (residual > tol.sym)
    throw SymmetrizationFailed(
        "mean_spatial: symmetrization residual above tolerance");

  const SymMat3 h = symmetrize(raw);
  // SPD screen via leading principal minors.
  const double m2 = h(0, 0) * h(1, 1) - h(0, 1) * h(0, 1);
  if (h(0, 0) <= 0.0 || m2 <= 0.0 || det3(h) <= 0.0)
    throw NotPositiveDefinite("mean_spatial: mean metric is not positive definite");
  return MeanSpatial{h, residual};
}

SectorShifts sector_shifts(const Vec3& q, double alpha_g, double alpha_f,
                           double lambda, const Mat3& g_vielbein,
                           const Mat3& f_vielbein, const Vec3& p,
                           const ToleranceProfile& tol) {
  Mat3 g_inv, f_inv;
  try {
    g_inv = inv3(g_vielbein, tol);
    f_inv = inv3(f_vielbein, tol);
  } catch (const SingularMatrix&) {
    throw SingularVielbein("sector_shifts: singular vielbein");
  }
  SectorShifts out;
  out.shift_g = q + (alpha_g / lambda) * mul(g_inv, p);
  out.shift_f = q - (alpha_f / lambda) * mul(f_inv, p);
  return out;
}

SymMat3 conformal_mean(const SymMat3& h, double phi_g, double phi_f) {
  return scale(std::exp(-2.0 * (phi_g + phi_f)), h);
}

double mean_property_residual(const SymMat3& gamma_g, const SymMat3& h,
                              const SymMat3& gamma_f, const Mat3& g_vielbein,
                              const Vec3& p, double lambda,
                              const ToleranceProfile& tol) {
  const Mat3 hf = h.full();
  const Mat3 lhs = mul(hf, mul(inv3(gamma_g.full(), tol), hf));
  const Vec3 u = (1.0 / lambda) * mul(hf, mul(inv3(g_vielbein, tol), p));
  double r = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r = std::max(r, std::fabs(lhs(i, j) - u[i] * u[j] - gamma_f(i, j)));
  return r / (1.0 + norm_inf(gamma_f));
}

double shift_identity_residual(const SectorShifts& shifts, double alpha_g,
                               double alpha_f, double lambda,
                               const Mat3& g_vielbein, const Mat3& f_vielbein,
                               const Vec3& p, const ToleranceProfile& tol) {
  const Vec3 lhs = shifts.shift_g - shifts.shift_f;
  const Vec3 rhs = (alpha_g / lambda) * mul(inv3(g_vielbein, tol), p) +
                   (alpha_f / lambda) * mul(inv3(f_vielbein, tol), p);
  return norm_inf(lhs - rhs);
}

MeanDecomposition build_mean(const Mat3& g_vielbein, const Mat3& f_vielbein,
                             const LorentzFrame& frame, const Vec3& q,
                             double alpha_g, double alpha_f, double phi_g,
                             double phi_f, const ToleranceProfile& tol) {
  MeanDecomposition m;
  const MeanSpatial hs = mean_spatial(g_vielbein, f_vielbein, frame, tol);
  m.h_dd = hs.h;
  m.symmetry_residual = hs.residual;
  m.h_bar_dd = conformal_mean(hs.h, phi_g, phi_f);
  m.q = q;
  const SectorShifts sh =
      sector_shifts(q, alpha_g, alpha_f, frame.lambda, g_vielbein, f_vielbein,
                    frame.p, tol);
  m.shift_g = sh.shift_g;
  m.shift_f = sh.shift_f;
  return m;
}

} // namespace bimdecomp
