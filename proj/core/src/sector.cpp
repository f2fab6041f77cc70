#include "bimdecomp/sector.hpp"

#include <cmath>

#include "bimdecomp/errors.hpp"

namespace bimdecomp {

Mat3 physical_vielbein(const Mat3& vielbein_conf, double phi) {
  return scale(std::exp(2.0 * phi), vielbein_conf);
}

SymMat3 metric_from_vielbein(const Mat3& vielbein, const ToleranceProfile& tol) {
  const double d = det3(vielbein);
  const double n = norm_inf(vielbein);
  if (std::fabs(d) <= tol.det_rel * n * n * n)
    throw SingularVielbein("metric_from_vielbein: vielbein is singular");
  return congruence(vielbein, SymMat3::identity());
}

SymMat3 conformal_metric(const SymMat3& gamma, double phi) {
  return scale(std::exp(-4.0 * phi), gamma);
}

CurvatureReconstruction reconstruct_curvature(const Mat3& a_ud, double kbar,
                                              const SymMat3& gamma,
                                              const SymMat3& gamma_bar,
                                              double phi,
                                              const ToleranceProfile& tol) {
  if (!all_finite(a_ud) || !std::isfinite(kbar))
    throw InvalidInput("reconstruct_curvature: non-finite input");

  // Lower the first index with the conformal metric.
  const Mat3 lowered = mul(gamma_bar, a_ud);
  const double rel = asym_norm(lowered) / (1.0 + norm_inf(lowered));
  if (rel > tol.lowered_a)
    throw InvalidAnsatz(
        "reconstruct_curvature: asymmetric A_bar, lowered curvature has "
        "relative asymmetry above tolerance");

  CurvatureReconstruction out;
  out.a_bar_dd = symmetrize(lowered);
  out.a_trace = trace3(a_ud);
  out.k_trace = out.a_trace + kbar;

  const double e4phi = std::exp(4.0 * phi);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      out.k_dd(i, j) = e4phi * out.a_bar_dd(i, j) + gamma(i, j) * kbar / 3.0;
  return out;
}

ADMBlocks adm_blocks(double lapse, const Vec3& shift, const SymMat3& gamma) {
  ADMBlocks b;
  const Vec3 gs = mul(gamma, shift);
  b.g00 = -lapse * lapse + dot(shift, gs);
  b.g0i = gs;
  b.gij = gamma;
  return b;
}

SectorDecomposition build_sector(const Mat3& vielbein_conf, double phi,
                                 const Mat3& a_ud, double kbar, double lapse,
                                 const Vec3& shift, const ToleranceProfile& tol) {
  SectorDecomposition s;
  s.lapse = lapse;
  s.shift = shift;
  s.vielbein = physical_vielbein(vielbein_conf, phi);
  s.gamma = metric_from_vielbein(s.vielbein, tol);
  s.gamma_inv = inv3(s.gamma, tol);
  s.gamma_bar = conformal_metric(s.gamma, phi);
  s.gamma_bar_inv = scale(std::exp(4.0 * phi), s.gamma_inv);

  const CurvatureReconstruction c =
      reconstruct_curvature(a_ud, kbar, s.gamma, s.gamma_bar, phi, tol);
  s.a_bar_dd = c.a_bar_dd;
  s.a_trace = c.a_trace;
  s.k_dd = c.k_dd;
  s.k_trace = c.k_trace;
  return s;
}

} // namespace bimdecomp
