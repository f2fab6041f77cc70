#pragma once

#include "bimdecomp/lorentz_frame.hpp"
#include "bimdecomp/mat3.hpp"
#include "bimdecomp/tolerances.hpp"

namespace bimdecomp {

// Geometric-mean sector at one point.
struct MeanDecomposition {
  SymMat3 h_dd;                    // mean spatial metric
  SymMat3 h_bar_dd;                // conformal mean, e^{-2(phi_g+phi_f)} h
  Vec3 shift_g;
  Vec3 shift_f;
  Vec3 q;                          // mean shift
  double symmetry_residual = 0.0;  // scaled max |raw - raw^T| before symmetrization
};

// Mean spatial metric h = gE^T B R fE.  The construction guarantees the
// raw product is symmetric; the scaled residual must stay below tol.sym
// or the frame upstream is inconsistent (SymmetrizationFailed).  The
// returned metric is the exact symmetric part and must be SPD.
struct MeanSpatial {
  SymMat3 h;
  double residual;
};
MeanSpatial mean_spatial(const Mat3& g_vielbein, const Mat3& f_vielbein,
                         const LorentzFrame& frame, const ToleranceProfile& tol = {});

// Sector shifts from the mean shift:
//   shift_g = q + (alpha_g/lambda) gE^{-1} p
//   shift_f = q - (alpha_f/lambda) fE^{-1} p
struct SectorShifts {
  Vec3 shift_g;
  Vec3 shift_f;
};
SectorShifts sector_shifts(const Vec3& q, double alpha_g, double alpha_f,
                           double lambda, const Mat3& g_vielbein,
                           const Mat3& f_vielbein, const Vec3& p,
                           const ToleranceProfile& tol = {});

// h_bar = e^{-2(phi_g + phi_f)} h.
SymMat3 conformal_mean(const SymMat3& h, double phi_g, double phi_f);

// Scaled residual of the spatial block of the geometric-mean property.
// The 4-metric identity h g^{-1} h = f reduces on the spatial block to
//   h gamma_g^{-1} h - u u^T = gamma_f,   u = (1/lambda) h gE^{-1} p,
// the u u^T term carrying the boost contribution (it vanishes at p = 0).
// Returns ||lhs - gamma_f||_inf / (1 + ||gamma_f||_inf); pure diagnostic.
double mean_property_residual(const SymMat3& gamma_g, const SymMat3& h,
                              const SymMat3& gamma_f, const Mat3& g_vielbein,
                              const Vec3& p, double lambda,
                              const ToleranceProfile& tol = {});

// Residual of the shift relation, max over components of
// (shift_g - shift_f) - [(alpha_g/lambda) gE^{-1} p + (alpha_f/lambda) fE^{-1} p].
double shift_identity_residual(const SectorShifts& shifts, double alpha_g,
                               double alpha_f, double lambda,
                               const Mat3& g_vielbein, const Mat3& f_vielbein,
                               const Vec3& p, const ToleranceProfile& tol = {});

// Full mean-sector assembly at one point.
MeanDecomposition build_mean(const Mat3& g_vielbein, const Mat3& f_vielbein,
                             const LorentzFrame& frame, const Vec3& q,
                             double alpha_g, double alpha_f, double phi_g,
                             double phi_f, const ToleranceProfile& tol = {});

} // namespace bimdecomp
