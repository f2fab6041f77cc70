#pragma once

#include "bimdecomp/mat3.hpp"
#include "bimdecomp/tolerances.hpp"

namespace bimdecomp {

// Primary variables plus auxiliary gauge inputs, evaluated at one grid
// point.  Vielbeins are the conformal ones, upper triangular with a
// strictly positive diagonal; the mixed conformal curvature components
// and the conformal connection vectors are the evolved ansatz fields.
struct PointAnsatz {
  double phi_g{0.0}, phi_f{0.0};
  Mat3 g_vielbein_conf;  // gEBS
  Mat3 f_vielbein_conf;  // fEBS
  Vec3 p;                // separation parameter
  Vec3 q;                // mean shift
  Mat3 g_a_ud;           // conformal curvature, mixed components
  Mat3 f_a_ud;
  Vec3 g_lambda;         // conformal connection ansatz
  Vec3 f_lambda;
  double alpha_g{1.0}, alpha_f{1.0};
  double kbar_g{0.0}, kbar_f{0.0};
};

// Everything derived for one metric sector at one point.
struct SectorDecomposition {
  Mat3 vielbein;       // physical, e^{2 phi} * conformal
  SymMat3 gamma;       // spatial metric, E^T E
  SymMat3 gamma_inv;
  SymMat3 gamma_bar;   // conformal metric, e^{-4 phi} gamma
  SymMat3 gamma_bar_inv;
  SymMat3 a_bar_dd;    // lowered conformal curvature
  double a_trace{0.0}; // mixed-component trace
  SymMat3 k_dd;        // physical extrinsic curvature
  double k_trace{0.0};
  Vec3 shift;
  double lapse{1.0};
};

struct ADMBlocks {
  double g00{-1.0};
  Vec3 g0i;
  SymMat3 gij;
};

// E = e^{2 phi} * conformal vielbein; preserves the triangular structure.
Mat3 physical_vielbein(const Mat3& vielbein_conf, double phi);

// gamma = E^T E (spatial Minkowski block is the identity).
// Throws SingularVielbein when E is not invertible.
SymMat3 metric_from_vielbein(const Mat3& vielbein, const ToleranceProfile& tol = {});

// gamma_bar = e^{-4 phi} gamma.
SymMat3 conformal_metric(const SymMat3& gamma, double phi);

// Rebuilds the physical extrinsic curvature from the conformal ansatz:
//   A_bar_ij = gamma_bar_ik A^k_j        (must come out symmetric)
//   K_trace  = tr A + Kbar
//   K_ij     = e^{4 phi} A_bar_ij + (1/3) gamma_ij Kbar
// Throws InvalidAnsatz when the lowered curvature is asymmetric beyond
// tol.lowered_a (relative).
struct CurvatureReconstruction {
  SymMat3 a_bar_dd;
  double a_trace;
  SymMat3 k_dd;
  double k_trace;
};
CurvatureReconstruction reconstruct_curvature(const Mat3& a_ud, double kbar,
                                              const SymMat3& gamma,
                                              const SymMat3& gamma_bar,
                                              double phi,
                                              const ToleranceProfile& tol = {});

// ADM 4-metric blocks: g00 = -lapse^2 + shift.gamma.shift, g0i = gamma shift.
ADMBlocks adm_blocks(double lapse, const Vec3& shift, const SymMat3& gamma);

// Full per-sector assembly at one point (shift supplied by the mean module).
SectorDecomposition build_sector(const Mat3& vielbein_conf, double phi,
                                 const Mat3& a_ud, double kbar, double lapse,
                                 const Vec3& shift, const ToleranceProfile& tol = {});

} // namespace bimdecomp
