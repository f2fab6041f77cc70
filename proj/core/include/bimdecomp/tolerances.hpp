#pragma once

namespace bimdecomp {

// Every tolerance used by the engine, threaded through all kernels so a
// run can tighten or relax them from one place (config `options.tol.*`).
// All values are relative unless noted.
struct ToleranceProfile {
  double spd_rel = 1e-12;         // eigenvalue positivity screen, scaled by trace
  double k_branch_rel = 1e-12;    // closed-form sqrt: isotropic branch on k vs max(A1^2, 1)
  double degenerate_den = 1e-14;  // closed-form sqrt: |S1*S2 - S3| screen
  double det_rel = 1e-14;         // invertibility screen vs ||m||^3
  double orth = 1e-10;            // orthogonality and det(R) checks
  double sym = 1e-10;             // mean-metric symmetrization residual
  double lowered_a = 1e-10;       // symmetry of the lowered conformal curvature
  double mean_property = 1e-9;    // geometric-mean spatial diagnostic
  double shift_identity = 1e-12;  // sector-shift relation residual
  double clamp_slack = 1e-12;     // arccos/arcsin boundary slack
};

} // namespace bimdecomp
