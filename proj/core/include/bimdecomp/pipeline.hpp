#pragma once

#include <string>
#include <vector>

#include "bimdecomp/config.hpp"
#include "bimdecomp/geometry.hpp"
#include "bimdecomp/grid.hpp"

namespace bimdecomp {

// One line of the validation report.  Entries with a threshold are hard
// checks (the run aborts when they trip pointwise); informational entries
// are diagnostics whose size depends on the ansatz or the resolution.
struct ValidationEntry {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool informational = false;
  bool pass = true;
};

// Per-sector output fields over the grid.
struct SectorResult {
  GridField phi, lapse, kbar;
  GridField vielbein_conf;  // conformal vielbein, Lorentz x spatial
  GridField vielbein;       // physical vielbein
  GridField gamma_dd, gamma_uu;
  GridField gammac_dd, gammac_uu;  // conformal metric and inverse
  GridField a_ud;                  // conformal curvature, mixed
  GridField a_dd;                  // lowered with the conformal metric
  GridField a_trace, k_trace;
  GridField k_dd;  // physical extrinsic curvature
  GridField shift_u;
  GridField lam_u;  // conformal connection ansatz
  GridField adm_g00;
  GridField adm_g0i;

  bool has_geometry = false;
  GridField gammac_christoffel;  // udd
  GridField delta_gammac;        // udd
  GridField lamc_u;              // computed conformal connection
  GridField lam_residual_u;      // ansatz - computed
  GridField riccic_dd;           // background-covariant conformal Ricci
};

// Geometric-mean sector fields.
struct MeanResult {
  GridField gamma_dd;   // mean spatial metric
  GridField gammac_dd;  // conformal mean
  GridField shift_u;    // mean shift

  bool has_geometry = false;
  GridField gammac_christoffel;
  GridField delta_gammac;
  GridField lamc_u;
  GridField riccic_dd;
};

// Lorentz-frame fields.
struct FrameResult {
  GridField p_u;
  GridField lambda;
  GridField boost;     // symmetric spatial block
  GridField rotation;  // 9 components
  GridField L;         // 16 components, row-major 4x4
};

struct DecompositionResult {
  AnsatzConfig config;
  GridSpec grid;
  FrameResult frame;
  SectorResult g, f;
  MeanResult h;
  std::vector<ValidationEntry> report;
};

// Runs the whole decomposition: evaluates the ansatz over the grid, builds
// frame, mean and sector quantities per point, then the chart geometry for
// each sector requested in compute_geometry_of.  Aborts on the first
// failed internal check (CheckFailure names the check and the grid point).
DecompositionResult run_decomposition(const AnsatzConfig& cfg);

// Field registry: every exported field of a result in deterministic
// order, with its storage.
struct NamedField {
  std::string name;
  const GridField* field;
};
std::vector<NamedField> named_fields(const DecompositionResult& r);

struct NamedFieldMut {
  std::string name;
  GridField* field;
};
std::vector<NamedFieldMut> named_fields_mut(DecompositionResult& r);

} // namespace bimdecomp
