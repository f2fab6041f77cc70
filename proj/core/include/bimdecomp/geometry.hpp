#pragma once

#include <array>
#include <span>

#include "bimdecomp/grid.hpp"

namespace bimdecomp {

// A time-independent background geometry given by six metric component
// expressions.  Christoffels and the Riemann tensor are built by analytic
// differentiation of the expressions, so the background carries no
// discretization error.  Riemann follows R_{jkl}^m = d_k G^m_jl - d_j G^m_kl
// + G^p_jl G^m_kp - G^p_kl G^m_jp (antisymmetric in the first pair).
struct BackgroundGeometry {
  std::array<Expr, 6> metric_expr;  // order 11,12,13,22,23,33
  GridField metric;       // dd
  GridField metric_inv;   // uu
  GridField christoffel;  // udd, comp3(k,i,j)
  GridField riemann;      // dddu, comp4(j,k,l,m)
  // Constant metric components: the connection and curvature vanish
  // identically and their fields stay empty.
  bool trivial_connection = false;
};

// Evaluates and differentiates the background metric over the grid.
// Throws NotPositiveDefinite when the metric fails SPD at some point.
BackgroundGeometry build_background(const GridSpec& spec,
                                    const std::array<Expr, 6>& metric_expr,
                                    std::span<const double> param_values = {},
                                    const ToleranceProfile& tol = {});

// Convenience: the flat metric written as constant expressions delta_ij.
std::array<Expr, 6> flat_metric_exprs(const Chart& chart);

// Levi-Civita connection of `metric`:
//   G^k_ij = (1/2) g^{kl} (d_i g_lj + d_j g_il - d_l g_ij),
// with the three derivative fields supplied by the caller (finite
// difference or analytic).  Result is symmetric in (i,j) by construction.
GridField christoffel(const GridSpec& spec, const GridField& metric,
                      const GridField& metric_inv,
                      const std::array<GridField, 3>& dmetric);

// Connection data of the conformal metric relative to the background:
// DeltaGamma = Gamma_bar - Gamma_back and Lambda^i = gbar^{jk} DeltaGamma^i_jk.
struct ConnectionField {
  GridField gamma_bar_christoffel;  // udd
  GridField delta_gamma;            // udd
  GridField lambda_computed;        // u
};
ConnectionField conformal_connection(const GridSpec& spec,
                                     const GridField& gamma_bar_inv,
                                     const GridField& gamma_bar_christoffel,
                                     const BackgroundGeometry& background);

// Conformal Ricci tensor in the background-covariant form used by the
// evolution system:
//   R_ij = -1/2 gbar^{kl} Dback_k Dback_l gbar_ij
//          + gbar_k(i Dback_j) Lambda^k
//          - gbar^{kl} gbar_m(i Rback_j)kl^m
//          + gbar^{lm} DG^k_lm DG_(ij)k
//          + gbar^{kl} (2 DG^m_k(i DG_j)ml + DG^m_ik DG_mjl)
// where DG = delta_gamma, the all-lower DG_abc lowers the first slot with
// gbar, and A_(ij) = (A_ij + A_ji)/2.  Lambda is the independently
// supplied ansatz field; with Lambda = Lambda_computed and any background
// this reproduces the Ricci tensor of gbar.  All derivatives inside are
// 4th-order finite differences.
GridField conformal_ricci(const GridSpec& spec, const GridField& gamma_bar,
                          const GridField& gamma_bar_inv,
                          const ConnectionField& conn,
                          const GridField& lambda_ansatz,
                          const BackgroundGeometry& background);

// Independent check route: R_ij = d_k G^k_ij - d_i G^k_kj
// + G^k_kl G^l_ij - G^k_il G^l_kj, derivatives of the supplied Christoffel
// field by finite differences, output symmetrized.
GridField ricci_textbook(const GridSpec& spec, const GridField& christoffel_field);

// Pointwise lambda_ansatz - lambda_computed.
GridField lambda_residual(const GridSpec& spec, const GridField& lambda_ansatz,
                          const GridField& lambda_computed);

} // namespace bimdecomp
