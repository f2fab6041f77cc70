#include "bimdecomp/geometry.hpp"

#include <cmath>

#include "bimdecomp/errors.hpp"

namespace bimdecomp {

namespace {

// Loops run over the full stored grid so derived fields have valid ghost
// values for the next derivative pass.
template <typename F>
void for_each_stored(const GridSpec& spec, F&& body) {
  for (int i = 0; i < spec.stored[0]; ++i)
    for (int j = 0; j < spec.stored[1]; ++j)
      for (int k = 0; k < spec.stored[2]; ++k) body(i, j, k);
}

SymMat3 sym_inverse_checked(const SymMat3& g, const char* who,
                            const ToleranceProfile& tol) {
  const double m2 = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
  if (g(0, 0) <= 0.0 || m2 <= 0.0 || det3(g) <= 0.0)
    throw NotPositiveDefinite(std::string(who) + ": metric not positive definite");
  return inv3(g, tol);
}

} // namespace

std::array<Expr, 6> flat_metric_exprs(const Chart& chart) {
  std::array<Expr, 6> e;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      e[static_cast<std::size_t>(SymMat3::index(i, j))] =
          parse(i == j ? "1" : "0", chart);
  return e;
}

BackgroundGeometry build_background(const GridSpec& spec,
                                    const std::array<Expr, 6>& metric_expr,
                                    std::span<const double> param_values,
                                    const ToleranceProfile& tol) {
  BackgroundGeometry bg;
  bg.metric_expr = metric_expr;
  bg.metric = GridField::sym_rank2(spec, "dd");
  bg.metric_inv = GridField::sym_rank2(spec, "uu");

  bool all_const = true;
  for (const Expr& e : metric_expr)
    if (e->kind != NodeKind::Constant) all_const = false;
  if (all_const) {
    bg.trivial_connection = true;
    SymMat3 g;
    for (int c = 0; c < 6; ++c)
      g.s[static_cast<std::size_t>(c)] =
          metric_expr[static_cast<std::size_t>(c)]->constant;
    const SymMat3 ginv = sym_inverse_checked(g, "build_background", tol);
    for_each_stored(spec, [&](int i, int j, int k) {
      set_sym(bg.metric, spec, i, j, k, g);
      set_sym(bg.metric_inv, spec, i, j, k, ginv);
    });
    return bg;
  }

  bg.christoffel = GridField::rank3(spec, "udd");
  bg.riemann = GridField::rank4(spec, "dddu");

  // First and second analytic derivatives of the six components.
  std::array<Expr, 6> d1[3];
  std::array<Expr, 6> d2[3][3];
  for (int a = 0; a < 3; ++a) {
    for (int c = 0; c < 6; ++c)
      d1[a][static_cast<std::size_t>(c)] =
          diff(metric_expr[static_cast<std::size_t>(c)], a);
    for (int b = a; b < 3; ++b)
      for (int c = 0; c < 6; ++c)
        d2[a][b][static_cast<std::size_t>(c)] =
            diff(d1[a][static_cast<std::size_t>(c)], b);
  }

  for_each_stored(spec, [&](int i, int j, int k) {
    const auto pt = spec.point(i, j, k);
    SymMat3 g, dg[3], ddg[3][3];
    for (int c = 0; c < 6; ++c) {
      g.s[static_cast<std::size_t>(c)] =
          eval(metric_expr[static_cast<std::size_t>(c)], pt, param_values, tol);
      for (int a = 0; a < 3; ++a) {
        dg[a].s[static_cast<std::size_t>(c)] =
            eval(d1[a][static_cast<std::size_t>(c)], pt, param_values, tol);
        for (int b = a; b < 3; ++b)
          ddg[a][b].s[static_cast<std::size_t>(c)] =
              eval(d2[a][b][static_cast<std::size_t>(c)], pt, param_values, tol);
      }
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < a; ++b) ddg[a][b] = ddg[b][a];

    const SymMat3 ginv = sym_inverse_checked(g, "build_background", tol);
    set_sym(bg.metric, spec, i, j, k, g);
    set_sym(bg.metric_inv, spec, i, j, k, ginv);

    // Christoffels and their analytic derivatives.
    double gamma[3][3][3];
    for (int kk = 0; kk < 3; ++kk)
      for (int ii = 0; ii < 3; ++ii)
        for (int jj = ii; jj < 3; ++jj) {
          double s = 0.0;
          for (int l = 0; l < 3; ++l)
            s += 0.5 * ginv(kk, l) *
                 (dg[ii](l, jj) + dg[jj](ii, l) - dg[l](ii, jj));
          gamma[kk][ii][jj] = s;
          gamma[kk][jj][ii] = s;
          bg.christoffel.at(spec, i, j, k, comp3(kk, ii, jj)) = s;
          bg.christoffel.at(spec, i, j, k, comp3(kk, jj, ii)) = s;
        }

    // d_q ginv^{kl} = -ginv^{km} ginv^{ln} d_q g_mn
    double dginv[3][3][3];
    for (int q = 0; q < 3; ++q)
      for (int kk = 0; kk < 3; ++kk)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n)
              s -= ginv(kk, m) * ginv(l, n) * dg[q](m, n);
          dginv[q][kk][l] = s;
        }

    double dgamma[3][3][3][3];  // d_q Gamma^k_ij
    for (int q = 0; q < 3; ++q)
      for (int kk = 0; kk < 3; ++kk)
        for (int ii = 0; ii < 3; ++ii)
          for (int jj = 0; jj < 3; ++jj) {
            double s = 0.0;
            for (int l = 0; l < 3; ++l) {
              s += 0.5 * dginv[q][kk][l] *
                   (dg[ii](l, jj) + dg[jj](ii, l) - dg[l](ii, jj));
              s += 0.5 * ginv(kk, l) *
                   (ddg[q][ii](l, jj) + ddg[q][jj](ii, l) - ddg[q][l](ii, jj));
            }
            dgamma[q][kk][ii][jj] = s;
          }

    for (int jj = 0; jj < 3; ++jj)
      for (int kk = 0; kk < 3; ++kk)
        for (int l = 0; l < 3; ++l)
          for (int m = 0; m < 3; ++m) {
            double s = dgamma[kk][m][jj][l] - dgamma[jj][m][kk][l];
            for (int p = 0; p < 3; ++p)
              s += gamma[p][jj][l] * gamma[m][kk][p] -
                   gamma[p][kk][l] * gamma[m][jj][p];
            bg.riemann.at(spec, i, j, k, comp4(jj, kk, l, m)) = s;
          }
  });
  return bg;
}

GridField christoffel(const GridSpec& spec, const GridField& metric,
                      const GridField& metric_inv,
                      const std::array<GridField, 3>& dmetric) {
  GridField out = GridField::rank3(spec, "udd");
  for_each_stored(spec, [&](int i, int j, int k) {
    const SymMat3 g = get_sym(metric, spec, i, j, k);
    const double m2 = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
    if (g(0, 0) <= 0.0 || m2 <= 0.0 || det3(g) <= 0.0)
      throw NotPositiveDefinite("christoffel: metric not positive definite");
    const SymMat3 ginv = get_sym(metric_inv, spec, i, j, k);
    SymMat3 dg[3];
    for (int a = 0; a < 3; ++a)
      dg[a] = get_sym(dmetric[static_cast<std::size_t>(a)], spec, i, j, k);
    for (int kk = 0; kk < 3; ++kk)
      for (int ii = 0; ii < 3; ++ii)
        for (int jj = ii; jj < 3; ++jj) {
          double s = 0.0;
          for (int l = 0; l < 3; ++l)
            s += 0.5 * ginv(kk, l) *
                 (dg[ii](l, jj) + dg[jj](ii, l) - dg[l](ii, jj));
          out.at(spec, i, j, k, comp3(kk, ii, jj)) = s;
          out.at(spec, i, j, k, comp3(kk, jj, ii)) = s;
        }
  });
  return out;
}

ConnectionField conformal_connection(const GridSpec& spec,
                                     const GridField& gamma_bar_inv,
                                     const GridField& gamma_bar_christoffel,
                                     const BackgroundGeometry& background) {
  ConnectionField conn;
  conn.gamma_bar_christoffel = gamma_bar_christoffel;
  conn.delta_gamma = GridField::rank3(spec, "udd");
  conn.lambda_computed = GridField::vector(spec, "u");

  for_each_stored(spec, [&](int i, int j, int k) {
    for (int c = 0; c < 27; ++c)
      conn.delta_gamma.at(spec, i, j, k, c) =
          gamma_bar_christoffel.at(spec, i, j, k, c) -
          (background.trivial_connection
               ? 0.0
               : background.christoffel.at(spec, i, j, k, c));
    const SymMat3 ginv = get_sym(gamma_bar_inv, spec, i, j, k);
    for (int ii = 0; ii < 3; ++ii) {
      double s = 0.0;
      for (int jj = 0; jj < 3; ++jj)
        for (int kk = 0; kk < 3; ++kk)
          s += ginv(jj, kk) * conn.delta_gamma.at(spec, i, j, k, comp3(ii, jj, kk));
      conn.lambda_computed.at(spec, i, j, k, ii) = s;
    }
  });
  return conn;
}

GridField conformal_ricci(const GridSpec& spec, const GridField& gamma_bar,
                          const GridField& gamma_bar_inv,
                          const ConnectionField& conn,
                          const GridField& lambda_ansatz,
                          const BackgroundGeometry& background) {
  GridField ricci = GridField::sym_rank2(spec, "dd");

  // T_l(ij) = Dback_l gbar_ij, stored as three symmetric fields.
  std::array<GridField, 3> t_fields = {GridField::sym_rank2(spec, "dd"),
                                       GridField::sym_rank2(spec, "dd"),
                                       GridField::sym_rank2(spec, "dd")};
  {
    std::array<GridField, 3> dgbar = {fd_derivative(spec, gamma_bar, 0, 1),
                                      fd_derivative(spec, gamma_bar, 1, 1),
                                      fd_derivative(spec, gamma_bar, 2, 1)};
    for_each_stored(spec, [&](int i, int j, int k) {
      const SymMat3 g = get_sym(gamma_bar, spec, i, j, k);
      for (int l = 0; l < 3; ++l) {
        const SymMat3 dg = get_sym(dgbar[static_cast<std::size_t>(l)], spec, i, j, k);
        SymMat3 t;
        for (int ii = 0; ii < 3; ++ii)
          for (int jj = ii; jj < 3; ++jj) {
            double s = dg(ii, jj);
            if (!background.trivial_connection)
              for (int m = 0; m < 3; ++m) {
                s -= background.christoffel.at(spec, i, j, k, comp3(m, l, ii)) * g(m, jj);
                s -= background.christoffel.at(spec, i, j, k, comp3(m, l, jj)) * g(ii, m);
              }
            t(ii, jj) = s;
          }
        set_sym(t_fields[static_cast<std::size_t>(l)], spec, i, j, k, t);
      }
    });
  }

  // term1 = -1/2 gbar^{kl} Dback_k T_l(ij), accumulated per k.
  for (int kk = 0; kk < 3; ++kk) {
    std::array<GridField, 3> dt = {
        fd_derivative(spec, t_fields[0], kk, 1),
        fd_derivative(spec, t_fields[1], kk, 1),
        fd_derivative(spec, t_fields[2], kk, 1)};
    for_each_stored(spec, [&](int i, int j, int k) {
      const SymMat3 ginv = get_sym(gamma_bar_inv, spec, i, j, k);
      for (int l = 0; l < 3; ++l) {
        const double w = -0.5 * ginv(kk, l);
        if (w == 0.0) continue;
        const SymMat3 dtl = get_sym(dt[static_cast<std::size_t>(l)], spec, i, j, k);
        for (int ii = 0; ii < 3; ++ii)
          for (int jj = ii; jj < 3; ++jj) {
            double s = dtl(ii, jj);
            if (!background.trivial_connection)
              for (int m = 0; m < 3; ++m) {
                s -= background.christoffel.at(spec, i, j, k, comp3(m, kk, l)) *
                     t_fields[static_cast<std::size_t>(m)].at(
                         spec, i, j, k, SymMat3::index(ii, jj));
                s -= background.christoffel.at(spec, i, j, k, comp3(m, kk, ii)) *
                     t_fields[static_cast<std::size_t>(l)].at(
                         spec, i, j, k, SymMat3::index(m, jj));
                s -= background.christoffel.at(spec, i, j, k, comp3(m, kk, jj)) *
                     t_fields[static_cast<std::size_t>(l)].at(
                         spec, i, j, k, SymMat3::index(ii, m));
              }
            ricci.at(spec, i, j, k, SymMat3::index(ii, jj)) += w * s;
          }
      }
    });
  }

  // term2 = gbar_k(i Dback_j) Lambda^k with the ansatz Lambda.
  {
    std::array<GridField, 3> dlam = {fd_derivative(spec, lambda_ansatz, 0, 1),
                                     fd_derivative(spec, lambda_ansatz, 1, 1),
                                     fd_derivative(spec, lambda_ansatz, 2, 1)};
    for_each_stored(spec, [&](int i, int j, int k) {
      const SymMat3 g = get_sym(gamma_bar, spec, i, j, k);
      const Vec3 lam = get_vec(lambda_ansatz, spec, i, j, k);
      double v[3][3];  // v[k][j] = Dback_j Lambda^k
      for (int kk = 0; kk < 3; ++kk)
        for (int jj = 0; jj < 3; ++jj) {
          double s = dlam[static_cast<std::size_t>(jj)].at(spec, i, j, k, kk);
          if (!background.trivial_connection)
            for (int m = 0; m < 3; ++m)
              s += background.christoffel.at(spec, i, j, k, comp3(kk, jj, m)) * lam[m];
          v[kk][jj] = s;
        }
      for (int ii = 0; ii < 3; ++ii)
        for (int jj = ii; jj < 3; ++jj) {
          double s = 0.0;
          for (int kk = 0; kk < 3; ++kk)
            s += 0.5 * (g(kk, ii) * v[kk][jj] + g(kk, jj) * v[kk][ii]);
          ricci.at(spec, i, j, k, SymMat3::index(ii, jj)) += s;
        }
    });
  }

  // term3 (background Riemann), term4 and term5 (DeltaGamma quadratics).
  for_each_stored(spec, [&](int i, int j, int k) {
    const SymMat3 g = get_sym(gamma_bar, spec, i, j, k);
    const SymMat3 ginv = get_sym(gamma_bar_inv, spec, i, j, k);

    double dgam[3][3][3];
    for (int c = 0; c < 27; ++c)
      dgam[c / 9][(c / 3) % 3][c % 3] = conn.delta_gamma.at(spec, i, j, k, c);

    // all-lower DeltaGamma, first slot lowered with gbar
    double dglow[3][3][3];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          double s = 0.0;
          for (int m = 0; m < 3; ++m) s += g(a, m) * dgam[m][b][c];
          dglow[a][b][c] = s;
        }

    Vec3 lam_c = get_vec(conn.lambda_computed, spec, i, j, k);

    for (int ii = 0; ii < 3; ++ii)
      for (int jj = ii; jj < 3; ++jj) {
        double s = 0.0;

        // -gbar^{kl} gbar_m(i Rback_j)kl^m
        if (!background.trivial_connection)
          for (int kk = 0; kk < 3; ++kk)
            for (int l = 0; l < 3; ++l) {
              if (ginv(kk, l) == 0.0) continue;
              double rm = 0.0;
              for (int m = 0; m < 3; ++m)
                rm += 0.5 * (g(m, ii) *
                                 background.riemann.at(spec, i, j, k,
                                                       comp4(jj, kk, l, m)) +
                             g(m, jj) *
                                 background.riemann.at(spec, i, j, k,
                                                       comp4(ii, kk, l, m)));
              s -= ginv(kk, l) * rm;
            }

        // gbar^{lm} DG^k_lm DG_(ij)k = Lambda_c^k DG_(ij)k
        for (int kk = 0; kk < 3; ++kk)
          s += lam_c[kk] * 0.5 * (dglow[ii][jj][kk] + dglow[jj][ii][kk]);

        // gbar^{kl} (2 DG^m_k(i DG_j)ml + DG^m_ik DG_mjl)
        for (int kk = 0; kk < 3; ++kk)
          for (int l = 0; l < 3; ++l) {
            if (ginv(kk, l) == 0.0) continue;
            double q = 0.0;
            for (int m = 0; m < 3; ++m) {
              q += dgam[m][kk][ii] * dglow[jj][m][l] +
                   dgam[m][kk][jj] * dglow[ii][m][l];
              q += dgam[m][ii][kk] * dglow[m][jj][l];
            }
            s += ginv(kk, l) * q;
          }

        ricci.at(spec, i, j, k, SymMat3::index(ii, jj)) += s;
      }
  });

  return ricci;
}

GridField ricci_textbook(const GridSpec& spec, const GridField& christoffel_field) {
  GridField ricci = GridField::sym_rank2(spec, "dd");

  // d_k Gamma^k_ij accumulated per k; d_i of the contracted C_j = Gamma^k_kj.
  GridField contracted = GridField::vector(spec, "d");
  for_each_stored(spec, [&](int i, int j, int k) {
    for (int jj = 0; jj < 3; ++jj) {
      double s = 0.0;
      for (int kk = 0; kk < 3; ++kk)
        s += christoffel_field.at(spec, i, j, k, comp3(kk, kk, jj));
      contracted.at(spec, i, j, k, jj) = s;
    }
  });

  GridField full_ricci = GridField::rank2(spec, "dd");
  for (int kk = 0; kk < 3; ++kk) {
    const GridField dgam = fd_derivative(spec, christoffel_field, kk, 1);
    for_each_stored(spec, [&](int i, int j, int k) {
      for (int ii = 0; ii < 3; ++ii)
        for (int jj = 0; jj < 3; ++jj)
          full_ricci.at(spec, i, j, k, ii * 3 + jj) +=
              dgam.at(spec, i, j, k, comp3(kk, ii, jj));
    });
  }
  {
    std::array<GridField, 3> dcon = {fd_derivative(spec, contracted, 0, 1),
                                     fd_derivative(spec, contracted, 1, 1),
                                     fd_derivative(spec, contracted, 2, 1)};
    for_each_stored(spec, [&](int i, int j, int k) {
      for (int ii = 0; ii < 3; ++ii)
        for (int jj = 0; jj < 3; ++jj)
          full_ricci.at(spec, i, j, k, ii * 3 + jj) -=
              dcon[static_cast<std::size_t>(ii)].at(spec, i, j, k, jj);
    });
  }
  for_each_stored(spec, [&](int i, int j, int k) {
    double gam[3][3][3];
    double full[9];
    for (int c = 0; c < 27; ++c)
      gam[c / 9][(c / 3) % 3][c % 3] = christoffel_field.at(spec, i, j, k, c);
    for (int ii = 0; ii < 3; ++ii)
      for (int jj = 0; jj < 3; ++jj) {
        double s = full_ricci.at(spec, i, j, k, ii * 3 + jj);
        for (int kk = 0; kk < 3; ++kk)
          for (int l = 0; l < 3; ++l)
            s += gam[kk][kk][l] * gam[l][ii][jj] - gam[kk][ii][l] * gam[l][kk][jj];
        full[ii * 3 + jj] = s;
      }
    for (int ii = 0; ii < 3; ++ii)
      for (int jj = ii; jj < 3; ++jj)
        ricci.at(spec, i, j, k, SymMat3::index(ii, jj)) =
            0.5 * (full[ii * 3 + jj] + full[jj * 3 + ii]);
  });
  return ricci;
}

GridField lambda_residual(const GridSpec& spec, const GridField& lambda_ansatz,
                          const GridField& lambda_computed) {
  GridField out = GridField::vector(spec, "u");
  for_each_stored(spec, [&](int i, int j, int k) {
    for (int c = 0; c < 3; ++c)
      out.at(spec, i, j, k, c) = lambda_ansatz.at(spec, i, j, k, c) -
                                 lambda_computed.at(spec, i, j, k, c);
  });
  return out;
}

} // namespace bimdecomp
