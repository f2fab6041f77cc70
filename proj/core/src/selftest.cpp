#include "bimdecomp/selftest.hpp"

#include <cmath>

#include "bimdecomp/errors.hpp"
#include "bimdecomp/geometry.hpp"
#include "bimdecomp/grid.hpp"
#include "bimdecomp/lorentz_frame.hpp"
#include "bimdecomp/mean_metric.hpp"
#include "bimdecomp/sector.hpp"

namespace bimdecomp {

Mat3 random_rotation(RandomGen& g) {
  Mat3 m;
  do {
    for (int i = 0; i < 9; ++i) m.m[static_cast<std::size_t>(i)] = g.normal();
  } while (std::fabs(det3(m)) < 1e-3);
  return polar3(m).q;
}

SymMat3 random_spd(RandomGen& g, double cond_max, double scale_min,
                   double scale_max) {
  const double top =
      std::pow(10.0, g.uniform(std::log10(scale_min), std::log10(scale_max)));
  const double cond = std::pow(10.0, g.uniform(0.0, std::log10(cond_max)));
  const double l1 = top, l3 = top / cond;
  const double l2 = std::pow(10.0, g.uniform(std::log10(l3), std::log10(l1)));
  const Mat3 q = random_rotation(g);
  SymMat3 a;
  const double lv[3] = {l1, l2, l3};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      a(i, j) = lv[0] * q(i, 0) * q(j, 0) + lv[1] * q(i, 1) * q(j, 1) +
                lv[2] * q(i, 2) * q(j, 2);
  return a;
}

Mat3 random_invertible(RandomGen& g, double cond_max, double scale_min,
                       double scale_max) {
  const double top =
      std::pow(10.0, g.uniform(std::log10(scale_min), std::log10(scale_max)));
  const double cond = std::pow(10.0, g.uniform(0.0, std::log10(cond_max)));
  const double w[3] = {top, top * std::pow(cond, -g.uniform(0.0, 1.0)), top / cond};
  const Mat3 ql = random_rotation(g), qr = random_rotation(g);
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m(i, j) = w[0] * ql(i, 0) * qr(j, 0) + w[1] * ql(i, 1) * qr(j, 1) +
                w[2] * ql(i, 2) * qr(j, 2);
  return m;
}

Mat3 random_vielbein(RandomGen& g, double cond_cap) {
  // Diagonal spread governs the conditioning; off-diagonal entries stay
  // comparable to the smaller of the two diagonals they couple.  The
  // spread keeps typical conditioning two orders below the cap: frame
  // compositions square it, and the construction accuracy floor is
  // eps * cond of the composed product.
  const double spread_exp = std::min(0.75, std::log10(cond_cap) / 4.0);
  Mat3 e;
  double d[3];
  for (int i = 0; i < 3; ++i)
    d[i] = std::pow(10.0, g.uniform(-spread_exp, spread_exp));
  for (int i = 0; i < 3; ++i) e(i, i) = d[i];
  e(0, 1) = 0.3 * g.normal() * std::min(d[0], d[1]);
  e(0, 2) = 0.3 * g.normal() * std::min(d[0], d[2]);
  e(1, 2) = 0.3 * g.normal() * std::min(d[1], d[2]);
  return e;
}

bool all_passed(const std::vector<SelfTestResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

namespace {

void finish(SelfTestResult& r) { r.pass = r.worst <= r.bound; }

} // namespace

std::vector<SelfTestResult> selftest_mat3(int n, std::uint64_t seed) {
  RandomGen g(seed);
  SelfTestResult sq_eig{"sqrt_eig residual", 0.0, 1e-10, false};
  SelfTestResult sq_closed{"sqrt_closed residual", 0.0, 1e-10, false};
  SelfTestResult sq_agree{"sqrt route agreement", 0.0, 1e-10, false};
  SelfTestResult pol_rec{"polar reconstruction", 0.0, 1e-10, false};
  SelfTestResult pol_orth{"polar orthogonality", 0.0, 1e-10, false};
  SelfTestResult eig_recon{"eig reconstruction", 0.0, 1e-11, false};

  for (int t = 0; t < n; ++t) {
    const SymMat3 a = random_spd(g, 1e6, 1e-2, 1e2);
    const double den = 1.0 + norm_inf(a);
    const SymMat3 se = sqrt_spd_eig(a);
    const SymMat3 sc = sqrt_spd_closed(a);
    sq_eig.worst = std::max(
        sq_eig.worst, norm_inf(sub(mul(se.full(), se.full()), a.full())) / den);
    sq_closed.worst = std::max(
        sq_closed.worst, norm_inf(sub(mul(sc.full(), sc.full()), a.full())) / den);
    sq_agree.worst =
        std::max(sq_agree.worst, norm_inf(sub(se.full(), sc.full())) / den);

    const EigenSym3 eig = eig_sym3(a);
    Mat3 recon = Mat3::zero();
    for (int c = 0; c < 3; ++c)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          recon(i, j) += eig.values[static_cast<std::size_t>(c)] *
                         eig.vectors(i, c) * eig.vectors(j, c);
    eig_recon.worst =
        std::max(eig_recon.worst, norm_inf(sub(recon, a.full())) / den);

    const Mat3 m = random_invertible(g, 1e4, 1e-1, 1e1);
    const Polar3 pq = polar3(m);
    pol_rec.worst = std::max(
        pol_rec.worst, norm_inf(sub(mul(pq.p.full(), pq.q), m)) / norm_inf(m));
    pol_orth.worst = std::max(
        pol_orth.worst,
        norm_inf(sub(mul(transpose(pq.q), pq.q), Mat3::identity())));
  }
  std::vector<SelfTestResult> out{sq_eig, sq_closed, sq_agree, pol_rec, pol_orth,
                                  eig_recon};
  for (auto& r : out) finish(r);
  return out;
}

std::vector<SelfTestResult> selftest_frame(int n, std::uint64_t seed) {
  RandomGen g(seed);
  SelfTestResult orth{"rotation orthogonality", 0.0, 1e-10, false};
  SelfTestResult detr{"rotation determinant", 0.0, 1e-10, false};
  SelfTestResult member{"Lorentz membership", 0.0, 1e-10, false};
  SelfTestResult symres{"symmetrization residual", 0.0, 1e-10, false};
  SelfTestResult meanprop{"mean property", 0.0, 1e-9, false};
  SelfTestResult shiftid{"shift identity", 0.0, 1e-12, false};
  SelfTestResult exch{"exchange symmetry", 0.0, 1e-10, false};
  SelfTestResult agree{"algorithm agreement", 0.0, 1e-9, false};

  for (int t = 0; t < n; ++t) {
    const Mat3 ge = random_vielbein(g, 1e4);
    const Mat3 fe = random_vielbein(g, 1e4);
    Vec3 p{{g.uniform(-1.0, 1.0), g.uniform(-1.0, 1.0), g.uniform(-1.0, 1.0)}};
    const double r = g.uniform(0.0, 3.0) / std::max(1e-12, norm_inf(p));
    p = r * p;

    const LorentzFrame fr = build_frame(p, ge, fe, SqrtAlgorithm::Eigen);
    orth.worst = std::max(
        orth.worst,
        norm_inf(sub(mul(transpose(fr.rotation), fr.rotation), Mat3::identity())));
    detr.worst = std::max(detr.worst, std::fabs(det3(fr.rotation) - 1.0));
    member.worst = std::max(member.worst, lorentz_residual(fr.L));

    const Mat3 r_closed =
        rotation_from_rbar(fr.rbar, SqrtAlgorithm::ClosedForm);
    const Mat3 r_polar = rotation_from_rbar(fr.rbar, SqrtAlgorithm::Polar);
    agree.worst = std::max(agree.worst, norm_inf(sub(r_closed, fr.rotation)));
    agree.worst = std::max(agree.worst, norm_inf(sub(r_polar, fr.rotation)));

    const MeanSpatial mh = mean_spatial(ge, fe, fr);
    symres.worst = std::max(symres.worst, mh.residual);

    const SymMat3 gamma_g = congruence(ge, SymMat3::identity());
    const SymMat3 gamma_f = congruence(fe, SymMat3::identity());
    meanprop.worst = std::max(
        meanprop.worst,
        mean_property_residual(gamma_g, mh.h, gamma_f, ge, p, fr.lambda));

    const double ag = g.uniform(0.1, 2.0), af = g.uniform(0.1, 2.0);
    const Vec3 q{{g.normal(), g.normal(), g.normal()}};
    const SectorShifts sh = sector_shifts(q, ag, af, fr.lambda, ge, fe, p);
    shiftid.worst = std::max(
        shiftid.worst, shift_identity_residual(sh, ag, af, fr.lambda, ge, fe, p));

    // g <-> f with p -> -R^T p (the inverse transformation's boost
    // parameter) gives the same mean metric.
    const Vec3 prot = mul(transpose(fr.rotation), p);
    const LorentzFrame fr_sw = build_frame(
        Vec3{{-prot[0], -prot[1], -prot[2]}}, fe, ge, SqrtAlgorithm::Eigen);
    const MeanSpatial mh_sw = mean_spatial(fe, ge, fr_sw);
    exch.worst = std::max(exch.worst,
                          norm_inf(sub(mh.h.full(), mh_sw.h.full())) /
                              (1.0 + norm_inf(mh.h)));
  }
  std::vector<SelfTestResult> out{orth, detr, member, symres,
                                  meanprop, shiftid, exch, agree};
  for (auto& r : out) finish(r);
  return out;
}

std::vector<SelfTestResult> selftest_geometry() {
  // Conformally flat metric on a small Cartesian grid against the closed
  // forms for the connection contraction and the Ricci tensor.
  Chart chart{"cartesian", {"x", "y", "z"}, {-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0},
              {false, false, false}};
  const GridSpec spec = GridSpec::create(chart, {17, 17, 17}, 2);

  const Expr psi = parse("0.1*(x^2 + y^2 + z^2)", chart);
  GridField gbar = GridField::sym_rank2(spec, "dd");
  GridField gbar_inv = GridField::sym_rank2(spec, "uu");
  for (int i = 0; i < spec.stored[0]; ++i)
    for (int j = 0; j < spec.stored[1]; ++j)
      for (int k = 0; k < spec.stored[2]; ++k) {
        const double w = std::exp(4.0 * eval(psi, spec.point(i, j, k)));
        SymMat3 m = SymMat3::identity();
        set_sym(gbar, spec, i, j, k, scale(w, m));
        set_sym(gbar_inv, spec, i, j, k, scale(1.0 / w, m));
      }

  const std::array<GridField, 3> dgbar = {fd_derivative(spec, gbar, 0, 1),
                                          fd_derivative(spec, gbar, 1, 1),
                                          fd_derivative(spec, gbar, 2, 1)};
  const BackgroundGeometry bg = build_background(spec, flat_metric_exprs(chart));
  const GridField gamma = christoffel(spec, gbar, gbar_inv, dgbar);
  const ConnectionField conn = conformal_connection(spec, gbar_inv, gamma, bg);
  const GridField ricci =
      conformal_ricci(spec, gbar, gbar_inv, conn, conn.lambda_computed, bg);

  // Closed forms: Lambda^i = -2 e^{-4 psi} d_i psi and the conformally
  // flat Ricci tensor with omega = 2 psi.  Bounds sized to the 17^3
  // finite-difference truncation with threefold headroom.
  SelfTestResult lam{"lambda closed form", 0.0, 1e-4, false};
  SelfTestResult ric{"ricci closed form", 0.0, 1e-2, false};
  const std::array<Expr, 3> dpsi = {diff(psi, 0), diff(psi, 1), diff(psi, 2)};
  for (int i = 0; i < spec.stored[0]; ++i) {
    if (!spec.interior_index(0, i)) continue;
    for (int j = 0; j < spec.stored[1]; ++j) {
      if (!spec.interior_index(1, j)) continue;
      for (int k = 0; k < spec.stored[2]; ++k) {
        if (!spec.interior_index(2, k)) continue;
        const auto pt = spec.point(i, j, k);
        const double ps = eval(psi, pt);
        double dp[3];
        for (int d = 0; d < 3; ++d) dp[d] = eval(dpsi[static_cast<std::size_t>(d)], pt);
        for (int d = 0; d < 3; ++d) {
          const double expect = -2.0 * std::exp(-4.0 * ps) * dp[d];
          lam.worst = std::max(
              lam.worst,
              std::fabs(conn.lambda_computed.at(spec, i, j, k, d) - expect));
        }
        // omega = 2 psi; second derivatives of psi here: 0.2 on the diagonal.
        const double lap = 3.0 * 0.4;
        const double grad2 =
            4.0 * (dp[0] * dp[0] + dp[1] * dp[1] + dp[2] * dp[2]);
        for (int a = 0; a < 3; ++a)
          for (int b = a; b < 3; ++b) {
            const double dd = (a == b) ? 0.4 : 0.0;
            const double expect = -dd + 4.0 * dp[a] * dp[b] -
                                  ((a == b) ? (lap + grad2) : 0.0);
            ric.worst =
                std::max(ric.worst, std::fabs(ricci.at(spec, i, j, k,
                                                       SymMat3::index(a, b)) -
                                              expect));
          }
      }
    }
  }
  std::vector<SelfTestResult> out{lam, ric};
  for (auto& r : out) finish(r);
  return out;
}

} // namespace bimdecomp
