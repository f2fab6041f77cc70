#include "bimdecomp/lorentz_frame.hpp"

#include <cmath>

#include "bimdecomp/errors.hpp"

namespace bimdecomp {

Boost boost_from_p(const Vec3& p) {
  if (!all_finite(p)) throw InvalidInput("boost_from_p: non-finite separation parameter");
  const double lambda = std::sqrt(1.0 + dot(p, p));
  SymMat3 b = SymMat3::identity();
  const double c = 1.0 / (1.0 + lambda);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) b(i, j) += c * p[i] * p[j];
  return Boost{lambda, b};
}

Mat3 rbar(const Mat3& g_vielbein, const Mat3& f_vielbein, const SymMat3& boost,
          const ToleranceProfile& tol) {
  // (gE fE^{-1})^T B.  The orthogonal polar factor of its inverse is the
  // unique rotation making gE^T B R fE symmetric positive definite: with
  // A = gE^T B the symmetric product forces R = A^{-1} H fE^{-1} where
  // H solves H (A A^T)^{-1} H = fE^T fE, and rbar^{-1} = R (fE H^{-1} fE^T)
  // exhibits exactly that rotation as its polar factor.
  Mat3 f_inv;
  try {
    f_inv = inv3(f_vielbein, tol);
  } catch (const SingularMatrix&) {
    throw SingularVielbein("rbar: f-sector vielbein is singular");
  }
  const double gd = det3(g_vielbein);
  const double gn = norm_inf(g_vielbein);
  if (std::fabs(gd) <= tol.det_rel * gn * gn * gn)
    throw SingularVielbein("rbar: g-sector vielbein is singular");
  return mul(transpose(mul(g_vielbein, f_inv)), boost.full());
}

Mat3 rotation_from_rbar(const Mat3& rb, SqrtAlgorithm algorithm,
                        const ToleranceProfile& tol) {
  Mat3 r;
  switch (algorithm) {
    case SqrtAlgorithm::Eigen: {
      const SymMat3 s = sqrt_spd_eig(congruence(rb, SymMat3::identity()), tol);
      r = mul(s.full(), inv3(rb, tol));
      break;
    }
    case SqrtAlgorithm::ClosedForm: {
      const SymMat3 s = sqrt_spd_closed(congruence(rb, SymMat3::identity()), tol);
      r = mul(s.full(), inv3(rb, tol));
      break;
    }
    case SqrtAlgorithm::Polar: {
      // R is the orthogonal polar factor of rbar^{-1}.
      r = polar3(inv3(rb, tol), tol).q;
      break;
    }
  }
  // The sqrt routes compose S with rb^{-1}, which leaves an orthogonality
  // defect of order eps * cond(rb); two Newton steps remove it without
  // moving R beyond its own error.
  if (algorithm != SqrtAlgorithm::Polar) {
    for (int it = 0; it < 2; ++it) {
      const Mat3 rit = transpose(inv3(r, tol));
      for (int c = 0; c < 9; ++c)
        r.m[static_cast<std::size_t>(c)] =
            0.5 * (r.m[static_cast<std::size_t>(c)] +
                   rit.m[static_cast<std::size_t>(c)]);
    }
  }
  if (std::fabs(det3(r) - 1.0) > tol.orth)
    throw InvalidFrame("rotation_from_rbar: det R != +1, invalid frame input");
  return r;
}

Mat4 assemble_L(const Vec3& p, double lambda, const SymMat3& boost,
                const Mat3& rotation) {
  Mat4 L;
  L(0, 0) = lambda;
  const Mat3 br = mul(boost.full(), rotation);
  for (int j = 0; j < 3; ++j) {
    // top row: p^T R; left column: p
    L(0, j + 1) = p[0] * rotation(0, j) + p[1] * rotation(1, j) + p[2] * rotation(2, j);
    L(j + 1, 0) = p[j];
    for (int i = 0; i < 3; ++i) L(i + 1, j + 1) = br(i, j);
  }
  return L;
}

LorentzFrame build_frame(const Vec3& p, const Mat3& g_vielbein, const Mat3& f_vielbein,
                         SqrtAlgorithm algorithm, const ToleranceProfile& tol) {
  LorentzFrame fr;
  fr.p = p;
  const Boost b = boost_from_p(p);
  fr.lambda = b.lambda;
  fr.boost = b.b;
  fr.rbar = rbar(g_vielbein, f_vielbein, b.b, tol);
  fr.rotation = rotation_from_rbar(fr.rbar, algorithm, tol);
  fr.L = assemble_L(p, b.lambda, b.b, fr.rotation);
  return fr;
}

double lorentz_residual(const Mat4& L) {
  Mat4 eta;
  eta(0, 0) = -1.0;
  eta(1, 1) = eta(2, 2) = eta(3, 3) = 1.0;
  const Mat4 lhs = mul(transpose(L), mul(eta, L));
  double r = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      r = std::max(r, std::fabs(lhs(i, j) - eta(i, j)));
  return r;
}

} // namespace bimdecomp
