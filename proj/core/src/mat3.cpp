#include "bimdecomp/mat3.hpp"

#include <algorithm>
#include <cmath>

#include "bimdecomp/errors.hpp"

namespace bimdecomp {

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm_inf(const Vec3& a) {
  return std::max({std::fabs(a[0]), std::fabs(a[1]), std::fabs(a[2])});
}

bool all_finite(const Vec3& a) {
  return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}

Vec3 mul(const Mat3& a, const Vec3& x) {
  Vec3 r;
  for (int i = 0; i < 3; ++i)
    r[i] = a(i, 0) * x[0] + a(i, 1) * x[1] + a(i, 2) * x[2];
  return r;
}

Vec3 mul(const SymMat3& a, const Vec3& x) { return mul(a.full(), x); }

Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
  return r;
}

Mat3 add(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[static_cast<std::size_t>(i)] =
      a.m[static_cast<std::size_t>(i)] + b.m[static_cast<std::size_t>(i)];
  return r;
}

Mat3 sub(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[static_cast<std::size_t>(i)] =
      a.m[static_cast<std::size_t>(i)] - b.m[static_cast<std::size_t>(i)];
  return r;
}

Mat3 scale(double s, const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 9; ++i)
    r.m[static_cast<std::size_t>(i)] = s * a.m[static_cast<std::size_t>(i)];
  return r;
}

double trace3(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }
double trace3(const SymMat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

double det3(const Mat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

double det3(const SymMat3& a) { return det3(a.full()); }

double norm_inf(const Mat3& a) {
  double n = 0.0;
  for (double x : a.m) n = std::max(n, std::fabs(x));
  return n;
}

double norm_inf(const SymMat3& a) { return norm_inf(a.full()); }

bool all_finite(const Mat3& a) {
  for (double x : a.m)
    if (!std::isfinite(x)) return false;
  return true;
}

bool all_finite(const SymMat3& a) {
  for (double x : a.s)
    if (!std::isfinite(x)) return false;
  return true;
}

double asym_norm(const Mat3& a) {
  double n = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      n = std::max(n, std::fabs(a(i, j) - a(j, i)));
  return n;
}

SymMat3 symmetrize(const Mat3& a) {
  SymMat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) r(i, j) = 0.5 * (a(i, j) + a(j, i));
  return r;
}

Mat3 mul(const SymMat3& a, const Mat3& b) { return mul(a.full(), b); }
Mat3 mul(const Mat3& a, const SymMat3& b) { return mul(a, b.full()); }

SymMat3 add(const SymMat3& a, const SymMat3& b) {
  SymMat3 r;
  for (int i = 0; i < 6; ++i) r.s[static_cast<std::size_t>(i)] =
      a.s[static_cast<std::size_t>(i)] + b.s[static_cast<std::size_t>(i)];
  return r;
}

SymMat3 sub(const SymMat3& a, const SymMat3& b) {
  SymMat3 r;
  for (int i = 0; i < 6; ++i) r.s[static_cast<std::size_t>(i)] =
      a.s[static_cast<std::size_t>(i)] - b.s[static_cast<std::size_t>(i)];
  return r;
}

SymMat3 scale(double s, const SymMat3& a) {
  SymMat3 r;
  for (int i = 0; i < 6; ++i)
    r.s[static_cast<std::size_t>(i)] = s * a.s[static_cast<std::size_t>(i)];
  return r;
}

SymMat3 outer(const Vec3& x) {
  SymMat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) r(i, j) = x[i] * x[j];
  return r;
}

SymMat3 congruence(const Mat3& e, const SymMat3& a) {
  const Mat3 t = mul(a.full(), e);
  SymMat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      r(i, j) = e(0, i) * t(0, j) + e(1, i) * t(1, j) + e(2, i) * t(2, j);
  return r;
}

Mat4 mul(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

Mat4 transpose(const Mat4& a) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = a(j, i);
  return r;
}

Mat4 sub(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 16; ++i) r.m[static_cast<std::size_t>(i)] =
      a.m[static_cast<std::size_t>(i)] - b.m[static_cast<std::size_t>(i)];
  return r;
}

double norm_inf(const Mat4& a) {
  double n = 0.0;
  for (double x : a.m) n = std::max(n, std::fabs(x));
  return n;
}

Mat3 inv3(const Mat3& m, const ToleranceProfile& tol) {
  const double d = det3(m);
  const double scale = norm_inf(m);
  if (std::fabs(d) <= tol.det_rel * scale * scale * scale)
    throw SingularMatrix("inv3: matrix is singular to working tolerance");
  const double inv_d = 1.0 / d;
  Mat3 r;
  r(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) * inv_d;
  r(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) * inv_d;
  r(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) * inv_d;
  r(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) * inv_d;
  r(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) * inv_d;
  r(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) * inv_d;
  r(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) * inv_d;
  r(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) * inv_d;
  r(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) * inv_d;
  return r;
}

SymMat3 inv3(const SymMat3& m, const ToleranceProfile& tol) {
  return symmetrize(inv3(m.full(), tol));
}

EigenSym3 eig_sym3(const SymMat3& a_in) {
  if (!all_finite(a_in))
    throw InvalidInput("eig_sym3: non-finite input entry");

  Mat3 a = a_in.full();
  Mat3 v = Mat3::identity();
  const double scale = std::max(norm_inf(a), 1e-300);

  // Cyclic Jacobi sweeps; quadratic convergence makes a handful enough.
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::max({std::fabs(a(0, 1)), std::fabs(a(0, 2)),
                           std::fabs(a(1, 2))});
    if (off <= 1e-16 * scale) break;

    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;

        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                             : -1.0 / (-theta + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
        a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        const int r = 3 - p - q;
        const double arp = a(r, p), arq = a(r, q);
        a(r, p) = c * arp - s * arq;
        a(p, r) = a(r, p);
        a(r, q) = s * arp + c * arq;
        a(q, r) = a(r, q);

        for (int i = 0; i < 3; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  EigenSym3 out;
  int order[3] = {0, 1, 2};
  const double d[3] = {a(0, 0), a(1, 1), a(2, 2)};
  std::sort(order, order + 3, [&](int i, int j) { return d[i] > d[j]; });
  for (int k = 0; k < 3; ++k) {
    out.values[static_cast<std::size_t>(k)] = d[order[k]];
    for (int i = 0; i < 3; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

SymMat3 sqrt_spd_eig(const SymMat3& a, const ToleranceProfile& tol) {
  const EigenSym3 eig = eig_sym3(a);
  const double tol_spd = tol.spd_rel * trace3(a);
  SymMat3 r;
  for (int i = 0; i < 3; ++i) {
    if (eig.values[static_cast<std::size_t>(i)] <= tol_spd)
      throw NotPositiveDefinite("sqrt_spd_eig: eigenvalue below SPD screen");
    const double s = std::sqrt(eig.values[static_cast<std::size_t>(i)]);
    const Mat3& v = eig.vectors;
    for (int j = 0; j < 3; ++j)
      for (int k = j; k < 3; ++k) r(j, k) += s * v(j, i) * v(k, i);
  }
  return r;
}

namespace {

// One Newton correction for F(S) = S*S - a: solve the 3x3 symmetric
// Sylvester equation S*X + X*S = a - S*S as a dense 6x6 linear system
// (Gaussian elimination, partial pivoting) and add X.  Polishes the
// closed-form root to working precision without touching eig_sym3, so
// the eigen and closed-form routes stay independent of each other.
bool sylvester_correct(SymMat3& sqrt_est, const SymMat3& a) {
  const Mat3 s = sqrt_est.full();
  const Mat3 resid = sub(a.full(), mul(s, s));

  // Packed index pairs for the 6 independent entries.
  static constexpr int pi[6] = {0, 0, 0, 1, 1, 2};
  static constexpr int pj[6] = {0, 1, 2, 1, 2, 2};

  double sys[6][7];
  for (int r = 0; r < 6; ++r) {
    const int i = pi[r], j = pj[r];
    for (int c = 0; c < 6; ++c) sys[r][c] = 0.0;
    for (int k = 0; k < 3; ++k) {
      // (S X)_{ij} contributes S_ik X_kj, (X S)_{ij} contributes X_ik S_kj.
      sys[r][SymMat3::index(k, j)] += s(i, k);
      sys[r][SymMat3::index(i, k)] += s(k, j);
    }
    sys[r][6] = resid(i, j);
  }

  for (int col = 0; col < 6; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 6; ++r)
      if (std::fabs(sys[r][col]) > std::fabs(sys[pivot][col])) pivot = r;
    if (std::fabs(sys[pivot][col]) == 0.0) return false;
    if (pivot != col)
      for (int c = col; c < 7; ++c) std::swap(sys[pivot][c], sys[col][c]);
    for (int r = col + 1; r < 6; ++r) {
      const double f = sys[r][col] / sys[col][col];
      for (int c = col; c < 7; ++c) sys[r][c] -= f * sys[col][c];
    }
  }
  double x[6];
  for (int r = 5; r >= 0; --r) {
    double v = sys[r][6];
    for (int c = r + 1; c < 6; ++c) v -= sys[r][c] * x[c];
    x[r] = v / sys[r][r];
  }
  for (int r = 0; r < 6; ++r) sqrt_est.s[static_cast<std::size_t>(r)] += x[r];
  return true;
}

} // namespace

SymMat3 sqrt_spd_closed(const SymMat3& a, const ToleranceProfile& tol) {
  if (!all_finite(a))
    throw InvalidInput("sqrt_spd_closed: non-finite input entry");

  const double a1 = trace3(a);

  // SPD screen via leading principal minors.
  const double m2 = a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
  const double a3 = det3(a);
  if (a1 <= 0.0 || a(0, 0) <= 0.0 || m2 <= 0.0 || a3 <= 0.0)
    throw NotPositiveDefinite("sqrt_spd_closed: input fails SPD screen");

  // k = A1^2 - 3 A2 evaluated as (3/2)||a - (A1/3) I||_F^2: identical
  // algebraically, immune to the cancellation of the trace form.
  const double mean = a1 / 3.0;
  SymMat3 dev = a;
  dev(0, 0) -= mean;
  dev(1, 1) -= mean;
  dev(2, 2) -= mean;
  double frob2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) frob2 += dev(i, j) * dev(i, j);
  const double k = 1.5 * frob2;

  if (k <= tol.k_branch_rel * std::max(a1 * a1, 1.0)) {
    // Isotropic input: the square root is a multiple of the identity.
    // The corrections are exact no-ops there and absorb any residual
    // anisotropy below the branch threshold.
    SymMat3 root = scale(std::sqrt(a1 / 3.0), SymMat3::identity());
    sylvester_correct(root, a);
    sylvester_correct(root, a);
    return root;
  }

  // l = A1 (A1^2 - 9/2 A2) + 27/2 A3, evaluated as (27/2) det(dev).
  const double l = 13.5 * det3(dev);
  const double arg = std::min(1.0, std::max(-1.0, l / std::pow(k, 1.5)));
  const double phi = std::acos(arg);
  const double lambda =
      std::sqrt((a1 + 2.0 * std::sqrt(k) * std::cos(phi / 3.0)) / 3.0);

  const double s3 = std::sqrt(a3);
  const double s1 =
      lambda +
      std::sqrt(std::max(0.0, -lambda * lambda + a1 + 2.0 * s3 / lambda));
  const double s2 = (s1 * s1 - a1) / 2.0;

  const double den = s1 * s2 - s3;
  if (std::fabs(den) <= tol.degenerate_den * (1.0 + std::fabs(s1 * s2) + std::fabs(s3)))
    throw DegenerateDenominator("sqrt_spd_closed: S1*S2 - S3 vanishes");

  const Mat3 af = a.full();
  const Mat3 a_sq = mul(af, af);
  SymMat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const double id = (i == j) ? 1.0 : 0.0;
      r(i, j) = (s1 * s3 * id + (s1 * s1 - s2) * af(i, j) - a_sq(i, j)) / den;
    }
  sylvester_correct(r, a);
  return r;
}

Polar3 polar3(const Mat3& m, const ToleranceProfile& tol) {
  const double d = det3(m);
  const double scale3 = norm_inf(m);
  if (std::fabs(d) <= tol.det_rel * scale3 * scale3 * scale3)
    throw SingularMatrix("polar3: matrix is singular to working tolerance");

  // Scaled Newton iteration for the orthogonal factor.  Each step keeps
  // the polar factor of the iterate fixed, so the limit is the exact
  // orthogonal factor of m; the determinant scaling makes the iteration
  // count insensitive to conditioning.  Forming (m m^T)^{1/2} instead
  // would lose the small singular direction as eps * cond(m)^2.
  Mat3 q = m;
  for (int it = 0; it < 50; ++it) {
    const Mat3 y = transpose(inv3(q, tol));
    const double g = std::pow(std::fabs(det3(q)), -1.0 / 3.0);
    Mat3 next;
    for (int i = 0; i < 9; ++i)
      next.m[static_cast<std::size_t>(i)] =
          0.5 * (g * q.m[static_cast<std::size_t>(i)] +
                 y.m[static_cast<std::size_t>(i)] / g);
    const double step = norm_inf(sub(next, q));
    q = next;
    if (step <= 1e-14 * norm_inf(q)) break;
  }

  return Polar3{symmetrize(mul(m, transpose(q))), q};
}

} // namespace bimdecomp
