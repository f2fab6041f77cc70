#pragma once

#include <array>
#include <cmath>

#include "bimdecomp/tolerances.hpp"

namespace bimdecomp {

struct Vec3 {
  std::array<double, 3> v{0.0, 0.0, 0.0};

  double& operator[](int i) noexcept { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const noexcept { return v[static_cast<std::size_t>(i)]; }

  friend Vec3 operator+(const Vec3& a, const Vec3& b) {
    return Vec3{{a[0] + b[0], a[1] + b[1], a[2] + b[2]}};
  }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) {
    return Vec3{{a[0] - b[0], a[1] - b[1], a[2] - b[2]}};
  }
  friend Vec3 operator*(double s, const Vec3& a) {
    return Vec3{{s * a[0], s * a[1], s * a[2]}};
  }
  friend bool operator==(const Vec3& a, const Vec3& b) { return a.v == b.v; }
};

double dot(const Vec3& a, const Vec3& b);
double norm_inf(const Vec3& a);
bool all_finite(const Vec3& a);

// Dense 3x3 real matrix, row-major.  The common currency of every kernel:
// vielbeins, boosts, rotations and generic products all live here.
struct Mat3 {
  std::array<double, 9> m{};

  double& operator()(int i, int j) noexcept {
    return m[static_cast<std::size_t>(3 * i + j)];
  }
  double operator()(int i, int j) const noexcept {
    return m[static_cast<std::size_t>(3 * i + j)];
  }

  static Mat3 identity() {
    return Mat3{{1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0}};
  }
  static Mat3 zero() { return Mat3{}; }

  friend bool operator==(const Mat3& a, const Mat3& b) { return a.m == b.m; }
};

// Symmetric 3x3 matrix stored as the six independent entries
// (11, 12, 13, 22, 23, 33).  Equal to its transpose by construction.
struct SymMat3 {
  std::array<double, 6> s{};

  static constexpr int index(int i, int j) noexcept {
    // (0,0)->0 (0,1)->1 (0,2)->2 (1,1)->3 (1,2)->4 (2,2)->5
    return (i <= j) ? (i * (5 - i)) / 2 + j : (j * (5 - j)) / 2 + i;
  }

  double& operator()(int i, int j) noexcept {
    return s[static_cast<std::size_t>(index(i, j))];
  }
  double operator()(int i, int j) const noexcept {
    return s[static_cast<std::size_t>(index(i, j))];
  }

  static SymMat3 identity() { return SymMat3{{1.0, 0.0, 0.0, 1.0, 0.0, 1.0}}; }
  static SymMat3 zero() { return SymMat3{}; }

  Mat3 full() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(i, j);
    return r;
  }

  friend bool operator==(const SymMat3& a, const SymMat3& b) { return a.s == b.s; }
};

// 4x4 real matrix for the assembled Lorentz transformation and the ADM
// block checks.
struct Mat4 {
  std::array<double, 16> m{};

  double& operator()(int i, int j) noexcept {
    return m[static_cast<std::size_t>(4 * i + j)];
  }
  double operator()(int i, int j) const noexcept {
    return m[static_cast<std::size_t>(4 * i + j)];
  }

  static Mat4 identity() {
    Mat4 r;
    for (int i = 0; i < 4; ++i) r(i, i) = 1.0;
    return r;
  }
};

Mat4 mul(const Mat4& a, const Mat4& b);
Mat4 transpose(const Mat4& a);
Mat4 sub(const Mat4& a, const Mat4& b);
double norm_inf(const Mat4& a);

// ---- Mat3 algebra -------------------------------------------------------

Mat3 mul(const Mat3& a, const Mat3& b);
Vec3 mul(const Mat3& a, const Vec3& x);
Mat3 transpose(const Mat3& a);
Mat3 add(const Mat3& a, const Mat3& b);
Mat3 sub(const Mat3& a, const Mat3& b);
Mat3 scale(double s, const Mat3& a);
Vec3 mul(const SymMat3& a, const Vec3& x);

double trace3(const Mat3& a);
double trace3(const SymMat3& a);
double det3(const Mat3& a);
double det3(const SymMat3& a);
double norm_inf(const Mat3& a);
double norm_inf(const SymMat3& a);
bool all_finite(const Mat3& a);
bool all_finite(const SymMat3& a);

// Max-norm of the antisymmetric part; zero iff the matrix is symmetric.
double asym_norm(const Mat3& a);

// Nearest symmetric matrix, (a + a^T)/2.
SymMat3 symmetrize(const Mat3& a);

// a * b for symmetric a, generic result.
Mat3 mul(const SymMat3& a, const Mat3& b);
Mat3 mul(const Mat3& a, const SymMat3& b);
SymMat3 add(const SymMat3& a, const SymMat3& b);
SymMat3 sub(const SymMat3& a, const SymMat3& b);
SymMat3 scale(double s, const SymMat3& a);

// Rank-one symmetric product x x^T.
SymMat3 outer(const Vec3& x);

// Congruence e^T a e, symmetric by construction.
SymMat3 congruence(const Mat3& e, const SymMat3& a);

// Cofactor-based closed-form inverse.  Throws SingularMatrix when
// |det| <= tol.det_rel * max(1, ||m||_inf)^3.
Mat3 inv3(const Mat3& m, const ToleranceProfile& tol = {});
SymMat3 inv3(const SymMat3& m, const ToleranceProfile& tol = {});

// ---- eigendecomposition and square roots --------------------------------

// Eigensystem of a symmetric 3x3 matrix: eigenvalues descending,
// eigenvectors as orthonormal columns of `vectors`.
struct EigenSym3 {
  std::array<double, 3> values{};
  Mat3 vectors;
};

// Cyclic Jacobi rotations; reconstruction residual is a few ulps of
// ||a||_inf.  Throws InvalidInput on non-finite entries.
EigenSym3 eig_sym3(const SymMat3& a);

// SPD square root through the eigendecomposition.  Throws
// NotPositiveDefinite when an eigenvalue falls below tol.spd_rel * trace.
SymMat3 sqrt_spd_eig(const SymMat3& a, const ToleranceProfile& tol = {});

// SPD square root in closed form from the characteristic polynomial
// invariants: no eigendecomposition, two branches.  When the eigenvalue
// spread is below the k-branch threshold the root is a multiple of the
// identity; otherwise the root is assembled from the invariants
//   A1 = tr a, A2 = (tr(a)^2 - tr(a*a))/2, A3 = det a.
// Throws NotPositiveDefinite, or DegenerateDenominator when
// |S1*S2 - S3| is below tol.degenerate_den (caller decides any fallback).
SymMat3 sqrt_spd_closed(const SymMat3& a, const ToleranceProfile& tol = {});

// Polar factors m = p * q with p symmetric positive definite and q
// orthogonal.  The orthogonal factor comes from a determinant-scaled
// Newton iteration on m, then p = sym(m q^T).  Throws SingularMatrix.
struct Polar3 {
  SymMat3 p;
  Mat3 q;
};
Polar3 polar3(const Mat3& m, const ToleranceProfile& tol = {});

} // namespace bimdecomp
