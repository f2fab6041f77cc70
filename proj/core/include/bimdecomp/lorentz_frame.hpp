#pragma once

#include "bimdecomp/mat3.hpp"
#include "bimdecomp/tolerances.hpp"

namespace bimdecomp {

// Which square-root kernel resolves the symmetrization condition.
enum class SqrtAlgorithm { ClosedForm, Eigen, Polar };

// Lorentz transformation relating the two sectors' frames, built from the
// separation parameter and the spatial vielbeins.  The spatial Minkowski
// block is the identity throughout (signature -+++), so every metric
// conjugation in the construction reduces to a transpose.
struct LorentzFrame {
  Vec3 p;                // separation parameter, p^a = sinh(rapidity^a)
  double lambda = 1.0;   // Lorentz factor, sqrt(1 + p.p)
  SymMat3 boost;         // spatial boost block B, det B = lambda
  Mat3 rbar;             // (gE fE^{-1})^T B
  Mat3 rotation;         // orthogonal R with R*rbar symmetric positive definite
  Mat4 L;                // assembled 4x4, [[lambda, (R^T p)^T], [p, B R]]
};

// lambda = sqrt(1 + p.p) and B = I + p p^T / (1 + lambda), the unique SPD
// solution of B^2 = I + p p^T; also satisfies B p = lambda p.
struct Boost {
  double lambda;
  SymMat3 b;
};
Boost boost_from_p(const Vec3& p);

// rbar = (gE fE^{-1})^T B for invertible vielbeins; the orthogonal polar
// factor of rbar^{-1} is the unique rotation symmetrizing the mean
// spatial metric (and the symmetrized product is then automatically the
// matrix geometric mean of gE^T(1+pp^T)gE and fE^T fE, so it always
// exists and is positive definite).
Mat3 rbar(const Mat3& g_vielbein, const Mat3& f_vielbein, const SymMat3& boost,
          const ToleranceProfile& tol = {});

// The rotation solving the symmetrization condition,
// R = (rbar^T rbar)^{1/2} rbar^{-1}: equivalently the orthogonal polar
// factor of rbar^{-1}.  All three algorithm choices agree to tolerance;
// det R must come out +1 (positive-diagonal vielbeins), anything else
// throws InvalidFrame.
Mat3 rotation_from_rbar(const Mat3& rb, SqrtAlgorithm algorithm,
                        const ToleranceProfile& tol = {});

// Assembled 4x4 Lorentz matrix; satisfies L^T H L = H with H = diag(-1,1,1,1).
Mat4 assemble_L(const Vec3& p, double lambda, const SymMat3& boost, const Mat3& rotation);

// Full frame construction for one grid point.
LorentzFrame build_frame(const Vec3& p, const Mat3& g_vielbein, const Mat3& f_vielbein,
                         SqrtAlgorithm algorithm, const ToleranceProfile& tol = {});

// max |L^T H L - H|; the group-membership residual.
double lorentz_residual(const Mat4& L);

} // namespace bimdecomp
