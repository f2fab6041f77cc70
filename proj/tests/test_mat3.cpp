#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "bimdecomp/errors.hpp"
#include "bimdecomp/mat3.hpp"
#include "bimdecomp/selftest.hpp"

using namespace bimdecomp;

namespace {

SymMat3 sym(double a11, double a12, double a13, double a22, double a23, double a33) {
  return SymMat3{{a11, a12, a13, a22, a23, a33}};
}

SymMat3 diag(double a, double b, double c) { return sym(a, 0, 0, b, 0, c); }

Mat3 rot_z(double th) {
  Mat3 r = Mat3::identity();
  r(0, 0) = std::cos(th);
  r(0, 1) = -std::sin(th);
  r(1, 0) = std::sin(th);
  r(1, 1) = std::cos(th);
  return r;
}

double rel_diff(const Mat3& a, const Mat3& b) {
  return norm_inf(sub(a, b)) / (1.0 + norm_inf(b));
}

} // namespace

TEST_CASE("eig_sym3 diagonal and identity inputs") {
  const EigenSym3 e = eig_sym3(diag(3, 2, 1));
  CHECK(e.values[0] == doctest::Approx(3.0));
  CHECK(e.values[1] == doctest::Approx(2.0));
  CHECK(e.values[2] == doctest::Approx(1.0));
  // already diagonal: eigenvectors are signed unit vectors
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r)
      CHECK(std::fabs(e.vectors(r, c)) == doctest::Approx(r == c ? 1.0 : 0.0));

  const EigenSym3 id = eig_sym3(SymMat3::identity());
  for (int c = 0; c < 3; ++c) CHECK(id.values[c] == doctest::Approx(1.0));
  const Mat3 vtv = mul(transpose(id.vectors), id.vectors);
  CHECK(norm_inf(sub(vtv, Mat3::identity())) < 1e-14);
}

TEST_CASE("eig_sym3 block matrix, eigenvalues solved by hand") {
  // [[2,1,0],[1,2,0],[0,0,5]]: 2x2 block has roots 3 and 1, plus 5.
  const EigenSym3 e = eig_sym3(sym(2, 1, 0, 2, 0, 5));
  CHECK(e.values[0] == doctest::Approx(5.0));
  CHECK(e.values[1] == doctest::Approx(3.0));
  CHECK(e.values[2] == doctest::Approx(1.0));
}

TEST_CASE("eig_sym3 rejects non-finite input") {
  SymMat3 a = SymMat3::identity();
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(eig_sym3(a), InvalidInput);
}

TEST_CASE("eig_sym3 reconstruction and orthogonality on random input") {
  RandomGen g(7);
  for (int t = 0; t < 500; ++t) {
    const SymMat3 a = random_spd(g, 1e6, 1e-2, 1e2);
    const EigenSym3 e = eig_sym3(a);
    Mat3 recon = Mat3::zero();
    for (int c = 0; c < 3; ++c)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          recon(i, j) += e.values[c] * e.vectors(i, c) * e.vectors(j, c);
    CHECK(norm_inf(sub(recon, a.full())) <= 1e-12 * (1.0 + norm_inf(a)));
    CHECK(norm_inf(sub(mul(transpose(e.vectors), e.vectors), Mat3::identity())) <
          1e-13);
    CHECK(e.values[0] >= e.values[1]);
    CHECK(e.values[1] >= e.values[2]);
  }
}

TEST_CASE("eig_sym3 eigenvalues invariant under orthogonal conjugation") {
  RandomGen g(11);
  for (int t = 0; t < 200; ++t) {
    const SymMat3 a = random_spd(g, 1e4, 1e-1, 1e1);
    const Mat3 q = random_rotation(g);
    const SymMat3 conj = congruence(q, a);
    const EigenSym3 ea = eig_sym3(a);
    const EigenSym3 ec = eig_sym3(conj);
    for (int c = 0; c < 3; ++c)
      CHECK(ec.values[c] ==
            doctest::Approx(ea.values[c]).epsilon(1e-11).scale(ea.values[0]));
  }
}

TEST_CASE("sqrt_spd_eig on forced inputs") {
  CHECK(rel_diff(sqrt_spd_eig(SymMat3::identity()).full(), Mat3::identity()) <
        1e-14);
  const SymMat3 s = sqrt_spd_eig(diag(4, 9, 25));
  CHECK(rel_diff(s.full(), diag(2, 3, 5).full()) < 1e-14);
}

TEST_CASE("sqrt_spd_eig recovers a known root") {
  // oracle: square a known SPD matrix, then take the square root
  const SymMat3 root = sym(2, 1, 0, 3, 1, 2);
  const SymMat3 a = symmetrize(mul(root.full(), root.full()));
  const SymMat3 s = sqrt_spd_eig(a);
  CHECK(norm_inf(sub(s.full(), root.full())) < 1e-12);
}

TEST_CASE("sqrt_spd_eig rejects indefinite input") {
  CHECK_THROWS_AS(sqrt_spd_eig(diag(1, 1, -1)), NotPositiveDefinite);
  CHECK_THROWS_AS(sqrt_spd_eig(diag(0, 1, 1)), NotPositiveDefinite);
}

TEST_CASE("sqrt_spd_closed isotropic branch") {
  const SymMat3 s = sqrt_spd_closed(diag(4, 4, 4));
  CHECK(norm_inf(sub(s.full(), scale(2.0, Mat3::identity()))) == 0.0);
}

TEST_CASE("sqrt_spd_closed diagonal input") {
  const SymMat3 s = sqrt_spd_closed(diag(1, 4, 9));
  CHECK(rel_diff(s.full(), diag(1, 2, 3).full()) < 1e-14);
}

TEST_CASE("sqrt_spd_closed rejects indefinite input") {
  CHECK_THROWS_AS(sqrt_spd_closed(diag(1, 1, -1)), NotPositiveDefinite);
  CHECK_THROWS_AS(sqrt_spd_closed(diag(-4, -4, -4)), NotPositiveDefinite);
}

TEST_CASE("sqrt_spd_closed degenerate denominator is reported, not hidden") {
  ToleranceProfile tol;
  tol.degenerate_den = 1.0;  // force the screen to trip
  CHECK_THROWS_AS(sqrt_spd_closed(diag(1, 4, 9), tol), DegenerateDenominator);
}

TEST_CASE("sqrt routes agree on random SPD input") {
  RandomGen g(23);
  for (int t = 0; t < 2000; ++t) {
    const SymMat3 a = random_spd(g, 1e6, 1e-2, 1e2);
    const double den = 1.0 + norm_inf(a);
    const SymMat3 se = sqrt_spd_eig(a);
    const SymMat3 sc = sqrt_spd_closed(a);
    CHECK(norm_inf(sub(mul(se.full(), se.full()), a.full())) <= 1e-10 * den);
    CHECK(norm_inf(sub(mul(sc.full(), sc.full()), a.full())) <= 1e-10 * den);
    CHECK(norm_inf(sub(se.full(), sc.full())) <= 1e-10 * den);
  }
}

TEST_CASE("sqrt scaling property") {
  RandomGen g(31);
  for (int t = 0; t < 200; ++t) {
    const SymMat3 a = random_spd(g, 1e4, 1e-1, 1e1);
    const double c = std::exp(g.uniform(-2.0, 2.0));
    const SymMat3 s1 = sqrt_spd_eig(scale(c * c, a));
    const SymMat3 s2 = scale(c, sqrt_spd_eig(a));
    CHECK(norm_inf(sub(s1.full(), s2.full())) <= 1e-12 * (1.0 + norm_inf(s2)));
    const SymMat3 c1 = sqrt_spd_closed(scale(c * c, a));
    const SymMat3 c2 = scale(c, sqrt_spd_closed(a));
    CHECK(norm_inf(sub(c1.full(), c2.full())) <= 1e-12 * (1.0 + norm_inf(c2)));
  }
}

TEST_CASE("polar3 on forced inputs") {
  const Polar3 pi = polar3(Mat3::identity());
  CHECK(rel_diff(pi.p.full(), Mat3::identity()) < 1e-14);
  CHECK(rel_diff(pi.q, Mat3::identity()) < 1e-14);

  const Mat3 rz = rot_z(0.8);
  const Polar3 pr = polar3(rz);
  CHECK(rel_diff(pr.p.full(), Mat3::identity()) < 1e-13);
  CHECK(rel_diff(pr.q, rz) < 1e-13);

  const Polar3 pd = polar3(diag(2, 3, 4).full());
  CHECK(rel_diff(pd.p.full(), diag(2, 3, 4).full()) < 1e-13);
  CHECK(rel_diff(pd.q, Mat3::identity()) < 1e-13);
}

TEST_CASE("polar3 properties on random invertible input") {
  RandomGen g(41);
  for (int t = 0; t < 1000; ++t) {
    const Mat3 m = random_invertible(g, 1e6, 1e-2, 1e2);
    const Polar3 pq = polar3(m);
    CHECK(norm_inf(sub(mul(pq.p.full(), pq.q), m)) <= 1e-10 * norm_inf(m));
    CHECK(norm_inf(sub(mul(transpose(pq.q), pq.q), Mat3::identity())) <= 1e-10);
    // p SPD via eigenvalues
    const EigenSym3 e = eig_sym3(pq.p);
    CHECK(e.values[2] > 0.0);
  }
}

TEST_CASE("polar3 rejects singular input") {
  Mat3 m = Mat3::zero();
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  CHECK_THROWS_AS(polar3(m), SingularMatrix);
}

TEST_CASE("inv3, det3, trace3 basics") {
  CHECK(rel_diff(inv3(Mat3::identity()), Mat3::identity()) == 0.0);
  CHECK(det3(diag(2, 3, 4).full()) == doctest::Approx(24.0));
  CHECK(trace3(diag(2, 3, 4)) == doctest::Approx(9.0));

  // upper triangular with diagonal (1,2,4): inverse stays upper
  // triangular with inverted diagonal; oracle is multiply-back.
  Mat3 u = Mat3::zero();
  u(0, 0) = 1.0; u(0, 1) = 0.5; u(0, 2) = -1.0;
  u(1, 1) = 2.0; u(1, 2) = 3.0;
  u(2, 2) = 4.0;
  const Mat3 ui = inv3(u);
  CHECK(ui(1, 0) == 0.0);
  CHECK(ui(2, 0) == 0.0);
  CHECK(ui(2, 1) == 0.0);
  CHECK(ui(0, 0) == doctest::Approx(1.0));
  CHECK(ui(1, 1) == doctest::Approx(0.5));
  CHECK(ui(2, 2) == doctest::Approx(0.25));
  CHECK(norm_inf(sub(mul(u, ui), Mat3::identity())) < 1e-14);
}

TEST_CASE("inv3 multiply-back on random input") {
  RandomGen g(55);
  // Moderate conditioning meets the contract tolerance directly.
  for (int t = 0; t < 500; ++t) {
    const Mat3 m = random_invertible(g, 1e2, 1e-1, 1e1);
    const Mat3 mi = inv3(m);
    CHECK(norm_inf(sub(mul(m, mi), Mat3::identity())) <= 1e-12);
  }
  // Cofactor inverses lose accuracy as eps * s1^2/(s2 s3); check against
  // that model on spectra with known singular values.
  for (int t = 0; t < 500; ++t) {
    const double s2 = std::pow(10.0, g.uniform(-3.0, 0.0));
    const double s3 = std::pow(10.0, g.uniform(-3.0, std::log10(s2)));
    const Mat3 ql = random_rotation(g), qr = random_rotation(g);
    Mat3 m;
    const double w[3] = {1.0, s2, s3};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = w[0] * ql(i, 0) * qr(j, 0) + w[1] * ql(i, 1) * qr(j, 1) +
                  w[2] * ql(i, 2) * qr(j, 2);
    const Mat3 mi = inv3(m);
    const double bound = 1e-12 + 5e-15 / (s2 * s3);
    CHECK(norm_inf(sub(mul(m, mi), Mat3::identity())) <= bound);
  }
}

TEST_CASE("inv3 rejects singular input") {
  CHECK_THROWS_AS(inv3(Mat3::zero()), SingularMatrix);
  Mat3 rank2 = Mat3::zero();
  rank2(0, 0) = 1.0;
  rank2(1, 1) = 1.0;
  CHECK_THROWS_AS(inv3(rank2), SingularMatrix);
}

TEST_CASE("near-isotropic inputs spanning the closed-form branch threshold") {
  RandomGen g(67);
  for (int t = 0; t < 2000; ++t) {
    const double c = std::pow(10.0, g.uniform(-1.0, 2.0));
    const double eps = std::pow(10.0, g.uniform(-15.0, -5.0));
    SymMat3 a;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j)
        a(i, j) = c * ((i == j ? 1.0 : 0.0) + eps * g.normal());
    const double den = 1.0 + norm_inf(a);
    const SymMat3 sc = sqrt_spd_closed(a);
    const SymMat3 se = sqrt_spd_eig(a);
    CHECK(norm_inf(sub(mul(sc.full(), sc.full()), a.full())) <= 1e-10 * den);
    CHECK(norm_inf(sub(se.full(), sc.full())) <= 1e-10 * den);
  }
}
