#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "bimdecomp/errors.hpp"
#include "bimdecomp/expr.hpp"

using namespace bimdecomp;

namespace {

const Chart& chart() {
  static const Chart c{"spherical", {"r", "th", "ph"},
                       {0.5, 0.3, 0.0},
                       {3.0, 2.8, 6.283},
                       {true, true, false}};
  return c;
}

double ev(const std::string& src, double r = 1.0, double th = 1.0,
          double ph = 1.0) {
  return eval(parse(src, chart()), {r, th, ph});
}

} // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(ev("1 + 2*3") == doctest::Approx(7.0));
  CHECK(ev("3.5") == doctest::Approx(3.5));
  CHECK(ev("exp(0)") == doctest::Approx(1.0));
  CHECK(ev("2^3^2") == doctest::Approx(512.0));   // right-associative pow
  CHECK(ev("1-2-3") == doctest::Approx(-4.0));    // left-associative sub
  CHECK(ev("24/4/2") == doctest::Approx(3.0));
  CHECK(ev("-2^2") == doctest::Approx(4.0));      // unary minus binds above pow
  CHECK(ev("2^-1") == doctest::Approx(0.5));
  CHECK(ev("-3 + 1") == doctest::Approx(-2.0));
  CHECK(ev("2*-3") == doctest::Approx(-6.0));
  CHECK(ev("pow(2, 10)") == doctest::Approx(1024.0));
}

TEST_CASE("trigonometric identity holds across the domain") {
  for (double th = 0.31; th < 2.8; th += 0.17)
    CHECK(ev("sin(th)^2 + cos(th)^2", 1.0, th) == doctest::Approx(1.0));
}

TEST_CASE("coordinate evaluation") {
  CHECK(ev("r^2 * sin(th)", 2.0, 1.5707963267948966) == doctest::Approx(4.0));
}

TEST_CASE("whitespace insensitivity") {
  CHECK(ev("  1+2 *   3 ") == doctest::Approx(7.0));
  CHECK(ev("sin( th )^ 2+cos(th) ^2", 1.0, 0.7) == doctest::Approx(1.0));
}

TEST_CASE("syntax errors carry a byte offset") {
  CHECK_THROWS_AS(parse("", chart()), SyntaxError);
  try {
    parse("1 + * 2", chart());
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);
  }
  try {
    parse("sin(th", chart());
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 6);
  }
  CHECK_THROWS_AS(parse("1 2", chart()), SyntaxError);
  CHECK_THROWS_AS(parse("sin(th, r)", chart()), SyntaxError);
  CHECK_THROWS_AS(parse("1 + $", chart()), SyntaxError);
}

TEST_CASE("unknown symbols are rejected at parse time") {
  CHECK_THROWS_AS(parse("x + 1", chart()), UnknownSymbol);
  CHECK_THROWS_AS(parse("foo(r)", chart()), UnknownSymbol);
}

TEST_CASE("parameters are a separate namespace") {
  const std::vector<std::string> params = {"a0", "mass"};
  const Expr e = parse("a0 * r + mass", chart(), params);
  const double vals[] = {2.5, 0.25};
  CHECK(eval(e, {3.0, 0.0, 0.0}, {vals, 2}) == doctest::Approx(7.75));
  // differentiation treats them as constants
  const Expr de = diff(e, 0);
  CHECK(eval(de, {3.0, 0.0, 0.0}, {vals, 2}) == doctest::Approx(2.5));
}

TEST_CASE("domain violations are errors, not NaNs") {
  CHECK_THROWS_AS(ev("log(0)"), DomainError);
  CHECK_THROWS_AS(ev("log(r - 2)", 1.0), DomainError);
  CHECK_THROWS_AS(ev("sqrt(0 - r)", 2.0), DomainError);
  CHECK_THROWS_AS(ev("arccos(1.1)"), DomainError);
  CHECK_THROWS_AS(ev("arcsin(0 - 1.1)"), DomainError);
  CHECK_THROWS_AS(ev("1/(r - r)"), DomainError);
  CHECK_THROWS_AS(ev("pow(0 - 2, 0.5)"), DomainError);
  try {
    ev("log(0 - 3)");
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("log") != std::string::npos);
    CHECK(std::string(e.what()).find("-3") != std::string::npos);
  }
}

TEST_CASE("arccos boundary slack clamps tiny overshoot") {
  CHECK(ev("arccos(1.0000000000001)") == doctest::Approx(0.0));
  CHECK(ev("arcsin(1.0000000000001)") == doctest::Approx(std::asin(1.0)));
}

TEST_CASE("analytic derivatives on forced expressions") {
  const Expr e1 = diff(parse("r^2", chart()), 0);
  CHECK(eval(e1, {2.0, 0.0, 0.0}) == doctest::Approx(4.0));
  const Expr e2 = diff(parse("sin(th)", chart()), 1);
  CHECK(eval(e2, {0.0, 0.9, 0.0}) == doctest::Approx(std::cos(0.9)));
}

TEST_CASE("derivatives validated against central finite differences") {
  const std::vector<std::string> sources = {
      "exp(2*r)*cos(th)",
      "r^3 * sin(th) / (1 + r^2)",
      "tanh(r) + log(r) * cos(th)^2",
      "sqrt(r) * arctan(th)",
      "sinh(r/2) * cosh(th/3)",
      "pow(r, 1.5) + th^2",
      "arccos(r/4) + arcsin(th/4)",
      "tan(th/2) + 1/r",
  };
  const double h = 1e-5;
  for (const std::string& src : sources) {
    const Expr e = parse(src, chart());
    for (int coord = 0; coord < 2; ++coord) {
      const Expr de = diff(e, coord);
      for (double r = 0.8; r < 2.4; r += 0.5)
        for (double th = 0.5; th < 2.4; th += 0.6) {
          std::array<double, 3> lo{r, th, 1.0}, hi{r, th, 1.0};
          lo[static_cast<std::size_t>(coord)] -= h;
          hi[static_cast<std::size_t>(coord)] += h;
          const double fd = (eval(e, hi) - eval(e, lo)) / (2.0 * h);
          const double an = eval(de, {r, th, 1.0});
          CHECK(std::fabs(an - fd) <= 1e-6 * (1.0 + std::fabs(fd)));
        }
    }
  }
}

TEST_CASE("differentiation is linear") {
  const Expr e1 = parse("exp(r)*sin(th)", chart());
  const Expr e2 = parse("r^2 + cos(th)", chart());
  const double a = 2.25, b = -0.75;
  // a*e1 + b*e2 assembled as a source string
  const Expr combo = parse("2.25*(exp(r)*sin(th)) + (0-0.75)*(r^2 + cos(th))",
                           chart());
  const Expr dc = diff(combo, 0);
  const Expr d1 = diff(e1, 0);
  const Expr d2 = diff(e2, 0);
  for (double r = 0.6; r < 2.5; r += 0.3)
    for (double th = 0.4; th < 2.5; th += 0.4) {
      const double lhs = eval(dc, {r, th, 0.0});
      const double rhs = a * eval(d1, {r, th, 0.0}) + b * eval(d2, {r, th, 0.0});
      CHECK(std::fabs(lhs - rhs) <= 1e-12 * (1.0 + std::fabs(rhs)));
    }
}

TEST_CASE("second derivatives commute") {
  const std::vector<std::string> sources = {
      "exp(r*th) * sin(th)",
      "r^2 * th^3 + log(r + th)",
      "cos(r) * sinh(th/2)",
  };
  for (const std::string& src : sources) {
    const Expr e = parse(src, chart());
    const Expr dxy = diff(diff(e, 0), 1);
    const Expr dyx = diff(diff(e, 1), 0);
    for (double r = 0.7; r < 2.2; r += 0.4)
      for (double th = 0.5; th < 2.2; th += 0.4) {
        const double a = eval(dxy, {r, th, 0.0});
        const double b = eval(dyx, {r, th, 0.0});
        CHECK(std::fabs(a - b) <= 1e-9 * (1.0 + std::fabs(b)));
      }
  }
}

TEST_CASE("printing round-trips bit for bit") {
  const std::vector<std::string> sources = {
      "1 + 2*3",
      "-r^2 + th/3",
      "sin(th)^2 + cos(th)^2",
      "exp(2*r)*cos(th) - sqrt(r)/th",
      "pow(r, 2.5) + arctan(th*r)",
      "1/(1 + r^2) - tanh(th)",
  };
  for (const std::string& src : sources) {
    const Expr e = parse(src, chart());
    const Expr back = parse(to_string(e), chart());
    for (double r = 0.6; r < 2.8; r += 0.37)
      for (double th = 0.4; th < 2.6; th += 0.41) {
        const double a = eval(e, {r, th, 1.0});
        const double b = eval(back, {r, th, 1.0});
        CHECK(a == b);
      }
  }
}

TEST_CASE("referenced coordinate scan") {
  const auto used = referenced_coords(parse("r^2 + sin(r)", chart()));
  CHECK(used[0]);
  CHECK_FALSE(used[1]);
  CHECK_FALSE(used[2]);
}

TEST_CASE("parser totality: arbitrary input parses or raises, never crashes") {
  // pseudo-random byte soup from the token alphabet plus junk
  const char alphabet[] = "rthp()+-*/^.,0123456789 sincoqexp_$#@\"\\";
  unsigned state = 0x12345u;
  for (int trial = 0; trial < 3000; ++trial) {
    std::string src;
    const int len = 1 + static_cast<int>(state % 24);
    for (int i = 0; i < len; ++i) {
      state = state * 1664525u + 1013904223u;
      src += alphabet[(state >> 16) % (sizeof alphabet - 1)];
    }
    try {
      const Expr e = parse(src, chart());
      (void)e;
    } catch (const SyntaxError&) {
    } catch (const UnknownSymbol&) {
    }
  }
}

TEST_CASE("chart validation") {
  Chart bad = chart();
  bad.coords[1] = "r";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  Chart bounds = chart();
  bounds.lower[0] = 5.0;
  CHECK_THROWS_AS(bounds.validate(), ConfigError);
  Chart unnamed = chart();
  unnamed.name.clear();
  CHECK_THROWS_AS(unnamed.validate(), ConfigError);
}
