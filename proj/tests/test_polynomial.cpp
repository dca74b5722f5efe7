#include <doctest.h>

#include <cmath>
#include <random>

#include "otg/polynomial.hpp"

using namespace otg;

namespace {

double eval4(double a, double b, double c, double d, double e, double x) {
  return (((a * x + b) * x + c) * x + d) * x + e;
}

}  // namespace

TEST_CASE("quadratic roots") {
  auto r = solve_quadratic(1.0, -3.0, 2.0);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(1.0));
  CHECK(r[1] == doctest::Approx(2.0));
  CHECK(solve_quadratic(1.0, 0.0, 1.0).empty());
  auto lin = solve_quadratic(0.0, 2.0, -4.0);
  REQUIRE(lin.size() == 1);
  CHECK(lin[0] == doctest::Approx(2.0));
}

TEST_CASE("cubic roots on random factorizations") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const double r1 = u(rng), r2 = u(rng), r3 = u(rng);
    // (x-r1)(x-r2)(x-r3)
    const double b = -(r1 + r2 + r3);
    const double c = r1 * r2 + r1 * r3 + r2 * r3;
    const double d = -r1 * r2 * r3;
    const auto roots = solve_cubic(1.0, b, c, d);
    for (double want : {r1, r2, r3}) {
      bool found = false;
      for (double got : roots) {
        if (std::abs(got - want) < 1e-7) found = true;
      }
      CHECK(found);
    }
  }
}

TEST_CASE("quartic roots on random factorizations") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double r1 = u(rng), r2 = u(rng), r3 = u(rng), r4 = u(rng);
    const double b = -(r1 + r2 + r3 + r4);
    const double c = r1 * r2 + r1 * r3 + r1 * r4 + r2 * r3 + r2 * r4 + r3 * r4;
    const double d = -(r1 * r2 * r3 + r1 * r2 * r4 + r1 * r3 * r4 + r2 * r3 * r4);
    const double e = r1 * r2 * r3 * r4;
    const auto roots = solve_quartic(1.0, b, c, d, e);
    for (double want : {r1, r2, r3, r4}) {
      bool found = false;
      for (double got : roots) {
        if (std::abs(got - want) < 1e-6) found = true;
      }
      CHECK(found);
    }
    for (double got : roots) {
      CHECK(std::abs(eval4(1.0, b, c, d, e, got)) < 1e-6);
    }
  }
}

TEST_CASE("quartic with complex pairs keeps only real roots") {
  // (x^2+1)(x-1)(x-2) = x^4 -3x^3 +3x^2 -3x +2
  const auto roots = solve_quartic(1.0, -3.0, 3.0, -3.0, 2.0);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(1.0));
  CHECK(roots[1] == doctest::Approx(2.0));
}

TEST_CASE("piecewise polynomial evaluation and extrapolation") {
  // p(t) = t on [0,1), then constant 1 + 2(t-1) after.
  piecewise_poly pp({0.0, 1.0}, {poly3{{0.0, 1.0, 0.0, 0.0}}, poly3{{1.0, 2.0, 0.0, 0.0}}});
  CHECK(pp.eval(0.5) == doctest::Approx(0.5));
  CHECK(pp.eval(2.0) == doctest::Approx(3.0));
  CHECK(pp.eval(-1.0) == doctest::Approx(-1.0));  // first-piece extrapolation
  CHECK(pp.deriv(2.0) == doctest::Approx(2.0));
  const auto shifted = pp.offset(0.25);
  CHECK(shifted.eval(0.5) == doctest::Approx(0.75));
}

TEST_CASE("roots_in_interval clips and deduplicates") {
  // (x-0.5)^2 double root
  poly3 p{{0.25, -1.0, 1.0, 0.0}};
  const auto r = roots_in_interval(p, 0.0, 1.0);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(0.5));
  const auto none = roots_in_interval(p, 0.6, 1.0);
  CHECK(none.empty());
}
