#pragma once

#include <cmath>

// doctest's Approx is relative-only; most numeric checks in this suite are
// absolute-tolerance, matching the library's contract tolerances.
#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))
#define REQUIRE_NEAR(a, b, tol) REQUIRE(std::abs((a) - (b)) <= (tol))
