#include <doctest.h>

#include "support/near.hpp"

#include <cmath>
#include <random>

#include "otg/axis_trajectory.hpp"
#include "support/oracles.hpp"

using namespace otg;

TEST_CASE("evaluate closed form matches the textbook cubic") {
  axis_trajectory traj(axis_state(0, 0, 0), {jerk_phase(1.0, 6.0)});
  const axis_state s = evaluate(traj, 1.0);
  CHECK(s.position == doctest::Approx(1.0));
  CHECK(s.velocity == doctest::Approx(3.0));
  CHECK(s.acceleration == doctest::Approx(6.0));
}

TEST_CASE("evaluate at t=0 returns the start state") {
  axis_trajectory traj(axis_state(1.5, -2.0, 0.25), {jerk_phase(0.7, -1.0), jerk_phase(0.3, 2.0)});
  const axis_state s = evaluate(traj, 0.0);
  CHECK(s.position == 1.5);
  CHECK(s.velocity == -2.0);
  CHECK(s.acceleration == 0.25);
}

TEST_CASE("evaluate rejects out-of-range times") {
  axis_trajectory traj(axis_state(0, 0, 0), {jerk_phase(1.0, 1.0)});
  CHECK_THROWS_AS(evaluate(traj, -0.1), time_out_of_range);
  CHECK_THROWS_AS(evaluate(traj, 1.1), time_out_of_range);
}

TEST_CASE("evaluate matches step-wise forward integration at phase boundaries") {
  std::mt19937_64 rng(12345);
  const axis_trajectory traj = otg::testing::random_trajectory(rng, 7);
  double t = 0.0;
  for (const auto& ph : traj.phases()) {
    t += ph.duration;
    const auto euler = otg::testing::euler_integrate(traj, t, 1e-6);
    const axis_state s = evaluate(traj, t);
    CHECK_NEAR(s.position, euler.p, 1e-4);
    CHECK_NEAR(s.velocity, euler.v, 1e-4);
    CHECK_NEAR(s.acceleration, euler.a, 1e-4);
  }
}

TEST_CASE("NaN and infinity are rejected at construction") {
  CHECK_THROWS_AS(axis_state(std::nan(""), 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(axis_state(0, std::numeric_limits<double>::infinity(), 0), std::invalid_argument);
  CHECK_THROWS_AS(jerk_phase(-1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(jerk_phase(1.0, std::nan("")), std::invalid_argument);
}

TEST_CASE("sub-picosecond phases are dropped at construction") {
  axis_trajectory traj(axis_state(0, 0, 0), {jerk_phase(1e-13, 5.0), jerk_phase(1.0, 1.0)});
  CHECK(traj.phases().size() == 1);
  CHECK(traj.phases()[0].jerk == 1.0);
}

TEST_CASE("concatenate") {
  SUBCASE("empty-phase trajectory is a left identity") {
    axis_trajectory t2(axis_state(1, 2, 0), {jerk_phase(0.5, 1.0)});
    axis_trajectory empty(axis_state(1, 2, 0));
    const axis_trajectory joined = concatenate(empty, t2);
    CHECK(joined == t2);
  }
  SUBCASE("evaluation crosses the seam continuously") {
    axis_trajectory t1(axis_state(0, 0, 0), {jerk_phase(1.0, 2.0)});
    const axis_state mid = evaluate(t1, 1.0);
    axis_trajectory t2(mid, {jerk_phase(1.0, -2.0)});
    const axis_trajectory joined = concatenate(t1, t2);
    const double eps = 1e-4;
    const axis_state a = evaluate(joined, 1.0 + eps);
    const axis_state b = evaluate(t2, eps);
    CHECK_NEAR(a.position, b.position, 1e-9);
    CHECK_NEAR(a.velocity, b.velocity, 1e-9);
    CHECK_NEAR(a.acceleration, b.acceleration, 1e-9);
  }
  SUBCASE("mismatched endpoints raise a continuity error") {
    axis_trajectory t1(axis_state(0, 0, 0), {jerk_phase(1.0, 2.0)});
    axis_trajectory t2(axis_state(1, 2.1, 0), {});
    CHECK_THROWS_AS(concatenate(t1, t2), continuity_error);
  }
}

TEST_CASE("extrema") {
  SUBCASE("constant velocity") {
    axis_trajectory traj(axis_state(0, 1, 0), {jerk_phase(2.0, 0.0)});
    const auto ex = extrema(traj);
    CHECK(ex.velocity.min == doctest::Approx(1.0));
    CHECK(ex.velocity.max == doctest::Approx(1.0));
    CHECK(ex.position.max == doctest::Approx(2.0));
  }
  SUBCASE("triangular acceleration peaks at the boundary") {
    axis_trajectory traj(axis_state(0, 0, 0), {jerk_phase(1.0, 6.0), jerk_phase(1.0, -6.0)});
    const auto ex = extrema(traj);
    CHECK(ex.acceleration.max == doctest::Approx(6.0));
    CHECK(ex.acceleration.min == doctest::Approx(0.0));
  }
  SUBCASE("matches dense sampling on random trajectories") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 50; ++i) {
      const axis_trajectory traj = otg::testing::random_trajectory(rng);
      const auto ex = extrema(traj);
      const auto ds = otg::testing::sample_extrema(traj, 1e-5);
      CHECK_NEAR(ex.position.min, ds.p_min, 1e-6);
      CHECK_NEAR(ex.position.max, ds.p_max, 1e-6);
      CHECK_NEAR(ex.velocity.min, ds.v_min, 1e-6);
      CHECK_NEAR(ex.velocity.max, ds.v_max, 1e-6);
      CHECK_NEAR(ex.acceleration.min, ds.a_min, 1e-6);
      CHECK_NEAR(ex.acceleration.max, ds.a_max, 1e-6);
    }
  }
}

TEST_CASE("C2 continuity at phase boundaries") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const axis_trajectory traj = otg::testing::random_trajectory(rng);
    double t = 0.0;
    for (std::size_t k = 0; k + 1 < traj.phases().size(); ++k) {
      t += traj.phases()[k].duration;
      const axis_state left = advance(traj.boundary_state(k), traj.phases()[k].jerk, traj.phases()[k].duration);
      const axis_state right = traj.boundary_state(k + 1);
      CHECK(std::abs(left.position - right.position) < 1e-9);
      CHECK(std::abs(left.velocity - right.velocity) < 1e-9);
      CHECK(std::abs(left.acceleration - right.acceleration) < 1e-9);
    }
  }
}

TEST_CASE("time reversal is an involution that swaps endpoints") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    const axis_trajectory traj = otg::testing::random_trajectory(rng);
    const axis_trajectory rev = time_reversed(traj);
    CHECK(rev.total_duration() == doctest::Approx(traj.total_duration()));
    CHECK(rev.start().position == doctest::Approx(traj.end().position));
    CHECK(rev.start().velocity == doctest::Approx(-traj.end().velocity));
    CHECK(rev.start().acceleration == doctest::Approx(traj.end().acceleration));
    const axis_trajectory back = time_reversed(rev);
    CHECK_NEAR(back.start().position, traj.start().position, 1e-9);
    CHECK_NEAR(back.start().velocity, traj.start().velocity, 1e-9);
  }
}
