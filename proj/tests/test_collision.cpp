#include <doctest.h>

#include "support/near.hpp"

#include <cmath>
#include <random>

#include "otg/collision.hpp"
#include "otg/oracle.hpp"

using namespace otg;

namespace {

// Straight line p(t) = p0 + v t as a single-phase trajectory.
axis_trajectory line(double p0, double v, double duration) {
  return axis_trajectory(axis_state(p0, v, 0), {jerk_phase(duration, 0.0)});
}

piecewise_poly moving_bound(double p0, double v) {
  return piecewise_poly({0.0}, {poly3{{p0, v, 0.0, 0.0}}});
}

std::mt19937_64 g_rng(2024);

axis_trajectory random_axis_traj(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> st(-2.0, 2.0);
  std::uniform_real_distribution<double> dur(0.2, 1.2);
  std::uniform_real_distribution<double> jer(-4.0, 4.0);
  std::uniform_int_distribution<int> np(1, 5);
  axis_state s0(st(rng), st(rng), st(rng));
  std::vector<jerk_phase> ph;
  for (int i = 0, n = np(rng); i < n; ++i) ph.emplace_back(dur(rng), jer(rng));
  return axis_trajectory(s0, std::move(ph));
}

}  // namespace

TEST_CASE("axis_crossings on linear cases") {
  SUBCASE("unit-velocity line against a static bound") {
    const auto cr = axis_crossings(line(0, 1, 3), piecewise_poly::constant(1.0), 3.0);
    REQUIRE(cr.size() == 1);
    CHECK_NEAR(cr[0].time, 1.0, 1e-12);
    CHECK(cr[0].direction == crossing_direction::rising);
  }
  SUBCASE("line against an approaching bound closes at twice the speed") {
    const auto cr = axis_crossings(line(0, 1, 3), moving_bound(2.0, -1.0), 3.0);
    REQUIRE(cr.size() == 1);
    CHECK_NEAR(cr[0].time, 1.0, 1e-12);
  }
  SUBCASE("tangential grazing is reported as touch") {
    // p(t) = (t-1)^2 against bound 0: double root at t=1.
    axis_trajectory traj(axis_state(1, -2, 2), {jerk_phase(2.0, 0.0)});
    const auto cr = axis_crossings(traj, piecewise_poly::constant(0.0), 2.0);
    REQUIRE(cr.size() == 1);
    CHECK(cr[0].direction == crossing_direction::touch);
    CHECK_NEAR(cr[0].time, 1.0, 1e-7);
  }
}

TEST_CASE("axis_crossings match a dense sign scan on random cubics") {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int rep = 0; rep < 200; ++rep) {
    const axis_trajectory traj = random_axis_traj(g_rng);
    const piecewise_poly bound({0.0}, {poly3{{u(g_rng), u(g_rng), 0.5 * u(g_rng), u(g_rng) / 6.0}}});
    const double T = traj.total_duration();
    const auto cr = axis_crossings(traj, bound, T);

    // dense sign scan + bisection refinement
    const double dt = 1e-4;
    auto f = [&](double t) { return evaluate(traj, t).position - bound.eval(t); };
    std::vector<double> found;
    double prev = f(0.0);
    for (double t = dt; t <= T + 1e-12; t += dt) {
      const double cur = f(std::min(t, T));
      if ((prev < 0.0) != (cur < 0.0)) {
        double a = t - dt, b = std::min(t, T), fa = prev;
        for (int it = 0; it < 60; ++it) {
          const double m = 0.5 * (a + b);
          const double fm = f(m);
          if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        found.push_back(0.5 * (a + b));
      }
      prev = cur;
    }
    // every sign-change root must be matched by a reported crossing
    for (double t_ref : found) {
      bool matched = false;
      for (const auto& c : cr) matched = matched || std::abs(c.time - t_ref) < 1e-7;
      CHECK(matched);
    }
  }
}

TEST_CASE("first_collision basics") {
  SUBCASE("trajectory wholly on one side gives no collision") {
    multi_axis_trajectory traj({line(0, 1, 2), line(5, 0, 2)});
    const obstacle obs = obstacle::box({1.0, 0.0}, {1.5, 1.0}, 0.0);
    CHECK_FALSE(first_collision(traj, obs).has_value());
  }
  SUBCASE("1D linear crossing enters at t=1") {
    multi_axis_trajectory traj({line(0, 1, 3)});
    const obstacle obs = obstacle::box({1.0}, {2.0}, 0.0);
    const auto hit = first_collision(traj, obs);
    REQUIRE(hit.has_value());
    CHECK_NEAR(hit->time, 1.0, 1e-9);
    CHECK_NEAR(hit->states[0].position, 1.0, 1e-9);
    CHECK_NEAR(hit->states[0].velocity, 1.0, 1e-12);
  }
  SUBCASE("start inside raises invalid_endpoint") {
    multi_axis_trajectory traj({line(1.5, 1, 1)});
    const obstacle obs = obstacle::box({1.0}, {2.0}, 0.0);
    CHECK_THROWS_AS(first_collision(traj, obs), invalid_endpoint);
  }
}

TEST_CASE("collides_any picks the earliest obstacle, ties to lowest index") {
  multi_axis_trajectory traj({line(0, 1, 4)});
  const obstacle late = obstacle::box({1.0}, {1.5}, 0.0);
  const obstacle early = obstacle::box({0.5}, {0.8}, 0.0);
  CHECK_FALSE(collides_any(traj, {}).has_value());
  const auto one = collides_any(traj, {late});
  REQUIRE(one.has_value());
  CHECK(one->first == 0);
  const auto both = collides_any(traj, {late, early});
  REQUIRE(both.has_value());
  CHECK(both->first == 1);
  CHECK_NEAR(both->second.time, 0.5, 1e-9);
}

TEST_CASE("obstacle inflation symmetry") {
  // Inflating by delta is the same as shifting both bounds outward.
  multi_axis_trajectory traj({line(0, 1, 4)});
  obstacle a = obstacle::box({2.0}, {3.0}, 0.25);
  obstacle b = obstacle::box({1.75}, {3.25}, 0.0);
  const auto ha = first_collision(traj, a);
  const auto hb = first_collision(traj, b);
  REQUIRE(ha.has_value());
  REQUIRE(hb.has_value());
  CHECK_NEAR(ha->time, hb->time, 1e-9);
}

TEST_CASE("detector agrees with the dense oracle on random moving scenarios") {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> pos(-2.5, 2.5);
  std::uniform_real_distribution<double> vel(-1.5, 1.5);
  std::uniform_real_distribution<double> wid(0.3, 1.5);
  int collisions = 0;
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<axis_trajectory> axes;
    obstacle obs;
    obs.inflation = 0.25 * u01(g_rng);
    const int n = 2 + (rep % 2);
    const bool aim_at_path = rep % 2 == 0;  // half the scenarios straddle the path
    for (int k = 0; k < n; ++k) {
      axes.push_back(random_axis_traj(g_rng));
      const double w = wid(g_rng);
      const double v = vel(g_rng);
      const double acc = 0.4 * vel(g_rng);
      double lo = pos(g_rng);
      if (aim_at_path) {
        const double t_hit = 0.3 + 0.5 * u01(g_rng) * axes.back().total_duration();
        const double p_hit = evaluate(axes.back(), std::min(t_hit, axes.back().total_duration())).position;
        lo = p_hit - v * t_hit - 0.5 * acc * t_hit * t_hit - w * u01(g_rng);
      }
      obs.axes.push_back({piecewise_poly({0.0}, {poly3{{lo, v, 0.5 * acc, 0.0}}}),
                          piecewise_poly({0.0}, {poly3{{lo + w, v, 0.5 * acc, 0.0}}})});
    }
    double T = axes[0].total_duration();
    for (auto& ax : axes) T = std::min(T, ax.total_duration());
    // Trim to a common duration by truncating phases.
    std::vector<axis_trajectory> trimmed;
    for (auto& ax : axes) {
      std::vector<jerk_phase> ph;
      double acc_t = 0.0;
      for (const auto& q : ax.phases()) {
        if (acc_t + q.duration >= T) {
          ph.emplace_back(T - acc_t, q.jerk);
          break;
        }
        ph.push_back(q);
        acc_t += q.duration;
      }
      trimmed.emplace_back(ax.start(), std::move(ph));
    }
    multi_axis_trajectory traj(std::move(trimmed));

    std::optional<collision_info> exact;
    try {
      exact = first_collision(traj, obs);
    } catch (const invalid_endpoint&) {
      continue;  // start or end inside: outside the detector's contract
    }
    const double dt = 1e-4;
    const auto dense = otg::oracle::dense_collision_check(traj, obs, dt);
    if (dense.has_value() != exact.has_value()) {
      CAPTURE(rep);
      CHECK(dense.has_value() == exact.has_value());
      continue;
    }
    if (exact) {
      ++collisions;
      CHECK(std::abs(exact->time - *dense) <= 2.0 * dt);
      CHECK(exact->time <= *dense + 1e-12);
    }
  }
  CHECK(collisions > 20);  // the suite must actually exercise collisions
}

TEST_CASE("enlarging an obstacle never hides a collision") {
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  for (int rep = 0; rep < 100; ++rep) {
    multi_axis_trajectory traj({random_axis_traj(g_rng)});
    const double lo = pos(g_rng), w = 0.4;
    obstacle small = obstacle::box({lo}, {lo + w}, 0.0);
    obstacle big = obstacle::box({lo - 0.2}, {lo + w + 0.2}, 0.0);
    std::optional<collision_info> hs, hb;
    try {
      hs = first_collision(traj, small);
      hb = first_collision(traj, big);
    } catch (const invalid_endpoint&) {
      continue;
    }
    if (hs) CHECK(hb.has_value());
  }
}
