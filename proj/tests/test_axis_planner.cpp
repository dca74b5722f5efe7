#include <doctest.h>

#include "support/near.hpp"

#include <cmath>
#include <random>

#include "otg/axis_planner.hpp"
#include "otg/fuzz.hpp"

using namespace otg;

namespace {

axis_limits jerk_only(double j) {
  axis_limits l;
  l.jerk_min = -j;
  l.jerk_max = j;
  return l;
}

axis_state end_of(const axis_trajectory& t) { return t.phases().empty() ? t.start() : t.end(); }

}  // namespace

TEST_CASE("rest-to-rest with only jerk bounded is the symmetric S-curve") {
  const double d = 1.0;
  const axis_trajectory traj =
      plan(axis_state(0, 0, 0), partial_target::full(d, 0, 0), jerk_only(1.0));
  const double T_expect = std::cbrt(32.0 * d);
  CHECK_NEAR(traj.total_duration(), T_expect, 1e-6);
  REQUIRE(traj.phases().size() == 4);
  CHECK(traj.phases()[0].jerk == doctest::Approx(1.0));
  CHECK(traj.phases()[1].jerk == doctest::Approx(-1.0));
  CHECK(traj.phases()[2].jerk == doctest::Approx(-1.0));
  CHECK(traj.phases()[3].jerk == doctest::Approx(1.0));
  for (const auto& ph : traj.phases()) CHECK_NEAR(ph.duration, T_expect / 4.0, 1e-6);
  const axis_state e = end_of(traj);
  CHECK_NEAR(e.position, d, 1e-9);
  CHECK_NEAR(e.velocity, 0.0, 1e-9);
  CHECK_NEAR(e.acceleration, 0.0, 1e-9);
}

TEST_CASE("already-at-target is the empty trajectory") {
  const axis_trajectory traj =
      plan(axis_state(0, 0, 0), partial_target::full(0, 0, 0), axis_limits::symmetric(1, 1, 1));
  CHECK(traj.total_duration() == 0.0);
  CHECK(traj.phases().empty());
}

TEST_CASE("defined target beyond the velocity limit is infeasible") {
  partial_target tgt;
  tgt.velocity = 5.0;
  CHECK_THROWS_AS(plan(axis_state(0, 0, 0), tgt, axis_limits::symmetric(1, 1, 1)), infeasible_target);
}

TEST_CASE("fixed duration below the optimum is infeasible") {
  const axis_limits lim = axis_limits::symmetric(2, 2, 2);
  const axis_trajectory opt = plan(axis_state(0, 0, 0), partial_target::full(1, 0, 0), lim);
  CHECK_THROWS_AS(plan(axis_state(0, 0, 0), partial_target::full(1, 0, 0), lim,
                       duration_spec::fixed_total(0.5 * opt.total_duration())),
                  infeasible_duration);
}

TEST_CASE("fixed duration reproduces the requested total exactly") {
  const axis_limits lim = axis_limits::symmetric(2, 2, 2);
  const axis_trajectory opt = plan(axis_state(0, 0.5, 0), partial_target::full(2, 0, 0), lim);
  for (double factor : {1.0, 1.2, 1.7, 2.5}) {
    const double T = opt.total_duration() * factor;
    const axis_trajectory traj =
        plan(axis_state(0, 0.5, 0), partial_target::full(2, 0, 0), lim, duration_spec::fixed_total(T));
    CHECK_NEAR(traj.total_duration(), T, 1e-9);
    const axis_state e = end_of(traj);
    CHECK_NEAR(e.position, 2.0, 1e-6);
    CHECK_NEAR(e.velocity, 0.0, 1e-6);
    CHECK_NEAR(e.acceleration, 0.0, 1e-6);
  }
}

TEST_CASE("free velocity: maximize gains and minimize loses against time-optimal") {
  // Qualitative shape of the fixed-duration behavior with a free velocity
  // degree of freedom: the extra time is spent gaining (or losing) velocity.
  axis_limits lim = axis_limits::symmetric(3, 1.5, 2);
  partial_target tgt;
  tgt.position = 2.0;
  tgt.acceleration = 0.5;
  const detail::plan_report opt =
      detail::plan_with_report(axis_state(0, 0, 0), tgt, lim, duration_spec::time_optimal());
  const double T_opt = opt.trajectory.total_duration();
  const double v_opt = end_of(opt.trajectory).velocity;
  CHECK(v_opt > 0.0);

  const double T = T_opt + 2.5;
  const detail::plan_report mx =
      detail::plan_with_report(axis_state(0, 0, 0), tgt, lim, duration_spec::fixed_total(T, objective::maximize));
  const detail::plan_report mn =
      detail::plan_with_report(axis_state(0, 0, 0), tgt, lim, duration_spec::fixed_total(T, objective::minimize));
  const double v_max = end_of(mx.trajectory).velocity;
  const double v_min = end_of(mn.trajectory).velocity;
  CHECK(v_max > v_opt);
  CHECK(v_min < 0.0);
  CHECK(v_min < v_opt);
  CHECK_NEAR(mx.trajectory.total_duration(), T, 1e-9);
  CHECK_NEAR(mn.trajectory.total_duration(), T, 1e-9);
}

TEST_CASE("clamp_target") {
  SUBCASE("velocity bound from the worst-case acceleration") {
    axis_limits lim;
    lim.acceleration_min = -2.0;
    lim.acceleration_max = 2.0;
    lim.jerk_min = -4.0;
    lim.jerk_max = 4.0;
    lim.velocity_min = -1.0;
    lim.velocity_max = 10.0;
    partial_target tgt;
    tgt.velocity = -10.0;
    const partial_target out = clamp_target(tgt, lim);
    CHECK(*out.velocity == doctest::Approx(-0.5));  // v_min + a^2/(2 j) = -1 + 4/8
  }
  SUBCASE("acceleration bound from the velocity span") {
    axis_limits lim;
    lim.jerk_min = -2.0;
    lim.jerk_max = 2.0;
    lim.velocity_min = 0.0;
    lim.velocity_max = 4.0;
    partial_target tgt;
    tgt.acceleration = 10.0;
    const partial_target out = clamp_target(tgt, lim);
    CHECK(*out.acceleration == doctest::Approx(4.0));  // sqrt(2*2*(4-0))
  }
  SUBCASE("already-safe targets are unchanged") {
    const axis_limits lim = axis_limits::symmetric(5, 3, 10);
    partial_target tgt;
    tgt.velocity = 0.0;
    tgt.acceleration = 0.5;
    const partial_target out = clamp_target(tgt, lim);
    CHECK(*out.velocity == 0.0);
    CHECK(*out.acceleration == 0.5);
  }
  SUBCASE("idempotence") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int i = 0; i < 200; ++i) {
      axis_limits lim = axis_limits::symmetric(std::abs(u(rng)) + 0.2, std::abs(u(rng)) + 0.2, std::abs(u(rng)) + 0.2);
      partial_target tgt;
      tgt.velocity = u(rng);
      tgt.acceleration = u(rng);
      const partial_target once = clamp_target(tgt, lim);
      const partial_target twice = clamp_target(once, lim);
      CHECK_NEAR(*once.velocity, *twice.velocity, 1e-12);
      CHECK_NEAR(*once.acceleration, *twice.acceleration, 1e-12);
    }
  }
}

TEST_CASE("plan_reverse") {
  const axis_limits lim = axis_limits::symmetric(3, 2, 4);
  SUBCASE("reverse of a rest-to-rest plan mirrors the forward plan") {
    // The forward problem here is the reversed one: driving from the end
    // state back to the start-target; plan_reverse's output is its mirror.
    const axis_trajectory fwd = plan(axis_state(1, 0, 0), partial_target::full(0, 0, 0), lim);
    const axis_trajectory rev = plan_reverse(axis_state(1, 0, 0), partial_target::full(0, 0, 0), lim);
    REQUIRE(rev.phases().size() == fwd.phases().size());
    const std::size_t n = fwd.phases().size();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK_NEAR(rev.phases()[i].duration, fwd.phases()[n - 1 - i].duration, 1e-9);
      CHECK_NEAR(rev.phases()[i].jerk, -fwd.phases()[n - 1 - i].jerk, 1e-9);
    }
  }
  SUBCASE("evaluating at the total duration lands on the requested end") {
    partial_target at_start;
    at_start.position = 0.0;
    at_start.velocity = 0.0;
    at_start.acceleration = 0.0;
    const axis_state end_state(2.0, 1.0, 0.0);
    const axis_trajectory rev = plan_reverse(end_state, at_start, lim);
    const axis_state e = evaluate(rev, rev.total_duration());
    CHECK_NEAR(e.position, end_state.position, 1e-6);
    CHECK_NEAR(e.velocity, end_state.velocity, 1e-6);
    CHECK_NEAR(e.acceleration, end_state.acceleration, 1e-6);
  }
  SUBCASE("duration equals the forward plan of the reversed inputs") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int i = 0; i < 300; ++i) {
      const axis_state end(u(rng), u(rng), u(rng) * 0.8);
      const partial_target at_start = partial_target::full(u(rng), u(rng), u(rng) * 0.8);
      axis_trajectory rev, fwd;
      try {
        rev = plan_reverse(end, at_start, lim);
        fwd = plan(axis_state(*at_start.position, *at_start.velocity, *at_start.acceleration),
                   partial_target::full(end.position, end.velocity, end.acceleration), lim);
      } catch (const planning_error&) {
        continue;
      }
      CHECK_NEAR(rev.total_duration(), fwd.total_duration(), 1e-9);
    }
  }
}

TEST_CASE("reachable velocity interval") {
  const axis_limits lim = jerk_only(1.0);
  SUBCASE("degenerate total equals the time-optimal free velocity") {
    partial_target tgt;
    tgt.position = 1.0;
    tgt.acceleration = 0.0;
    const detail::plan_report opt =
        detail::plan_with_report(axis_state(0, 0, 0), tgt, lim, duration_spec::time_optimal());
    const double T = opt.trajectory.total_duration();
    const velocity_interval vi = reachable_velocity_interval(axis_state(0, 0, 0), 1.0, T, lim);
    const double v_opt = end_of(opt.trajectory).velocity;
    CHECK_NEAR(vi.lo, v_opt, 1e-5);
    CHECK_NEAR(vi.hi, v_opt, 1e-5);
  }
  SUBCASE("symmetric problem gives a symmetric interval") {
    const velocity_interval vi = reachable_velocity_interval(axis_state(0, 0, 0), 0.0, 2.0, lim);
    CHECK_NEAR(vi.lo, -vi.hi, 1e-6);
    CHECK(vi.hi > 0.0);
  }
  SUBCASE("widening the total never shrinks the interval") {
    // Holds when the total leaves room to loiter near rest. For tight budgets
    // the extra time must be burned in velocity detours that also consume
    // position budget, and the interval genuinely shifts (verified against a
    // brute-force profile sampler), so the instances here keep gentle starts
    // and generous totals.
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const axis_limits lim2 = axis_limits::symmetric(4, 3, 5);
    for (int i = 0; i < 100; ++i) {
      const axis_state start(u(rng), u(rng), u(rng));
      const double end_pos = start.position + 2.0 * u(rng);
      partial_target tgt;
      tgt.position = end_pos;
      tgt.acceleration = 0.0;
      double T0;
      try {
        T0 = plan(start, tgt, lim2).total_duration();
      } catch (const planning_error&) {
        continue;
      }
      const double T1 = std::max(T0, 1.0) * 2.0;
      const double T2 = T1 * 1.5;
      velocity_interval a, b;
      try {
        a = reachable_velocity_interval(start, end_pos, T1, lim2);
        b = reachable_velocity_interval(start, end_pos, T2, lim2);
      } catch (const planning_error&) {
        continue;
      }
      CHECK(b.lo <= a.lo + 1e-6);
      CHECK(b.hi >= a.hi - 1e-6);
    }
  }
}

TEST_CASE("start states violating limits are recovered first") {
  axis_limits lim = axis_limits::symmetric(2, 1, 2);
  // Acceleration above the bound.
  const axis_trajectory t1 = plan(axis_state(0, 0, 1.8), partial_target::full(3, 0, 0), lim);
  const axis_state e1 = end_of(t1);
  CHECK_NEAR(e1.position, 3.0, 1e-6);
  // Velocity above the bound.
  const axis_trajectory t2 = plan(axis_state(0, 3.0, 0), partial_target::full(4, 0, 0), lim);
  const axis_state e2 = end_of(t2);
  CHECK_NEAR(e2.position, 4.0, 1e-6);
  CHECK_NEAR(e2.velocity, 0.0, 1e-6);
}

TEST_CASE("condition sets carry exactly 21 scalar conditions") {
  CHECK(condition_set::scalar_condition_count() == 21);
  const detail::plan_report rep = detail::plan_with_report(
      axis_state(0, 0, 0), partial_target::full(1, 0, 0), axis_limits::symmetric(2, 2, 2),
      duration_spec::time_optimal());
  int conditions = 0;
  for (int i = 0; i < 7; ++i) conditions += 3;  // jerk pin + duration + state per phase
  CHECK(conditions == condition_set::scalar_condition_count());
  CHECK_FALSE(rep.conditions.family.empty());
}

TEST_CASE("planner fuzz smoke (small)") {
  const auto rep = otg::fuzz::run(2000, 424242);
  for (const auto& f : rep.failures) {
    CAPTURE(f.index);
    CAPTURE(f.seed);
    CAPTURE(f.reason);
    CHECK(false);
  }
  CHECK(rep.failures.empty());
}
