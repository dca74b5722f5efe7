#include <doctest.h>

#include "support/near.hpp"

#include <random>

#include "otg/multi_axis.hpp"

using namespace otg;

TEST_CASE("single axis synchronization equals the plain time-optimal plan") {
  const axis_limits lim = axis_limits::symmetric(3, 2, 4);
  const axis_state start(0, 0, 0);
  const partial_target tgt = partial_target::full(2, 0, 0);
  const axis_trajectory solo = plan(start, tgt, lim);
  const multi_axis_trajectory multi = plan_synchronized({{start}}, {{tgt}}, {{lim}});
  REQUIRE(multi.axis_count() == 1);
  CHECK(multi.axes[0] == solo);
}

TEST_CASE("identical axes stay identical and keep their optimal duration") {
  const axis_limits lim = axis_limits::symmetric(3, 2, 4);
  std::vector<axis_state> starts{axis_state(0, 0.5, 0), axis_state(0, 0.5, 0)};
  std::vector<partial_target> tgts{partial_target::full(3, 0, 0), partial_target::full(3, 0, 0)};
  std::vector<axis_limits> lims{lim, lim};
  const multi_axis_trajectory multi = plan_synchronized(starts, tgts, lims);
  CHECK(multi.axes[0] == multi.axes[1]);
  CHECK_NEAR(multi.axes[0].total_duration(), plan(starts[0], tgts[0], lim).total_duration(), 1e-12);
}

TEST_CASE("slow axis dominates; it keeps its bit-identical optimal profile") {
  const axis_limits lim = axis_limits::symmetric(3, 2, 4);
  std::vector<axis_state> starts{axis_state(0, 0, 0), axis_state(0, 0, 0)};
  std::vector<partial_target> tgts{partial_target::full(0.5, 0, 0), partial_target::full(6, 0, 0)};
  std::vector<axis_limits> lims{lim, lim};
  const axis_trajectory fast = plan(starts[0], tgts[0], lim);
  const axis_trajectory slow = plan(starts[1], tgts[1], lim);
  REQUIRE(slow.total_duration() > fast.total_duration());
  const multi_axis_trajectory multi = plan_synchronized(starts, tgts, lims);
  CHECK(multi.axes[1] == slow);
  CHECK_NEAR(multi.axes[0].total_duration(), slow.total_duration(), 1e-9);
  const axis_state e0 = evaluate(multi.axes[0], multi.total_duration());
  CHECK_NEAR(e0.position, 0.5, 1e-6);
  CHECK_NEAR(e0.velocity, 0.0, 1e-6);
}

TEST_CASE("equal-duration invariant and evaluate_all consistency") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const axis_limits lim = axis_limits::symmetric(4, 3, 5);
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<axis_state> starts;
    std::vector<partial_target> tgts;
    std::vector<axis_limits> lims;
    const int n = 2 + rep % 3;
    for (int k = 0; k < n; ++k) {
      starts.emplace_back(u(rng), 0.5 * u(rng), 0.5 * u(rng));
      tgts.push_back(partial_target::full(u(rng) * 3.0, 0.0, 0.0));
      lims.push_back(lim);
    }
    multi_axis_trajectory multi;
    try {
      multi = plan_synchronized(starts, tgts, lims);
    } catch (const planning_error&) {
      continue;
    }
    const double T = multi.total_duration();
    double t_opt_max = 0.0;
    for (int k = 0; k < n; ++k) {
      CHECK_NEAR(multi.axes[k].total_duration(), T, 1e-9);
      t_opt_max = std::max(t_opt_max, plan(starts[k], tgts[k], lims[k]).total_duration());
    }
    CHECK_NEAR(T, t_opt_max, 1e-9);  // synchronization never exceeds the slowest axis
    std::uniform_real_distribution<double> ut(0.0, T);
    const double t = ut(rng);
    const auto all = evaluate_all(multi, t);
    for (int k = 0; k < n; ++k) {
      const axis_state s = evaluate(multi.axes[k], t);
      CHECK(all[k] == s);
    }
    const auto at0 = evaluate_all(multi, 0.0);
    for (int k = 0; k < n; ++k) CHECK(at0[k] == starts[k]);
  }
}
