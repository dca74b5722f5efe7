#pragma once

// Test-only brute-force helpers. These deliberately re-derive kinematics with
// plain stepping loops instead of reusing the library's closed forms.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "otg/axis_trajectory.hpp"

namespace otg::testing {

struct euler_state {
  double p = 0.0, v = 0.0, a = 0.0;
};

/// Forward Euler integration of a jerk profile; O(T/dt) steps.
inline euler_state euler_integrate(const axis_trajectory& traj, double t_end, double dt) {
  euler_state s{traj.start().position, traj.start().velocity, traj.start().acceleration};
  double t = 0.0;
  std::size_t phase = 0;
  double phase_end = traj.phases().empty() ? 0.0 : traj.phases()[0].duration;
  while (t < t_end - 0.5 * dt) {
    while (phase < traj.phases().size() && t >= phase_end - 0.5 * dt) {
      ++phase;
      if (phase < traj.phases().size()) phase_end += traj.phases()[phase].duration;
    }
    const double j = phase < traj.phases().size() ? traj.phases()[phase].jerk : 0.0;
    s.p += s.v * dt;
    s.v += s.a * dt;
    s.a += j * dt;
    t += dt;
  }
  return s;
}

struct dense_extrema {
  double p_min, p_max, v_min, v_max, a_min, a_max;
};

inline dense_extrema sample_extrema(const axis_trajectory& traj, double dt) {
  dense_extrema e{1e300, -1e300, 1e300, -1e300, 1e300, -1e300};
  auto take = [&](const axis_state& s) {
    e.p_min = std::min(e.p_min, s.position);
    e.p_max = std::max(e.p_max, s.position);
    e.v_min = std::min(e.v_min, s.velocity);
    e.v_max = std::max(e.v_max, s.velocity);
    e.a_min = std::min(e.a_min, s.acceleration);
    e.a_max = std::max(e.a_max, s.acceleration);
  };
  take(traj.start());
  // Grids anchored at each phase start so boundary states are sampled exactly.
  double t0 = 0.0;
  for (std::size_t k = 0; k < traj.phases().size(); ++k) {
    const double dur = traj.phases()[k].duration;
    const long n = std::max(1L, static_cast<long>(std::ceil(dur / dt)));
    for (long i = 1; i <= n; ++i) {
      take(evaluate(traj, std::min(t0 + dur, t0 + i * dt)));
    }
    t0 += dur;
  }
  return e;
}

inline axis_trajectory random_trajectory(std::mt19937_64& rng, int max_phases = 7) {
  std::uniform_real_distribution<double> dur(0.0, 2.0);
  std::uniform_real_distribution<double> jerk(-5.0, 5.0);
  std::uniform_real_distribution<double> st(-3.0, 3.0);
  std::uniform_int_distribution<int> np(1, max_phases);
  axis_state s0(st(rng), st(rng), st(rng));
  std::vector<jerk_phase> phases;
  const int n = np(rng);
  for (int i = 0; i < n; ++i) phases.emplace_back(dur(rng), jerk(rng));
  return axis_trajectory(s0, std::move(phases));
}

}  // namespace otg::testing
