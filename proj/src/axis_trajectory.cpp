#include "otg/axis_trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace otg {

namespace {
constexpr double k_min_phase_duration = 1e-12;
constexpr double k_eval_slack = 1e-9;
constexpr double k_continuity_tol = 1e-6;
constexpr std::size_t k_max_phases = 32;
}  // namespace

axis_state::axis_state(double p, double v, double a) : position(p), velocity(v), acceleration(a) {
  if (!is_finite(*this)) {
    throw std::invalid_argument("axis_state: non-finite component");
  }
}

bool is_finite(const axis_state& s) {
  return std::isfinite(s.position) && std::isfinite(s.velocity) && std::isfinite(s.acceleration);
}

axis_state advance(const axis_state& s, double jerk, double dt) {
  axis_state out;
  out.position = s.position + dt * (s.velocity + dt * (0.5 * s.acceleration + dt * (jerk / 6.0)));
  out.velocity = s.velocity + dt * (s.acceleration + dt * (0.5 * jerk));
  out.acceleration = s.acceleration + dt * jerk;
  return out;
}

jerk_phase::jerk_phase(double t, double j) : duration(t), jerk(j) {
  if (!(t >= 0.0) || !std::isfinite(t) || !std::isfinite(j)) {
    throw std::invalid_argument("jerk_phase: duration must be >= 0 and finite, jerk finite");
  }
}

axis_limits axis_limits::symmetric(double v, double a, double j) {
  axis_limits l;
  l.velocity_min = -v;
  l.velocity_max = v;
  l.acceleration_min = -a;
  l.acceleration_max = a;
  l.jerk_min = -j;
  l.jerk_max = j;
  l.validate();
  return l;
}

void axis_limits::validate() const {
  auto check_pair = [](const std::optional<double>& lo, const std::optional<double>& hi, const char* what) {
    if (lo && !std::isfinite(*lo)) throw std::invalid_argument(std::string(what) + ": non-finite bound");
    if (hi && !std::isfinite(*hi)) throw std::invalid_argument(std::string(what) + ": non-finite bound");
    if (lo && hi && !(*lo < *hi)) throw std::invalid_argument(std::string(what) + ": min must be < max");
  };
  check_pair(velocity_min, velocity_max, "velocity limits");
  check_pair(acceleration_min, acceleration_max, "acceleration limits");
  check_pair(jerk_min, jerk_max, "jerk limits");
  if (jerk_max && !(*jerk_max > 0.0)) throw std::invalid_argument("jerk_max must be > 0");
  if (jerk_min && !(*jerk_min < 0.0)) throw std::invalid_argument("jerk_min must be < 0");
}

axis_trajectory::axis_trajectory(axis_state start) : start_(start), boundaries_{start} {
  if (!is_finite(start_)) throw std::invalid_argument("axis_trajectory: non-finite start");
}

axis_trajectory::axis_trajectory(axis_state start, std::vector<jerk_phase> phases) : start_(start) {
  if (!is_finite(start_)) throw std::invalid_argument("axis_trajectory: non-finite start");
  phases_.reserve(phases.size());
  for (const auto& ph : phases) {
    if (!(ph.duration >= 0.0) || !std::isfinite(ph.duration) || !std::isfinite(ph.jerk)) {
      throw std::invalid_argument("axis_trajectory: invalid phase");
    }
    if (ph.duration < k_min_phase_duration) continue;
    phases_.push_back(ph);
  }
  if (phases_.size() > k_max_phases) {
    throw std::invalid_argument("axis_trajectory: too many phases");
  }
  boundaries_.clear();
  boundaries_.reserve(phases_.size() + 1);
  boundaries_.push_back(start_);
  double t = 0.0;
  for (const auto& ph : phases_) {
    boundaries_.push_back(advance(boundaries_.back(), ph.jerk, ph.duration));
    t += ph.duration;
    if (!is_finite(boundaries_.back())) {
      throw std::invalid_argument("axis_trajectory: non-finite intermediate state");
    }
  }
  total_duration_ = t;
}

axis_state evaluate(const axis_trajectory& traj, double t) {
  const double T = traj.total_duration();
  if (t < -k_eval_slack || t > T + k_eval_slack) {
    throw time_out_of_range("evaluate: t=" + std::to_string(t) + " outside [0, " + std::to_string(T) + "]");
  }
  t = std::clamp(t, 0.0, T);
  double t0 = 0.0;
  const auto& phases = traj.phases();
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double t1 = t0 + phases[i].duration;
    if (t <= t1 || i + 1 == phases.size()) {
      return advance(traj.boundary_state(i), phases[i].jerk, t - t0);
    }
    t0 = t1;
  }
  return traj.start();
}

double jerk_at(const axis_trajectory& traj, double t) {
  const auto& phases = traj.phases();
  if (phases.empty()) return 0.0;
  double t0 = 0.0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double t1 = t0 + phases[i].duration;
    if (t < t1 || i + 1 == phases.size()) return phases[i].jerk;
    t0 = t1;
  }
  return phases.back().jerk;
}

axis_trajectory concatenate(const axis_trajectory& first, const axis_trajectory& second) {
  if (first.phases().empty()) {
    const axis_state& e = first.start();
    const axis_state& s = second.start();
    if (std::abs(e.position - s.position) > k_continuity_tol ||
        std::abs(e.velocity - s.velocity) > k_continuity_tol ||
        std::abs(e.acceleration - s.acceleration) > k_continuity_tol) {
      throw continuity_error("concatenate: endpoint mismatch");
    }
    return second;
  }
  const axis_state& e = first.end();
  const axis_state& s = second.start();
  if (std::abs(e.position - s.position) > k_continuity_tol ||
      std::abs(e.velocity - s.velocity) > k_continuity_tol ||
      std::abs(e.acceleration - s.acceleration) > k_continuity_tol) {
    throw continuity_error("concatenate: endpoint mismatch");
  }
  std::vector<jerk_phase> phases = first.phases();
  phases.insert(phases.end(), second.phases().begin(), second.phases().end());
  return axis_trajectory(first.start(), std::move(phases));
}

namespace {

void include_value(value_range& r, double v) {
  r.min = std::min(r.min, v);
  r.max = std::max(r.max, v);
}

}  // namespace

trajectory_extrema extrema(const axis_trajectory& traj) {
  trajectory_extrema ex;
  const axis_state& s0 = traj.start();
  ex.position = {s0.position, s0.position};
  ex.velocity = {s0.velocity, s0.velocity};
  ex.acceleration = {s0.acceleration, s0.acceleration};

  const auto& phases = traj.phases();
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const axis_state& b = traj.boundary_state(i);
    const double j = phases[i].jerk;
    const double dt = phases[i].duration;
    const axis_state e = traj.boundary_state(i + 1);
    include_value(ex.position, e.position);
    include_value(ex.velocity, e.velocity);
    include_value(ex.acceleration, e.acceleration);

    // Acceleration is linear per phase: endpoints suffice.
    // Velocity extrema where a(tau) = 0.
    if (j != 0.0) {
      const double tau = -b.acceleration / j;
      if (tau > 0.0 && tau < dt) {
        const axis_state m = advance(b, j, tau);
        include_value(ex.velocity, m.velocity);
        include_value(ex.position, m.position);
      }
    }
    // Position extrema where v(tau) = 0: v = v0 + a0 tau + j tau^2 / 2.
    const double half_j = 0.5 * j;
    if (half_j != 0.0) {
      const double disc = b.acceleration * b.acceleration - 4.0 * half_j * b.velocity;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        for (const double tau : {(-b.acceleration + sq) / (2.0 * half_j), (-b.acceleration - sq) / (2.0 * half_j)}) {
          if (tau > 0.0 && tau < dt) {
            include_value(ex.position, advance(b, j, tau).position);
          }
        }
      }
    } else if (b.acceleration != 0.0) {
      const double tau = -b.velocity / b.acceleration;
      if (tau > 0.0 && tau < dt) {
        include_value(ex.position, advance(b, j, tau).position);
      }
    }
  }
  return ex;
}

axis_trajectory time_reversed(const axis_trajectory& traj) {
  const axis_state e = traj.phases().empty() ? traj.start() : traj.end();
  axis_state start(e.position, -e.velocity, e.acceleration);
  std::vector<jerk_phase> phases(traj.phases().rbegin(), traj.phases().rend());
  for (auto& ph : phases) ph.jerk = -ph.jerk;
  return axis_trajectory(start, std::move(phases));
}

bool within_limits(const axis_trajectory& traj, const axis_limits& limits, double slack) {
  const trajectory_extrema ex = extrema(traj);
  if (limits.velocity_min && ex.velocity.min < *limits.velocity_min - slack) return false;
  if (limits.velocity_max && ex.velocity.max > *limits.velocity_max + slack) return false;
  if (limits.acceleration_min && ex.acceleration.min < *limits.acceleration_min - slack) return false;
  if (limits.acceleration_max && ex.acceleration.max > *limits.acceleration_max + slack) return false;
  for (const auto& ph : traj.phases()) {
    if (limits.jerk_min && ph.jerk < *limits.jerk_min - slack) return false;
    if (limits.jerk_max && ph.jerk > *limits.jerk_max + slack) return false;
  }
  return true;
}

}  // namespace otg
