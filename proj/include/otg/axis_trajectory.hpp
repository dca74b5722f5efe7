#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "otg/errors.hpp"

namespace otg {

/// Position, velocity and acceleration of a single axis at one instant.
struct axis_state {
  double position = 0.0;
  double velocity = 0.0;
  double acceleration = 0.0;

  axis_state() = default;
  axis_state(double p, double v, double a);

  bool operator==(const axis_state&) const = default;
};

bool is_finite(const axis_state& s);

/// Advance a state through `dt` seconds of constant jerk `j` (closed form).
axis_state advance(const axis_state& s, double jerk, double dt);

/// One constant-jerk phase of a trajectory.
struct jerk_phase {
  double duration = 0.0;
  double jerk = 0.0;

  jerk_phase() = default;
  jerk_phase(double t, double j);

  bool operator==(const jerk_phase&) const = default;
};

/// Per-axis state and input limits. Unset optionals mean unbounded.
struct axis_limits {
  std::optional<double> velocity_min, velocity_max;
  std::optional<double> acceleration_min, acceleration_max;
  std::optional<double> jerk_min, jerk_max;

  static axis_limits unbounded() { return {}; }
  static axis_limits symmetric(double v, double a, double j);

  /// Throws std::invalid_argument on min >= max or wrong-signed jerk bounds.
  void validate() const;
};

/// Piecewise constant-jerk trajectory for one axis.
///
/// Phases shorter than 1e-12 s are dropped at construction; the planner's
/// condition sets legitimately produce zero-duration phases. Phase-boundary
/// states are precomputed so that evaluation anywhere is a single Horner-form
/// cubic anchored at the containing phase start.
class axis_trajectory {
 public:
  axis_trajectory() = default;
  explicit axis_trajectory(axis_state start);
  axis_trajectory(axis_state start, std::vector<jerk_phase> phases);

  const axis_state& start() const { return start_; }
  const std::vector<jerk_phase>& phases() const { return phases_; }
  double total_duration() const { return total_duration_; }
  const axis_state& end() const { return boundaries_.back(); }

  /// State at the start of phase i (i in [0, phases.size()]).
  const axis_state& boundary_state(std::size_t i) const { return boundaries_[i]; }

  bool operator==(const axis_trajectory& other) const = default;

 private:
  axis_state start_{};
  std::vector<jerk_phase> phases_{};
  std::vector<axis_state> boundaries_{start_};
  double total_duration_ = 0.0;
};

/// Exact state at time t in [0, total_duration]. Throws time_out_of_range
/// beyond a 1e-9 slack that absorbs accumulated round-off in callers.
axis_state evaluate(const axis_trajectory& traj, double t);

/// Jerk at time t (right-continuous; last phase's jerk at t = T).
double jerk_at(const axis_trajectory& traj, double t);

/// Join two trajectories. The end state of `first` must match `second.start()`
/// within 1e-6 per component, else continuity_error.
axis_trajectory concatenate(const axis_trajectory& first, const axis_trajectory& second);

struct value_range {
  double min = 0.0;
  double max = 0.0;
};

struct trajectory_extrema {
  value_range position;
  value_range velocity;
  value_range acceleration;
};

/// Exact extrema over [0, T] from the roots of each piece's derivative.
trajectory_extrema extrema(const axis_trajectory& traj);

/// Trajectory running backwards in time: phases reversed, jerks negated,
/// start = (p_end, -v_end, a_end).
axis_trajectory time_reversed(const axis_trajectory& traj);

/// True when every extremum respects the (bounded) limits with `slack`.
bool within_limits(const axis_trajectory& traj, const axis_limits& limits, double slack = 1e-9);

}  // namespace otg
