#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "otg/multi_axis.hpp"
#include "otg/polynomial.hpp"

namespace otg {

/// Moving interval of one obstacle axis: lower/upper bound positions as
/// piecewise polynomials of rank <= 3 in time. Bounds are extrapolated by
/// their final piece beyond the covered horizon.
struct obstacle_axis {
  piecewise_poly lower;
  piecewise_poly upper;
};

/// Axis-aligned moving hyperrectangle, inflated outward by vehicle radius
/// plus margin on every axis.
struct obstacle {
  std::vector<obstacle_axis> axes;
  double inflation = 0.0;

  static obstacle box(const std::vector<double>& lower, const std::vector<double>& upper, double inflation);

  /// Checks lower(t) < upper(t) after inflation over [0, horizon].
  void validate(double horizon) const;

  double lower_at(std::size_t axis, double t) const { return axes[axis].lower.eval(t) - inflation; }
  double upper_at(std::size_t axis, double t) const { return axes[axis].upper.eval(t) + inflation; }

  /// Strictly inside the inflated box on every axis.
  bool strictly_inside(const std::vector<axis_state>& states, double t) const;

  /// Obstacle motion re-anchored so scenario time `t0` becomes plan time 0.
  obstacle time_shifted(double t0) const;
};

enum class crossing_direction { rising, falling, touch };

struct crossing {
  double time = 0.0;
  crossing_direction direction = crossing_direction::rising;
};

/// Time interval during which one axis's position lies inside its inflated
/// obstacle interval (closed; tangential touches give zero-length intervals).
struct time_interval {
  double enter = 0.0;
  double leave = 0.0;
};

struct collision_info {
  double time = 0.0;
  std::vector<axis_state> states;
  /// Per-axis inside interval bracketing the collision time.
  std::vector<time_interval> axis_intervals;
};

/// Position polynomial of an axis trajectory (one cubic piece per phase).
piecewise_poly position_polynomial(const axis_trajectory& traj);

/// All real roots of trajectory position minus bound inside [0, horizon],
/// tagged with the sign-change direction (double roots tagged `touch`).
std::vector<crossing> axis_crossings(const axis_trajectory& traj, const piecewise_poly& bound, double horizon);

/// Inside intervals of one axis against an inflated obstacle axis.
std::vector<time_interval> axis_inside_intervals(const axis_trajectory& traj, const obstacle_axis& bounds,
                                                 double inflation, double horizon);

/// Earliest time at which every axis is simultaneously inside, if any.
/// Throws invalid_endpoint when the start or end state is strictly inside.
std::optional<collision_info> first_collision(const multi_axis_trajectory& traj, const obstacle& obs);

/// Earliest collision across all obstacles; ties go to the lowest index.
std::optional<std::pair<std::size_t, collision_info>> collides_any(const multi_axis_trajectory& traj,
                                                                   const std::vector<obstacle>& obstacles);

}  // namespace otg
