#pragma once

#include <span>
#include <vector>

#include "otg/axis_planner.hpp"
#include "otg/axis_trajectory.hpp"

namespace otg {

/// Synchronized n-axis trajectory; all axes share one total duration.
struct multi_axis_trajectory {
  std::vector<axis_trajectory> axes;

  multi_axis_trajectory() = default;
  explicit multi_axis_trajectory(std::vector<axis_trajectory> a);

  std::size_t axis_count() const { return axes.size(); }
  double total_duration() const { return axes.empty() ? 0.0 : axes.front().total_duration(); }
};

/// Per-axis time-optimal durations coupled by re-planning every axis at the
/// slowest axis's duration. The dominant axis keeps its time-optimal profile.
multi_axis_trajectory plan_synchronized(std::span<const axis_state> starts,
                                        std::span<const partial_target> targets,
                                        std::span<const axis_limits> limits);

std::vector<axis_state> evaluate_all(const multi_axis_trajectory& traj, double t);

}  // namespace otg
