#include "otg/multi_axis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace otg {

namespace {
constexpr double k_sync_tol = 1e-9;
}

multi_axis_trajectory::multi_axis_trajectory(std::vector<axis_trajectory> a) : axes(std::move(a)) {
  if (axes.empty()) throw std::invalid_argument("multi_axis_trajectory: at least one axis required");
  const double T = axes.front().total_duration();
  for (const auto& ax : axes) {
    if (std::abs(ax.total_duration() - T) > k_sync_tol) {
      throw std::invalid_argument("multi_axis_trajectory: axis durations differ beyond 1e-9");
    }
  }
}

multi_axis_trajectory plan_synchronized(std::span<const axis_state> starts,
                                        std::span<const partial_target> targets,
                                        std::span<const axis_limits> limits) {
  const std::size_t n = starts.size();
  if (n == 0 || targets.size() != n || limits.size() != n) {
    throw std::invalid_argument("plan_synchronized: empty input or size mismatch");
  }
  std::vector<axis_trajectory> optimal(n);
  std::size_t dominant = 0;
  double T = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      optimal[i] = plan(starts[i], targets[i], limits[i]);
    } catch (const planning_error& e) {
      throw infeasible_target("axis " + std::to_string(i) + ": " + e.what());
    }
    if (optimal[i].total_duration() > T) {
      T = optimal[i].total_duration();
      dominant = i;
    }
  }
  std::vector<axis_trajectory> axes(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == dominant || std::abs(optimal[i].total_duration() - T) <= k_sync_tol) {
      axes[i] = std::move(optimal[i]);
      continue;
    }
    try {
      axes[i] = plan(starts[i], targets[i], limits[i], duration_spec::fixed_total(T));
    } catch (const planning_error& e) {
      throw infeasible_target("axis " + std::to_string(i) + " at fixed duration: " + e.what());
    }
  }
  return multi_axis_trajectory(std::move(axes));
}

std::vector<axis_state> evaluate_all(const multi_axis_trajectory& traj, double t) {
  std::vector<axis_state> out;
  out.reserve(traj.axes.size());
  for (const auto& ax : traj.axes) out.push_back(evaluate(ax, t));
  return out;
}

}  // namespace otg
