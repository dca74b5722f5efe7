#pragma once

#include <Eigen/Dense>
#include <optional>

#include "otg/axis_planner.hpp"
#include "otg/collision.hpp"
#include "otg/multi_axis.hpp"

// Brute-force reference computations used by tests and the sampling-map CLI
// command. Never used by the planning path.

namespace otg::oracle {

/// Sampled map of segment times over a grid of viastate velocities (zero
/// viastate acceleration). Infeasible cells are marked in `feasible`.
struct viastate_time_map {
  Eigen::VectorXd vx;  // bound axis 0 velocity grid
  Eigen::VectorXd vy;  // bound axis 1 velocity grid
  Eigen::MatrixXd t1;
  Eigen::MatrixXd t2;
  Eigen::MatrixXd total;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> feasible;

  struct min_cell {
    int ix = -1;
    int iy = -1;
    double total = 0.0;
  };
  std::optional<min_cell> minimum() const;
};

/// For every grid velocity vector, plans both segments fully defined and
/// records the synchronized segment times.
viastate_time_map grid_viastate_time_map(const std::array<axis_state, 2>& start,
                                         const std::array<double, 2>& via_position,
                                         const std::array<axis_state, 2>& target,
                                         const std::array<axis_limits, 2>& limits, int resolution,
                                         const std::array<double, 2>& v0_range,
                                         const std::array<double, 2>& v1_range);

/// First sample time strictly inside the inflated obstacle on all axes.
/// Independent of the exact detector: plain sampling with local bound
/// evaluation.
std::optional<double> dense_collision_check(const multi_axis_trajectory& traj, const obstacle& obs, double dt);

struct grid_search_result {
  double duration = 0.0;
  double grid_tolerance = 0.0;
  bool found = false;
};

/// Exhaustive search over discretized bang-singular-bang switching
/// structures; durations are exact (velocity and position closed by the
/// cruise and second hold), limits checked by dense sampling.
grid_search_result switching_time_grid_search(const axis_state& start, const axis_state& target,
                                              const axis_limits& limits, int resolution);

}  // namespace otg::oracle
