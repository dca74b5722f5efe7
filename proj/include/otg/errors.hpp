#pragma once

#include <stdexcept>
#include <string>

namespace otg {

/// Base class for all planning-related failures.
class planning_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Trajectory evaluated outside [0, total_duration].
class time_out_of_range : public planning_error {
 public:
  using planning_error::planning_error;
};

/// Concatenation endpoints disagree beyond tolerance.
class continuity_error : public planning_error {
 public:
  using planning_error::planning_error;
};

/// Requested fixed duration is shorter than the time-optimal duration.
class infeasible_duration : public planning_error {
 public:
  using planning_error::planning_error;
};

/// Target state cannot be reached under the given limits.
class infeasible_target : public planning_error {
 public:
  using planning_error::planning_error;
};

/// Start or target state lies inside an inflated obstacle.
class invalid_endpoint : public planning_error {
 public:
  using planning_error::planning_error;
};

/// Every evasion candidate collided or failed to build.
class no_feasible_candidate : public planning_error {
 public:
  using planning_error::planning_error;
};

}  // namespace otg
