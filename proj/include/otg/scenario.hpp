#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "otg/collision.hpp"
#include "otg/planner.hpp"

namespace otg {

/// Scenario file rejected by schema validation.
class scenario_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct simulation_settings {
  double control_period = 0.02;
  std::uint64_t disturbance_seed = 0;
  double disturbance_stddev = 0.0;
  double default_reveal_time = 0.0;
  double duration_cap = 60.0;
};

struct scenario_obstacle {
  obstacle shape;       // inflation = vehicle radius + margin, applied at load
  double margin = 0.0;
  double reveal_time = 0.0;
};

/// One planning problem: axes, endpoint states, limits, scripted obstacles.
/// Free target fields are encoded as null or "NaN" in the file; unbounded
/// limits as null or "Inf"/"-Inf". Non-finite numbers never enter the
/// in-memory representation.
struct scenario {
  std::vector<std::string> axis_names;
  std::vector<axis_state> start;
  std::vector<partial_target> target;
  std::vector<axis_limits> limits;
  double vehicle_radius = 0.0;
  std::vector<scenario_obstacle> obstacles;
  simulation_settings simulation;

  std::size_t axis_count() const { return start.size(); }
  std::vector<obstacle> obstacle_shapes() const;
};

scenario load_scenario(const std::filesystem::path& file);

/// Atomic text write (temp file + rename).
void write_text_file(const std::filesystem::path& file, const std::string& content);

/// Per-axis trace CSV (`t,p,v,a,j`), one row per sample step.
std::string trace_csv(const axis_trajectory& traj, double dt);

/// Stable key/value summary of a plan result. Timing fields are excluded;
/// they go to a separate timings file.
std::string summary_text(const plan_result& result, const scenario& scn);
std::string timings_text(const plan_result& result);

}  // namespace otg
