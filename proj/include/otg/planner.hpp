#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otg/collision.hpp"
#include "otg/evasion.hpp"
#include "otg/multi_axis.hpp"

namespace otg {

struct plan_config {
  bool prune_candidates = true;
  bool parallel = false;
  evasion_config evasion;
};

/// Outcome of one evasion candidate, kept for diagnostics whether or not it
/// was built or collision-free.
struct candidate_report {
  candidate_spec spec;
  bool built = false;
  bool collision_free = false;
  double total_time = 0.0;
  influence_kind kind = influence_kind::single_zero;
  bool free_axis_dominant = false;
  std::optional<viastate> via;
  std::string failure;
};

struct stage_timings {
  double direct_seconds = 0.0;
  double collision_seconds = 0.0;
  double candidates_seconds = 0.0;
  double selection_seconds = 0.0;
  double total_seconds = 0.0;
};

struct plan_result {
  multi_axis_trajectory chosen;
  bool used_evasion = false;
  std::optional<collision_info> direct_collision;
  double direct_total_time = 0.0;
  /// Built candidates sorted ascending by total time; failed ones trail.
  std::vector<candidate_report> candidates;
  int prepruning_count = 0;
  std::size_t chosen_candidate = std::numeric_limits<std::size_t>::max();
  /// Fully resolved target states (free fields take the direct plan's values).
  std::vector<axis_state> resolved_targets;
  stage_timings timings;
};

/// Carries the full candidate report when no collision-free candidate exists.
class all_candidates_collide : public no_feasible_candidate {
 public:
  all_candidates_collide(const std::string& what, plan_result partial)
      : no_feasible_candidate(what), result(std::move(partial)) {}

  plan_result result;
};

/// Direct synchronized plan, exact collision check, candidate enumeration
/// and ranked selection of the fastest collision-free trajectory.
plan_result plan(std::span<const axis_state> starts, std::span<const partial_target> targets,
                 std::span<const axis_limits> limits, const std::vector<obstacle>& obstacles,
                 const plan_config& config = {});

/// Identical contract to plan(); intended to be called at control frequency.
plan_result replan_step(std::span<const axis_state> current, std::span<const partial_target> targets,
                        std::span<const axis_limits> limits, const std::vector<obstacle>& obstacles,
                        const plan_config& config = {});

}  // namespace otg
