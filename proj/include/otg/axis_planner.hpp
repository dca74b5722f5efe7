#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "otg/axis_trajectory.hpp"

namespace otg {

/// Target state with independently defined or free components. Free fields
/// are resolved by the planner; at least one field must be defined.
struct partial_target {
  std::optional<double> position;
  std::optional<double> velocity;
  std::optional<double> acceleration;

  static partial_target full(double p, double v, double a) { return {p, v, a}; }

  void validate() const;
  bool fully_defined() const { return position && velocity && acceleration; }
  /// True when `s` matches every defined field within tol.
  bool matched_by(const axis_state& s, double tol) const;
};

enum class objective : std::uint8_t { maximize, minimize };

/// Trajectory duration request: time-optimal, or an exact total duration with
/// an optional extremization of one free target field. When several fields
/// are free the objective applies to velocity, then acceleration, then
/// position, in that order.
struct duration_spec {
  bool fixed = false;
  double total = 0.0;
  std::optional<objective> goal;

  static duration_spec time_optimal() { return {}; }
  static duration_spec fixed_total(double total, std::optional<objective> goal = std::nullopt);
};

/// Identifier of one second-order condition combination: per phase the jerk
/// pin, the duration disposition and the state pin that make the 21-equation
/// system solvable. Diagnostic; the solvers construct it alongside phases.
struct condition_set {
  enum class duration_pin : std::uint8_t { zero, solved, total_time };
  enum class state_pin : std::uint8_t {
    propagate,      // state follows from integration
    accel_limit,    // a_n pinned to a limit (or a derived safe value)
    velocity_limit, // v_n pinned to a limit (or a derived safe value)
    target          // end condition p7/v7/a7
  };

  std::array<double, 7> jerk{};            // pinned jerk value per phase
  std::array<duration_pin, 7> duration{};  // disposition per phase duration
  std::array<state_pin, 7> state{};        // per-phase state condition
  std::string family;                      // solver family that produced it

  /// Scalar condition count; always 21 (3 pins per phase).
  static constexpr int scalar_condition_count() { return 21; }
};

struct velocity_interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Closed-form single-axis planning.
///
/// Enumerates candidate condition sets for the requested target pattern and
/// duration mode, solves each (closed form, with a guarded 1-D root solve for
/// the few sets without a tractable closed form), filters by physical
/// validity and picks the minimal duration (or the extremal objective).
/// Throws infeasible_target / infeasible_duration.
axis_trajectory plan(const axis_state& start, const partial_target& target, const axis_limits& limits,
                     const duration_spec& duration = duration_spec::time_optimal());

/// Plans under time reversal and returns the forward-time trajectory that
/// ends at `end` while meeting `target_at_start` at its beginning.
axis_trajectory plan_reverse(const axis_state& end, const partial_target& target_at_start,
                             const axis_limits& limits,
                             const duration_spec& duration = duration_spec::time_optimal());

/// Adjusts defined target fields so that a trajectory leaving the target
/// cannot overshoot the velocity limits while ramping its acceleration out.
/// Both directional bounds are applied:
///   v <= v_max - max(a,0)^2 / (2 |j_min|),  v >= v_min + min(a,0)^2 / (2 j_max)
///   |a| <= sqrt(2 j (v_max - v_min)) with the braking-side jerk.
/// When the target acceleration is free, the worst admissible acceleration
/// (the acceleration limit) is assumed for the velocity bounds.
partial_target clamp_target(const partial_target& target, const axis_limits& limits);

/// Extremal velocities achievable at `end_position` (with zero acceleration)
/// at exactly `total` seconds; two fixed-duration extremization plans.
velocity_interval reachable_velocity_interval(const axis_state& start, double end_position, double total,
                                              const axis_limits& limits);

namespace detail {

struct plan_report {
  axis_trajectory trajectory;
  condition_set conditions;
  /// Value of the objective field at the end state (free-field plans).
  double objective_value = 0.0;
};

plan_report plan_with_report(const axis_state& start, const partial_target& target, const axis_limits& limits,
                             const duration_spec& duration);

}  // namespace detail

}  // namespace otg
