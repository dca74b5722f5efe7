#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "otg/axis_planner.hpp"
#include "otg/collision.hpp"
#include "otg/multi_axis.hpp"

namespace otg {

/// A tradeoff-curve intersection failed to produce a usable root; the
/// candidate is dropped.
class tradeoff_failure : public planning_error {
 public:
  using planning_error::planning_error;
};

/// A candidate whose viastate coincides with both endpoints.
class degenerate_candidate : public planning_error {
 public:
  using planning_error::planning_error;
};

enum class face : std::uint8_t { low, high };

/// One evasion candidate: the two temporally disconnected ("bound") axes,
/// the obstacle face passed on the disconnecting axis, and the face of the
/// dominant axis the corner is taken from (the collision's entry face).
struct candidate_spec {
  std::array<std::size_t, 2> bound_axes{};  // dominant axis first
  face side = face::low;                    // face along bound_axes[1]
  face entry = face::low;                   // face along bound_axes[0]
};

struct candidate_enumeration {
  std::vector<candidate_spec> candidates;
  int prepruning_count = 0;  // n! / (n-2)!
};

/// Bound-axis pairs always contain the dominant axis of motion at the
/// collision (largest |velocity|); each retained pair yields one candidate
/// per side. With pruning disabled every unordered pair is kept.
candidate_enumeration enumerate_candidates(std::size_t n_axes, const collision_info& collision,
                                           const multi_axis_trajectory& direct, bool prune = true);

/// Full state of every axis at the viastate passage.
struct viastate {
  std::vector<axis_state> states;
  double pass_time = 0.0;
};

/// Second-order polynomial fitted exactly through three points; the curve's
/// abscissa is its own parameterization (y(x) for segment one, x(y) for
/// segment two).
struct tradeoff_curve {
  double a = 0.0, b = 0.0, c = 0.0;

  double eval(double x) const { return (a * x + b) * x + c; }
};

/// Exact interpolating quadratic through three points with distinct
/// abscissae (throws std::invalid_argument otherwise).
tradeoff_curve fit_tradeoff(const Eigen::Vector2d& p_a, const Eigen::Vector2d& p_mid, const Eigen::Vector2d& p_b);

struct tradeoff_bracket {
  double x_lo = 0.0, x_hi = 0.0;
  double y_lo = 0.0, y_hi = 0.0;
};

/// Intersection of y = c1(x) with x = c2(y): substituting produces a quartic
/// whose real root inside the bracket is the optimal tradeoff velocity.
Eigen::Vector2d intersect_tradeoffs(const tradeoff_curve& c1, const tradeoff_curve& c2,
                                    const tradeoff_bracket& bracket);

/// Two-axis subproblem for the bound axes of one candidate.
struct bound_problem {
  std::array<axis_state, 2> start;
  std::array<axis_state, 2> target;   // fully defined per axis
  std::array<double, 2> via_position; // inflated obstacle corner
  std::array<axis_limits, 2> limits;
  std::array<int, 2> away_sign;       // +1: evade toward larger positions
};

enum class influence_kind : std::uint8_t {
  single_zero,      // opposite segment-optimal signs -> zero velocity
  single_min,       // both positive -> minimum optimum
  single_max,       // both negative -> maximum optimum
  multi_case1,      // both segment optima compatible
  multi_case2,      // first segment dominates (optimum at p2)
  multi_case3,      // second segment dominates (optimum at p4)
  multi_case4       // quartic tradeoff intersection
};

struct bound_solution {
  Eigen::Vector2d v_via = Eigen::Vector2d::Zero();
  double t1 = 0.0;
  double t2 = 0.0;
  influence_kind kind = influence_kind::single_zero;
};

/// Tradeoff construction data for the multiple-influence case (p1..p10 in
/// the paper's numbering; index 0 unused).
struct tradeoff_points {
  std::array<Eigen::Vector2d, 11> p{};
  int dominant_segment1_axis = 0;  // index within the bound pair
  int dominant_segment2_axis = 1;
  influence_kind kind = influence_kind::multi_case4;
};

/// Free-velocity time-optimal probes for both axes and segments; decides
/// single vs multiple velocity influence and computes the optimal viastate
/// velocity vector with zero viastate acceleration.
bound_solution optimal_bound_velocity(const bound_problem& prob);

/// Reachable-velocity interval intersection for the non-dominant bound
/// component at fixed segment times; picks the end that curves away from
/// the obstacle. Returns std::nullopt when the intersection is empty (the
/// caller falls through to the multiple-influence treatment).
std::optional<double> free_component_velocity(const axis_state& start, double via_position,
                                              const axis_state& target, double t1, double t2,
                                              const axis_limits& limits, int away_sign,
                                              velocity_interval* intersection = nullptr);

/// Constructs p1..p10 and classifies the four multiple-influence cases.
tradeoff_points build_tradeoff_points(const bound_problem& prob, const std::array<double, 2>& seg1_optimal_v,
                                      const std::array<double, 2>& seg2_optimal_v,
                                      const std::array<double, 2>& seg1_optimal_t,
                                      const std::array<double, 2>& seg2_optimal_t);

struct evasion_config {
  int max_corner_iterations = 25;
  double pass_time_tolerance = 1e-4;   // seconds
  double corner_drift_tolerance = 5e-7;  // metres
  double corner_epsilon = 5e-7;        // outward projection past the inflation
};

/// Fully built evading trajectory for one candidate.
struct evasion_candidate {
  candidate_spec spec;
  multi_axis_trajectory trajectory;
  viastate via;
  double total_time = 0.0;
  influence_kind kind = influence_kind::single_zero;
  bool free_axis_dominant = false;
};

/// Inserts the candidate's viastate and assembles the two-segment evading
/// trajectory across all axes. Moving obstacles are handled by fixed-point
/// iteration of the corner sampling time. Throws a planning_error subtype
/// when the candidate cannot be built.
evasion_candidate build_evading_trajectory(const std::vector<axis_state>& starts,
                                           const std::vector<axis_state>& targets,
                                           const std::vector<axis_limits>& limits, const obstacle& obs,
                                           const candidate_spec& spec, const collision_info& collision,
                                           const evasion_config& cfg = {});

}  // namespace otg
