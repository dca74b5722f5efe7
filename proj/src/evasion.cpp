#include "otg/evasion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otg/polynomial.hpp"

namespace otg {

namespace {

struct probe {
  double duration = 0.0;
  double velocity = 0.0;  // free-velocity optimum at the via position
};

// Time-optimal segment-1 probe with free via velocity.
probe forward_probe(const axis_state& start, double via_pos, const axis_limits& lim) {
  partial_target tgt;
  tgt.position = via_pos;
  tgt.acceleration = 0.0;
  const axis_trajectory traj = plan(start, tgt, lim);
  const axis_state end = traj.phases().empty() ? traj.start() : traj.end();
  return {traj.total_duration(), end.velocity};
}

// Time-optimal segment-2 probe with free via velocity (planned backwards
// from the full target state).
probe reverse_probe(const axis_state& target, double via_pos, const axis_limits& lim) {
  partial_target at_start;
  at_start.position = via_pos;
  at_start.acceleration = 0.0;
  const axis_trajectory traj = plan_reverse(target, at_start, lim);
  return {traj.total_duration(), traj.start().velocity};
}

double seg1_time(const axis_state& start, double via_pos, double v, const axis_limits& lim) {
  return plan(start, partial_target::full(via_pos, v, 0.0), lim).total_duration();
}

double seg2_time(const axis_state& target, double via_pos, double v, const axis_limits& lim) {
  return plan(axis_state(via_pos, v, 0.0),
              partial_target::full(target.position, target.velocity, target.acceleration), lim)
      .total_duration();
}

axis_limits reversed_limits(const axis_limits& lim) {
  axis_limits out = lim;
  out.velocity_min = lim.velocity_max ? std::optional<double>(-*lim.velocity_max) : std::nullopt;
  out.velocity_max = lim.velocity_min ? std::optional<double>(-*lim.velocity_min) : std::nullopt;
  out.jerk_min = lim.jerk_max ? std::optional<double>(-*lim.jerk_max) : std::nullopt;
  out.jerk_max = lim.jerk_min ? std::optional<double>(-*lim.jerk_min) : std::nullopt;
  return out;
}

velocity_interval forward_interval(const axis_state& start, double via_pos, double total,
                                   const axis_limits& lim) {
  return reachable_velocity_interval(start, via_pos, total, lim);
}

// Via velocities from which the target is reachable in exactly `total`.
velocity_interval backward_interval(const axis_state& target, double via_pos, double total,
                                    const axis_limits& lim) {
  const axis_state rev_start(target.position, -target.velocity, target.acceleration);
  const velocity_interval rv = reachable_velocity_interval(rev_start, via_pos, total, reversed_limits(lim));
  return {-rv.hi, -rv.lo};
}

double pick_toward(const velocity_interval& iv, double reference) {
  return std::abs(iv.hi - reference) <= std::abs(iv.lo - reference) ? iv.hi : iv.lo;
}

double pick_other(const velocity_interval& iv, double chosen) {
  return chosen == iv.hi ? iv.lo : iv.hi;
}

bool between(double x, double a, double b) {
  return x >= std::min(a, b) - 1e-9 && x <= std::max(a, b) + 1e-9;
}

}  // namespace

candidate_enumeration enumerate_candidates(std::size_t n_axes, const collision_info& collision,
                                           const multi_axis_trajectory& direct, bool prune) {
  (void)direct;
  if (n_axes < 2) throw std::invalid_argument("enumerate_candidates: at least two axes required");
  candidate_enumeration out;
  out.prepruning_count = static_cast<int>(n_axes * (n_axes - 1));

  auto dominant_of = [&](std::size_t a, std::size_t b) {
    return std::abs(collision.states[a].velocity) >= std::abs(collision.states[b].velocity) ? a : b;
  };
  std::size_t global_dominant = 0;
  for (std::size_t i = 1; i < n_axes; ++i) global_dominant = dominant_of(global_dominant, i);

  for (std::size_t a = 0; a < n_axes; ++a) {
    for (std::size_t b = a + 1; b < n_axes; ++b) {
      if (prune && a != global_dominant && b != global_dominant) continue;
      const std::size_t d = dominant_of(a, b);
      const std::size_t k = d == a ? b : a;
      for (face side : {face::low, face::high}) {
        candidate_spec spec;
        spec.bound_axes = {d, k};
        spec.side = side;
        spec.entry = collision.states[d].velocity >= 0.0 ? face::low : face::high;
        out.candidates.push_back(spec);
      }
    }
  }
  return out;
}

tradeoff_curve fit_tradeoff(const Eigen::Vector2d& p_a, const Eigen::Vector2d& p_mid,
                            const Eigen::Vector2d& p_b) {
  const double x0 = p_a.x(), x1 = p_mid.x(), x2 = p_b.x();
  if (std::abs(x0 - x1) < 1e-12 || std::abs(x0 - x2) < 1e-12 || std::abs(x1 - x2) < 1e-12) {
    throw std::invalid_argument("fit_tradeoff: coincident abscissae");
  }
  // Lagrange form expanded to monomial coefficients.
  const double y0 = p_a.y(), y1 = p_mid.y(), y2 = p_b.y();
  const double d0 = (x0 - x1) * (x0 - x2);
  const double d1 = (x1 - x0) * (x1 - x2);
  const double d2 = (x2 - x0) * (x2 - x1);
  tradeoff_curve c;
  c.a = y0 / d0 + y1 / d1 + y2 / d2;
  c.b = -(y0 * (x1 + x2) / d0 + y1 * (x0 + x2) / d1 + y2 * (x0 + x1) / d2);
  c.c = y0 * x1 * x2 / d0 + y1 * x0 * x2 / d1 + y2 * x0 * x1 / d2;
  return c;
}

Eigen::Vector2d intersect_tradeoffs(const tradeoff_curve& c1, const tradeoff_curve& c2,
                                    const tradeoff_bracket& bracket) {
  const double a1 = c1.a, b1 = c1.b, cc1 = c1.c;
  const double a2 = c2.a, b2 = c2.b, cc2 = c2.c;
  // x = a2 y^2 + b2 y + c2 with y = a1 x^2 + b1 x + c1 substituted.
  const double k4 = a1 * a1 * a2;
  const double k3 = 2.0 * a1 * b1 * a2;
  const double k2 = 2.0 * a1 * cc1 * a2 + b1 * b1 * a2 + a1 * b2;
  const double k1 = 2.0 * b1 * cc1 * a2 + b1 * b2 - 1.0;
  const double k0 = cc1 * cc1 * a2 + cc1 * b2 + cc2;

  const double x_mid = 0.5 * (bracket.x_lo + bracket.x_hi);
  const double slack = 1e-9 + 1e-6 * (std::abs(bracket.x_hi - bracket.x_lo) + std::abs(bracket.y_hi - bracket.y_lo));
  std::optional<Eigen::Vector2d> best;
  for (double x : solve_quartic(k4, k3, k2, k1, k0)) {
    if (x < bracket.x_lo - slack || x > bracket.x_hi + slack) continue;
    const double y = c1.eval(x);
    if (y < bracket.y_lo - slack || y > bracket.y_hi + slack) continue;
    if (!best || std::abs(x - x_mid) < std::abs(best->x() - x_mid)) {
      best = Eigen::Vector2d(x, y);
    }
  }
  if (!best) throw tradeoff_failure("intersect_tradeoffs: no real root inside the bracket");
  return *best;
}

std::optional<double> free_component_velocity(const axis_state& start, double via_position,
                                              const axis_state& target, double t1, double t2,
                                              const axis_limits& limits, int away_sign,
                                              velocity_interval* intersection) {
  const velocity_interval f = forward_interval(start, via_position, t1, limits);
  const velocity_interval b = backward_interval(target, via_position, t2, limits);
  double lo = std::max(f.lo, b.lo);
  double hi = std::min(f.hi, b.hi);
  if (lo > hi + 1e-9) {
    if (intersection) *intersection = {lo, hi};
    return std::nullopt;
  }
  if (lo > hi) lo = hi = 0.5 * (lo + hi);  // round-off inverted: collapse
  if (intersection) *intersection = {lo, hi};
  return away_sign > 0 ? hi : lo;
}

tradeoff_points build_tradeoff_points(const bound_problem& prob, const std::array<double, 2>& seg1_optimal_v,
                                      const std::array<double, 2>& seg2_optimal_v,
                                      const std::array<double, 2>& seg1_optimal_t,
                                      const std::array<double, 2>& seg2_optimal_t) {
  tradeoff_points pts;
  const int ix = seg1_optimal_t[0] >= seg1_optimal_t[1] ? 0 : 1;  // segment-1 dominant axis
  const int iy = 1 - ix;
  pts.dominant_segment1_axis = ix;
  pts.dominant_segment2_axis = iy;

  const double x_opt = seg1_optimal_v[ix];
  const double y_opt = seg2_optimal_v[iy];
  const double T1 = seg1_optimal_t[ix];
  const double T2 = seg2_optimal_t[iy];

  // p1/p2: the other component's reachable interval at the segment-1 optimum.
  const velocity_interval iy_at_T1 = forward_interval(prob.start[iy], prob.via_position[iy], T1, prob.limits[iy]);
  const double p2y = pick_toward(iy_at_T1, y_opt);
  pts.p[1] = {x_opt, pick_other(iy_at_T1, p2y)};
  pts.p[2] = {x_opt, p2y};
  const bool dir1_hi = p2y == iy_at_T1.hi;

  // p3/p4: mirrored for segment 2.
  const velocity_interval ix_at_T2 = backward_interval(prob.target[ix], prob.via_position[ix], T2, prob.limits[ix]);
  const double p4x = pick_toward(ix_at_T2, x_opt);
  pts.p[3] = {pick_other(ix_at_T2, p4x), y_opt};
  pts.p[4] = {p4x, y_opt};
  const bool dir2_hi = p4x == ix_at_T2.hi;

  // p5/p6: segment-1 interval of the other component at p4's speed.
  const double t_s1_p4 = seg1_time(prob.start[ix], prob.via_position[ix], p4x, prob.limits[ix]);
  const velocity_interval iy_at_p4 =
      forward_interval(prob.start[iy], prob.via_position[iy], t_s1_p4, prob.limits[iy]);
  pts.p[5] = {p4x, dir1_hi ? iy_at_p4.lo : iy_at_p4.hi};
  pts.p[6] = {p4x, dir1_hi ? iy_at_p4.hi : iy_at_p4.lo};

  // p7/p8: segment-2 interval at p2's speed.
  const double t_s2_p2 = seg2_time(prob.target[iy], prob.via_position[iy], p2y, prob.limits[iy]);
  const velocity_interval ix_at_p2 =
      backward_interval(prob.target[ix], prob.via_position[ix], t_s2_p2, prob.limits[ix]);
  pts.p[7] = {dir2_hi ? ix_at_p2.lo : ix_at_p2.hi, p2y};
  pts.p[8] = {dir2_hi ? ix_at_p2.hi : ix_at_p2.lo, p2y};

  const bool x_compatible = between(pts.p[2].x(), pts.p[7].x(), pts.p[8].x());
  const bool y_compatible = between(pts.p[4].y(), pts.p[5].y(), pts.p[6].y());
  if (x_compatible && y_compatible) {
    pts.kind = influence_kind::multi_case1;
    return pts;
  }
  if (x_compatible) {
    pts.kind = influence_kind::multi_case2;
    return pts;
  }
  if (y_compatible) {
    pts.kind = influence_kind::multi_case3;
    return pts;
  }
  pts.kind = influence_kind::multi_case4;

  // p9: x midway between p2 and p6; y from segment-1 reachability there.
  const double x9 = 0.5 * (pts.p[2].x() + pts.p[6].x());
  const double t_s1_p9 = seg1_time(prob.start[ix], prob.via_position[ix], x9, prob.limits[ix]);
  const velocity_interval iy_at_p9 =
      forward_interval(prob.start[iy], prob.via_position[iy], t_s1_p9, prob.limits[iy]);
  pts.p[9] = {x9, dir1_hi ? iy_at_p9.hi : iy_at_p9.lo};

  // p10: y midway between p4 and p8; x from segment-2 reachability there.
  const double y10 = 0.5 * (pts.p[4].y() + pts.p[8].y());
  const double t_s2_p10 = seg2_time(prob.target[iy], prob.via_position[iy], y10, prob.limits[iy]);
  const velocity_interval ix_at_p10 =
      backward_interval(prob.target[ix], prob.via_position[ix], t_s2_p10, prob.limits[ix]);
  pts.p[10] = {dir2_hi ? ix_at_p10.hi : ix_at_p10.lo, y10};
  return pts;
}

bound_solution optimal_bound_velocity(const bound_problem& prob) {
  bool distinct = false;
  for (int i = 0; i < 2; ++i) {
    distinct = distinct || std::abs(prob.via_position[i] - prob.start[i].position) > 1e-9 ||
               std::abs(prob.via_position[i] - prob.target[i].position) > 1e-9;
  }
  if (!distinct) throw degenerate_candidate("optimal_bound_velocity: via coincides with both endpoints");

  std::array<double, 2> t1{}, v1{}, t2{}, v2{};
  for (int i = 0; i < 2; ++i) {
    const probe f = forward_probe(prob.start[i], prob.via_position[i], prob.limits[i]);
    const probe r = reverse_probe(prob.target[i], prob.via_position[i], prob.limits[i]);
    t1[i] = f.duration;
    v1[i] = f.velocity;
    t2[i] = r.duration;
    v2[i] = r.velocity;
  }
  const int d1 = t1[0] >= t1[1] ? 0 : 1;
  const int d2 = t2[0] >= t2[1] ? 0 : 1;

  bound_solution sol;
  if (d1 == d2) {
    const int d = d1, o = 1 - d;
    double vd;
    if (v1[d] * v2[d] < 0.0) {
      vd = 0.0;
      sol.kind = influence_kind::single_zero;
    } else if (v1[d] >= 0.0) {
      vd = std::min(v1[d], v2[d]);
      sol.kind = influence_kind::single_min;
    } else {
      vd = std::max(v1[d], v2[d]);
      sol.kind = influence_kind::single_max;
    }
    const double T1 = seg1_time(prob.start[d], prob.via_position[d], vd, prob.limits[d]);
    const double T2 = seg2_time(prob.target[d], prob.via_position[d], vd, prob.limits[d]);
    const std::optional<double> vo = free_component_velocity(
        prob.start[o], prob.via_position[o], prob.target[o], T1, T2, prob.limits[o], prob.away_sign[o]);
    if (vo) {
      sol.v_via[d] = vd;
      sol.v_via[o] = *vo;
      sol.t1 = std::max(T1, seg1_time(prob.start[o], prob.via_position[o], *vo, prob.limits[o]));
      sol.t2 = std::max(T2, seg2_time(prob.target[o], prob.via_position[o], *vo, prob.limits[o]));
      return sol;
    }
    // Empty intersection: the other component forces extra time in one
    // segment. Minimize the total over the gap between the two intervals.
    const velocity_interval f = forward_interval(prob.start[o], prob.via_position[o], T1, prob.limits[o]);
    const velocity_interval b = backward_interval(prob.target[o], prob.via_position[o], T2, prob.limits[o]);
    double lo = std::min(f.hi, b.hi), hi = std::max(f.lo, b.lo);
    if (lo > hi) std::swap(lo, hi);
    auto total_of = [&](double vo2) {
      const double s1 = std::max(T1, seg1_time(prob.start[o], prob.via_position[o], vo2, prob.limits[o]));
      const double s2 = std::max(T2, seg2_time(prob.target[o], prob.via_position[o], vo2, prob.limits[o]));
      return s1 + s2;
    };
    double a = lo, bnd = hi;
    for (int it = 0; it < 60; ++it) {
      const double m1 = a + 0.382 * (bnd - a);
      const double m2 = a + 0.618 * (bnd - a);
      if (total_of(m1) <= total_of(m2)) {
        bnd = m2;
      } else {
        a = m1;
      }
    }
    const double vo2 = 0.5 * (a + bnd);
    sol.v_via[d] = vd;
    sol.v_via[o] = vo2;
    sol.t1 = std::max(T1, seg1_time(prob.start[o], prob.via_position[o], vo2, prob.limits[o]));
    sol.t2 = std::max(T2, seg2_time(prob.target[o], prob.via_position[o], vo2, prob.limits[o]));
    return sol;
  }

  // Multiple velocity influence.
  const tradeoff_points pts = build_tradeoff_points(prob, v1, v2, t1, t2);
  const int ix = pts.dominant_segment1_axis, iy = pts.dominant_segment2_axis;
  Eigen::Vector2d v_xy;  // (x, y) = (v[ix], v[iy])
  sol.kind = pts.kind;
  switch (pts.kind) {
    case influence_kind::multi_case1:
      v_xy = {pts.p[2].x(), pts.p[4].y()};
      break;
    case influence_kind::multi_case2:
      v_xy = pts.p[2];
      break;
    case influence_kind::multi_case3:
      v_xy = pts.p[4];
      break;
    default: {
      const tradeoff_curve c1 = fit_tradeoff(pts.p[2], pts.p[9], pts.p[6]);
      // Segment two's curve is the transposed polynomial x(y).
      const tradeoff_curve c2 =
          fit_tradeoff({pts.p[4].y(), pts.p[4].x()}, {pts.p[10].y(), pts.p[10].x()}, {pts.p[8].y(), pts.p[8].x()});
      tradeoff_bracket bracket;
      bracket.x_lo = std::min(pts.p[2].x(), pts.p[4].x());
      bracket.x_hi = std::max(pts.p[2].x(), pts.p[4].x());
      bracket.y_lo = std::min(pts.p[2].y(), pts.p[4].y());
      bracket.y_hi = std::max(pts.p[2].y(), pts.p[4].y());
      v_xy = intersect_tradeoffs(c1, c2, bracket);
      break;
    }
  }
  sol.v_via[ix] = v_xy.x();
  sol.v_via[iy] = v_xy.y();
  sol.t1 = std::max(seg1_time(prob.start[0], prob.via_position[0], sol.v_via[0], prob.limits[0]),
                    seg1_time(prob.start[1], prob.via_position[1], sol.v_via[1], prob.limits[1]));
  sol.t2 = std::max(seg2_time(prob.target[0], prob.via_position[0], sol.v_via[0], prob.limits[0]),
                    seg2_time(prob.target[1], prob.via_position[1], sol.v_via[1], prob.limits[1]));
  return sol;
}

evasion_candidate build_evading_trajectory(const std::vector<axis_state>& starts,
                                           const std::vector<axis_state>& targets,
                                           const std::vector<axis_limits>& limits, const obstacle& obs,
                                           const candidate_spec& spec, const collision_info& collision,
                                           const evasion_config& cfg) {
  const std::size_t n = starts.size();
  if (n < 2 || targets.size() != n || limits.size() != n || obs.axes.size() != n) {
    throw std::invalid_argument("build_evading_trajectory: size mismatch");
  }
  const std::size_t d = spec.bound_axes[0], k = spec.bound_axes[1];

  auto corner_at = [&](double t) -> std::array<double, 2> {
    const double cd = spec.entry == face::low ? obs.lower_at(d, t) - cfg.corner_epsilon
                                              : obs.upper_at(d, t) + cfg.corner_epsilon;
    const double ck = spec.side == face::low ? obs.lower_at(k, t) - cfg.corner_epsilon
                                             : obs.upper_at(k, t) + cfg.corner_epsilon;
    return {cd, ck};
  };
  auto center_at = [&](std::size_t axis, double t) {
    return 0.5 * (obs.lower_at(axis, t) + obs.upper_at(axis, t));
  };

  double pass = collision.time;
  bound_solution sol;
  std::array<double, 2> corner{};
  double total_time = 0.0;
  bool free_dominant = false;
  double free_opt_max = 0.0;
  bool converged = false;

  for (int iter = 0; iter < cfg.max_corner_iterations; ++iter) {
    corner = corner_at(pass);
    bound_problem prob;
    prob.start = {starts[d], starts[k]};
    prob.target = {targets[d], targets[k]};
    prob.via_position = corner;
    prob.limits = {limits[d], limits[k]};
    prob.away_sign = {corner[0] >= center_at(d, pass) ? +1 : -1, corner[1] >= center_at(k, pass) ? +1 : -1};
    sol = optimal_bound_velocity(prob);

    free_opt_max = 0.0;
    for (std::size_t f = 0; f < n; ++f) {
      if (f == d || f == k) continue;
      free_opt_max = std::max(free_opt_max, plan(starts[f],
                                                 partial_target::full(targets[f].position, targets[f].velocity,
                                                                      targets[f].acceleration),
                                                 limits[f])
                                                .total_duration());
    }
    const double t_bound = sol.t1 + sol.t2;
    double next_pass;
    if (free_opt_max <= t_bound + 1e-12) {
      free_dominant = false;
      total_time = t_bound;
      next_pass = sol.t1;
    } else {
      free_dominant = true;
      total_time = free_opt_max;
      next_pass = t_bound > 0.0 ? total_time * sol.t1 / t_bound : 0.5 * total_time;
    }
    const std::array<double, 2> moved = corner_at(next_pass);
    const double drift = std::max(std::abs(moved[0] - corner[0]), std::abs(moved[1] - corner[1]));
    const bool time_ok = std::abs(next_pass - pass) < cfg.pass_time_tolerance;
    pass = next_pass;
    if ((time_ok && drift < cfg.corner_drift_tolerance) || drift < cfg.corner_drift_tolerance * 1e-3) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw tradeoff_failure("build_evading_trajectory: corner fixed point did not converge");
  }

  corner = corner_at(pass);
  double t1 = sol.t1, t2 = sol.t2;
  Eigen::Vector2d v_via = sol.v_via;
  if (free_dominant) {
    t1 = pass;
    t2 = total_time - pass;
    // Re-derive bound velocities inside the widened reachable intersection.
    const std::array<std::size_t, 2> axes{d, k};
    for (int i = 0; i < 2; ++i) {
      const std::size_t ax = axes[i];
      const velocity_interval f = forward_interval(starts[ax], corner[i], t1, limits[ax]);
      const velocity_interval b = backward_interval(targets[ax], corner[i], t2, limits[ax]);
      const double lo = std::max(f.lo, b.lo), hi = std::min(f.hi, b.hi);
      if (lo > hi + 1e-9) {
        throw tradeoff_failure("build_evading_trajectory: free-dominant viastate velocity infeasible");
      }
      v_via[i] = std::clamp(v_via[i], lo, hi);
    }
  }

  std::vector<axis_trajectory> axes_out(n);
  const std::array<std::size_t, 2> bound{d, k};
  for (int i = 0; i < 2; ++i) {
    const std::size_t ax = bound[i];
    const axis_state via_state(corner[i], v_via[i], 0.0);
    const axis_trajectory seg1 =
        plan(starts[ax], partial_target::full(via_state.position, via_state.velocity, 0.0), limits[ax],
             duration_spec::fixed_total(t1));
    const axis_trajectory seg2 =
        plan(via_state,
             partial_target::full(targets[ax].position, targets[ax].velocity, targets[ax].acceleration),
             limits[ax], duration_spec::fixed_total(t2));
    axes_out[ax] = concatenate(seg1, seg2);
  }
  for (std::size_t f = 0; f < n; ++f) {
    if (f == d || f == k) continue;
    axes_out[f] = plan(starts[f],
                       partial_target::full(targets[f].position, targets[f].velocity, targets[f].acceleration),
                       limits[f], duration_spec::fixed_total(t1 + t2));
  }

  evasion_candidate out;
  out.spec = spec;
  out.trajectory = multi_axis_trajectory(std::move(axes_out));
  out.via.pass_time = pass;
  out.via.states = evaluate_all(out.trajectory, pass);
  out.total_time = out.trajectory.total_duration();
  out.kind = sol.kind;
  out.free_axis_dominant = free_dominant;
  return out;
}

}  // namespace otg
