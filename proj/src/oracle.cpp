#include "otg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace otg::oracle {

namespace {

// Local bound evaluation so the dense oracle does not share the detector's
// polynomial machinery.
double eval_bound(const piecewise_poly& pp, double t) {
  const auto& starts = pp.piece_starts();
  std::size_t i = starts.size() - 1;
  while (i > 0 && starts[i] > t) --i;
  const auto& c = pp.pieces()[i].c;
  const double tau = t - starts[i];
  return c[0] + tau * (c[1] + tau * (c[2] + tau * c[3]));
}

struct kin {
  double p, v, a;
};

kin step(kin s, double j, double t) {
  return {s.p + t * (s.v + t * (0.5 * s.a + t * j / 6.0)), s.v + t * (s.a + 0.5 * j * t), s.a + j * t};
}

}  // namespace

std::optional<viastate_time_map::min_cell> viastate_time_map::minimum() const {
  std::optional<min_cell> best;
  for (int i = 0; i < total.rows(); ++i) {
    for (int j = 0; j < total.cols(); ++j) {
      if (!feasible(i, j)) continue;
      if (!best || total(i, j) < best->total) best = min_cell{i, j, total(i, j)};
    }
  }
  return best;
}

viastate_time_map grid_viastate_time_map(const std::array<axis_state, 2>& start,
                                         const std::array<double, 2>& via_position,
                                         const std::array<axis_state, 2>& target,
                                         const std::array<axis_limits, 2>& limits, int resolution,
                                         const std::array<double, 2>& v0_range,
                                         const std::array<double, 2>& v1_range) {
  if (resolution < 2) throw std::invalid_argument("grid_viastate_time_map: resolution must be >= 2");
  viastate_time_map map;
  map.vx = Eigen::VectorXd::LinSpaced(resolution, v0_range[0], v0_range[1]);
  map.vy = Eigen::VectorXd::LinSpaced(resolution, v1_range[0], v1_range[1]);
  map.t1.setZero(resolution, resolution);
  map.t2.setZero(resolution, resolution);
  map.total.setZero(resolution, resolution);
  map.feasible.setConstant(resolution, resolution, false);

  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const std::array<double, 2> v{map.vx(i), map.vy(j)};
      double t1 = 0.0, t2 = 0.0;
      bool ok = true;
      for (int axis = 0; axis < 2 && ok; ++axis) {
        const axis_state via(via_position[axis], v[axis], 0.0);
        try {
          t1 = std::max(t1, plan(start[axis], partial_target::full(via.position, via.velocity, 0.0),
                                 limits[axis])
                                .total_duration());
          t2 = std::max(t2, plan(via,
                                 partial_target::full(target[axis].position, target[axis].velocity,
                                                      target[axis].acceleration),
                                 limits[axis])
                                .total_duration());
        } catch (const planning_error&) {
          ok = false;
        }
      }
      if (!ok) continue;
      map.t1(i, j) = t1;
      map.t2(i, j) = t2;
      map.total(i, j) = t1 + t2;
      map.feasible(i, j) = true;
    }
  }
  return map;
}

std::optional<double> dense_collision_check(const multi_axis_trajectory& traj, const obstacle& obs, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dense_collision_check: dt must be > 0");
  const double T = traj.total_duration();
  const long n = static_cast<long>(std::floor(T / dt));
  for (long i = 0; i <= n; ++i) {
    const double t = std::min(i * dt, T);
    bool inside = true;
    for (std::size_t k = 0; k < traj.axes.size() && inside; ++k) {
      const double p = evaluate(traj.axes[k], t).position;
      inside = p > eval_bound(obs.axes[k].lower, t) - obs.inflation &&
               p < eval_bound(obs.axes[k].upper, t) + obs.inflation;
    }
    if (inside) return t;
  }
  return std::nullopt;
}

grid_search_result switching_time_grid_search(const axis_state& start, const axis_state& target,
                                              const axis_limits& limits, int resolution) {
  if (!limits.jerk_min || !limits.jerk_max) {
    throw std::invalid_argument("switching_time_grid_search: jerk limits required");
  }
  const double j_lo = *limits.jerk_min, j_hi = *limits.jerk_max;
  const double jm = std::max(j_hi, -j_lo);
  const double dv_need = target.velocity - start.velocity;
  const double dp_need = target.position - start.position;

  double a_span = std::abs(start.acceleration) + std::abs(target.acceleration) +
                  1.5 * (std::cbrt(jm * jm * (std::abs(dp_need) + 1.0)) + std::sqrt(jm * (std::abs(dv_need) + 1.0)));
  double a_lo = limits.acceleration_min ? *limits.acceleration_min : -a_span;
  double a_hi = limits.acceleration_max ? *limits.acceleration_max : a_span;
  const double t_hold_max =
      4.0 * (1.0 + (std::abs(dv_need) + std::abs(dp_need)) / std::max(0.1, std::min(-a_lo, a_hi)));

  grid_search_result best;
  best.duration = std::numeric_limits<double>::infinity();
  double best_alpha = 0.0, best_beta = 0.0, best_t2 = 0.0;

  auto limits_ok = [&](const kin& s) {
    if (limits.velocity_min && s.v < *limits.velocity_min - 1e-9) return false;
    if (limits.velocity_max && s.v > *limits.velocity_max + 1e-9) return false;
    if (s.a < a_lo - 1e-9 || s.a > a_hi + 1e-9) return false;
    return true;
  };

  // Profile: ramp a0->alpha, hold t2, ramp alpha->0, cruise t4, ramp 0->beta,
  // hold t6, ramp beta->a7. Velocity closes the beta hold, position closes
  // the cruise: every accepted candidate is exactly feasible.
  auto try_candidate = [&](double alpha, double beta, double t2) -> std::optional<double> {
    if (alpha < a_lo || alpha > a_hi || beta < a_lo || beta > a_hi || t2 < 0.0) return std::nullopt;
    const double j1 = alpha >= start.acceleration ? j_hi : j_lo;
    const double t1 = (alpha - start.acceleration) / j1;
    if (t1 < 0.0) return std::nullopt;
    const double j2 = 0.0 >= alpha ? j_hi : j_lo;
    const double t2r = (0.0 - alpha) / j2;
    const double j3 = beta >= 0.0 ? j_hi : j_lo;
    const double t3r = beta / j3;
    const double j4 = target.acceleration >= beta ? j_hi : j_lo;
    const double t4r = (target.acceleration - beta) / j4;
    if (t2r < 0.0 || t3r < 0.0 || t4r < 0.0) return std::nullopt;
    kin head = step({0.0, start.velocity, start.acceleration}, j1, t1);
    head = step(head, 0.0, t2);
    head = step(head, j2, t2r);
    const double v_cruise = head.v;
    const double dv3 = beta * beta / (2.0 * j3);
    const double dv4 = (target.acceleration * target.acceleration - beta * beta) / (2.0 * j4);
    if (std::abs(beta) < 1e-9) return std::nullopt;
    const double t6 = (target.velocity - v_cruise - dv3 - dv4) / beta;
    if (t6 < 0.0 || t6 > t_hold_max) return std::nullopt;
    kin tail = {0.0, v_cruise, 0.0};
    tail = step(tail, j3, t3r);
    tail = step(tail, 0.0, t6);
    tail = step(tail, j4, t4r);
    if (std::abs(v_cruise) < 1e-9) return std::nullopt;
    const double t4 = (dp_need - head.p - tail.p) / v_cruise;
    if (t4 < 0.0) return std::nullopt;
    const double duration = t1 + t2 + t2r + t4 + t3r + t6 + t4r;
    const double seg_t[7] = {t1, t2, t2r, t4, t3r, t6, t4r};
    const double seg_j[7] = {j1, 0.0, j2, 0.0, j3, 0.0, j4};
    kin cur = {0.0, start.velocity, start.acceleration};
    for (int sgi = 0; sgi < 7; ++sgi) {
      const int m = 8;
      for (int kk = 1; kk <= m; ++kk) {
        if (!limits_ok(step(cur, seg_j[sgi], seg_t[sgi] * kk / m))) return std::nullopt;
      }
      cur = step(cur, seg_j[sgi], seg_t[sgi]);
    }
    if (std::abs(cur.v - target.velocity) > 1e-6 * (1.0 + std::abs(target.velocity))) return std::nullopt;
    if (std::abs(cur.p - dp_need) > 1e-6 * (1.0 + std::abs(dp_need))) return std::nullopt;
    if (std::abs(cur.a - target.acceleration) > 1e-7) return std::nullopt;
    return duration;
  };

  auto consider = [&](double alpha, double beta, double t2) {
    if (auto d = try_candidate(alpha, beta, t2)) {
      if (*d < best.duration) {
        best.duration = *d;
        best.found = true;
        best_alpha = alpha;
        best_beta = beta;
        best_t2 = t2;
      }
    }
  };

  for (int ia = 0; ia <= resolution; ++ia) {
    const double alpha = a_lo + (a_hi - a_lo) * ia / resolution;
    for (int ib = 0; ib <= resolution; ++ib) {
      const double beta = a_lo + (a_hi - a_lo) * ib / resolution;
      for (int ih = 0; ih <= resolution / 2; ++ih) {
        consider(alpha, beta, t_hold_max * ih / std::max(1, resolution / 2));
      }
    }
  }

  // Second grammar: no holds; beta closes the velocity equation exactly so
  // only the cruise absorbs position slack. One-dimensional in alpha, which
  // the golden-section refinement below handles robustly.
  auto beta_of = [&](double alpha, int sign) -> std::optional<double> {
    const double j1 = alpha >= start.acceleration ? j_hi : j_lo;
    const double t1 = (alpha - start.acceleration) / j1;
    if (t1 < 0.0) return std::nullopt;
    const double j2 = 0.0 >= alpha ? j_hi : j_lo;
    kin head = step({0.0, start.velocity, start.acceleration}, j1, t1);
    head = step(head, j2, (0.0 - alpha) / j2);
    const double v_cruise = head.v;
    // v7 = v_cruise + beta^2/(2 j3) + (a7^2 - beta^2)/(2 j4), branch by sign
    const double j3 = sign > 0 ? j_hi : j_lo;
    const double j4 = sign > 0 ? j_lo : j_hi;  // final ramp back toward a7
    const double k = 1.0 / (2.0 * j3) - 1.0 / (2.0 * j4);
    const double rhs = target.velocity - v_cruise - target.acceleration * target.acceleration / (2.0 * j4);
    if (std::abs(k) < 1e-300) return std::nullopt;
    const double bb = rhs / k;
    if (bb < 0.0) return std::nullopt;
    return sign > 0 ? std::sqrt(bb) : -std::sqrt(bb);
  };
  auto consider_b = [&](double alpha) {
    for (int sign : {+1, -1}) {
      if (auto beta = beta_of(alpha, sign)) consider(alpha, *beta, 0.0);
    }
  };
  for (int ia = 0; ia <= 4 * resolution; ++ia) {
    consider_b(a_lo + (a_hi - a_lo) * ia / (4 * resolution));
  }
  if (best.found && std::abs(best_t2) < 1e-12) {
    // golden-section polish of the alpha-only grammar around the best
    double lo_a = best_alpha - (a_hi - a_lo) / resolution;
    double hi_a = best_alpha + (a_hi - a_lo) / resolution;
    for (int it = 0; it < 80; ++it) {
      const double m1 = lo_a + 0.382 * (hi_a - lo_a);
      const double m2 = lo_a + 0.618 * (hi_a - lo_a);
      consider_b(m1);
      consider_b(m2);
      if (std::abs(best_alpha - m1) < std::abs(best_alpha - m2)) {
        hi_a = m2;
      } else {
        lo_a = m1;
      }
      if (hi_a - lo_a < 1e-12) break;
    }
  }
  // Pattern-search refinement around the best cell: descend at each scale
  // until no neighbor improves, then shrink.
  if (best.found) {
    double da = (a_hi - a_lo) / resolution;
    double dt2 = t_hold_max / std::max(1, resolution / 2);
    for (int pass = 0; pass < 14; ++pass) {
      for (int iter = 0; iter < 60; ++iter) {
        const double before = best.duration;
        for (int ka = -1; ka <= 1; ++ka) {
          for (int kb = -1; kb <= 1; ++kb) {
            for (int kt = -1; kt <= 1; ++kt) {
              consider(best_alpha + ka * da, best_beta + kb * da, std::max(0.0, best_t2 + kt * dt2));
            }
          }
        }
        if (best.duration >= before - 1e-12) break;
      }
      da *= 0.5;
      dt2 *= 0.5;
    }
  }
  if (std::getenv("OTG_ORACLE_DEBUG")) {
    std::fprintf(stderr, "[oracle] best T=%.6f alpha=%.6f beta=%.6f t2=%.6f span=[%.3f,%.3f] thold=%.3f\n",
                 best.duration, best_alpha, best_beta, best_t2, a_lo, a_hi, t_hold_max);
  }
  best.grid_tolerance = 0.01 * (1.0 + (std::isfinite(best.duration) ? best.duration : 0.0));
  return best;
}

}  // namespace otg::oracle
