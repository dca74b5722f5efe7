#include "otg/axis_planner.hpp"

#include <algorithm>
#include <cstdio>
#include <string>
#include <cstdlib>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "otg/polynomial.hpp"

namespace otg {

namespace {

constexpr double k_tneg_tol = 1e-9;    // negative durations accepted and clamped to 0
constexpr double k_limit_slack = 1e-9;
constexpr double k_match_tol = 1e-6;
constexpr double k_tie_tol = 1e-9;

struct lim {
  std::optional<double> v_lo, v_hi, a_lo, a_hi;
  double j_lo = 0.0, j_hi = 0.0;  // always bounded for planning
};

// Stack-based quadratic roots for hot paths (no allocation).
int solve_quadratic_fast(double a, double b, double c, double out[2]) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return 0;
  if (std::abs(a) <= 1e-14 * scale) {
    if (b == 0.0) return 0;
    out[0] = -c / b;
    return 1;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return 0;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  out[0] = q / a;
  out[1] = (q != 0.0) ? c / q : 0.0;
  if (out[0] > out[1]) std::swap(out[0], out[1]);
  return (out[1] - out[0]) > 1e-9 ? 2 : 1;
}

double pos_part(double x) { return x > 0.0 ? x : 0.0; }
double neg_part(double x) { return x < 0.0 ? -x : 0.0; }

// Velocity gained/lost while ramping the acceleration straight to zero.
double future_rise(double a, const lim& L) { return a > 0.0 ? a * a / (2.0 * -L.j_lo) : 0.0; }
double future_drop(double a, const lim& L) { return a < 0.0 ? a * a / (2.0 * L.j_hi) : 0.0; }

bool future_safe(double v, double a, const lim& L, double tol) {
  if (L.v_hi && v + future_rise(a, L) > *L.v_hi + tol) return false;
  if (L.v_lo && v - future_drop(a, L) < *L.v_lo - tol) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Stage primitive: ramp a_in -> alpha, optional hold, ramp alpha -> a_out,
// producing an exact velocity change. sign=+1 places alpha above both
// endpoint accelerations (peak), sign=-1 below (valley).
// ---------------------------------------------------------------------------

struct stage_sol {
  double alpha = 0.0;
  double t_up = 0.0, j_up = 0.0;
  double t_hold = 0.0;
  double t_dn = 0.0, j_dn = 0.0;

  double duration() const { return t_up + t_hold + t_dn; }
};

axis_state stage_advance(axis_state s, const stage_sol& g) {
  s = advance(s, g.j_up, g.t_up);
  s = advance(s, 0.0, g.t_hold);
  s = advance(s, g.j_dn, g.t_dn);
  return s;
}

// Up to 3 solutions: primary/secondary triangular roots plus the trapezoid.
int stage_solutions(double a_in, double a_out, double dv, int sign, const lim& L, stage_sol out[3]) {
  const double j_up = sign > 0 ? L.j_hi : L.j_lo;
  const double j_dn = sign > 0 ? L.j_lo : L.j_hi;
  const double m = sign > 0 ? std::max(a_in, a_out) : std::min(a_in, a_out);
  const std::optional<double> cap = sign > 0 ? L.a_hi : L.a_lo;
  if (cap && (sign > 0 ? m > *cap + 1e-9 : m < *cap - 1e-9)) return 0;

  const double k = 1.0 / (2.0 * j_up) - 1.0 / (2.0 * j_dn);
  const double c = -a_in * a_in / (2.0 * j_up) + a_out * a_out / (2.0 * j_dn);
  int n = 0;

  auto try_alpha = [&](double alpha) {
    if (sign > 0) {
      if (alpha < m - 1e-9) return;
      if (cap && alpha > *cap + 1e-9) return;
      alpha = std::max(alpha, m);
      if (cap) alpha = std::min(alpha, *cap);
    } else {
      if (alpha > m + 1e-9) return;
      if (cap && alpha < *cap - 1e-9) return;
      alpha = std::min(alpha, m);
      if (cap) alpha = std::max(alpha, *cap);
    }
    stage_sol g;
    g.alpha = alpha;
    g.j_up = j_up;
    g.t_up = (alpha - a_in) / j_up;
    g.j_dn = j_dn;
    g.t_dn = (a_out - alpha) / j_dn;
    g.t_hold = 0.0;
    if (g.t_up < 0.0 || g.t_dn < 0.0) return;
    if (n < 3) out[n++] = g;
  };

  const double rr = (dv - c) / k;
  if (rr >= 0.0) {
    const double r = std::sqrt(rr);
    try_alpha(sign > 0 ? r : -r);
    if (r > 1e-12) try_alpha(sign > 0 ? -r : r);
  }
  if (cap && std::abs(*cap) > 1e-12) {
    const double alpha = *cap;
    const double dv_tri = k * alpha * alpha + c;
    const double t_hold = (dv - dv_tri) / alpha;
    if (t_hold >= -1e-10) {
      stage_sol g;
      g.alpha = alpha;
      g.j_up = j_up;
      g.t_up = (alpha - a_in) / j_up;
      g.j_dn = j_dn;
      g.t_dn = (a_out - alpha) / j_dn;
      g.t_hold = std::max(t_hold, 0.0);
      if (g.t_up >= 0.0 && g.t_dn >= 0.0 && n < 3) out[n++] = g;
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// Candidate bookkeeping
// ---------------------------------------------------------------------------

struct phase_buf {
  std::array<jerk_phase, 12> items{};
  int n = 0;
  bool ok = true;

  void push(double t, double j) {
    if (!std::isfinite(t) || !std::isfinite(j) || t < -k_tneg_tol) {
      ok = false;
      return;
    }
    if (n >= static_cast<int>(items.size())) {
      ok = false;
      return;
    }
    items[n++] = jerk_phase(std::max(t, 0.0), j);
  }
  void push(const stage_sol& g) {
    push(g.t_up, g.j_up);
    push(g.t_hold, 0.0);
    push(g.t_dn, g.j_dn);
  }
};

struct candidate {
  std::array<jerk_phase, 12> phases{};
  int n_phases = 0;
  axis_state end{};
  double total = 0.0;
  double objective_value = 0.0;
  std::array<int, 12> sign_seq{};
  const char* family = "";
};

enum class obj_field { velocity, acceleration, position };

bool phases_within_limits(const axis_state& s0, const candidate& cand, const lim& L, double slack);

struct reject_stats {
  int buf_bad = 0;
  int nonfinite = 0;
  int fixed_residual = 0;
  int target_miss = 0;
  int future_unsafe = 0;
  int accel_out = 0;
  int limits_out = 0;
};

struct solve_ctx {
  axis_state s0;
  partial_target tgt;
  lim L;
  bool fixed = false;
  double T = 0.0;
  std::optional<objective> goal;
  obj_field ofield = obj_field::velocity;
  std::vector<candidate> candidates;
  reject_stats* stats = nullptr;
  // Fixed-duration feasibility mode (no objective): any valid trajectory
  // works, so families can stop as soon as one validates.
  bool early_exit = false;
  bool satisfied = false;

  double D() const { return *tgt.position - s0.position; }

  void emit(const char* family, const phase_buf& buf) {
    if (!buf.ok) {
      if (stats) ++stats->buf_bad;
      return;
    }
    candidate cand;
    cand.family = family;
    axis_state s = s0;
    double total = 0.0;
    int n = 0;
    for (int i = 0; i < buf.n; ++i) {
      const auto& ph = buf.items[i];
      if (ph.duration < 1e-12) continue;
      s = advance(s, ph.jerk, ph.duration);
      total += ph.duration;
      if (n >= static_cast<int>(cand.phases.size())) return;
      cand.phases[n] = ph;
      cand.sign_seq[n] = ph.jerk > 1e-12 ? 1 : (ph.jerk < -1e-12 ? -1 : 0);
      ++n;
    }
    if (!is_finite(s) || !std::isfinite(total)) {
      if (stats) ++stats->nonfinite;
      return;
    }
    cand.n_phases = n;
    cand.end = s;
    cand.total = total;

    // Fixed mode: absorb round-off so phase durations sum to T exactly.
    if (fixed) {
      const double residual = T - total;
      if (std::abs(residual) > k_tneg_tol) {
        if (stats) ++stats->fixed_residual;
        return;
      }
      if (n > 0) {
        int best = 0;
        for (int i = 1; i < n; ++i) {
          if (cand.phases[i].duration > cand.phases[best].duration) best = i;
        }
        cand.phases[best].duration += residual;
        if (cand.phases[best].duration < 0.0) return;
        axis_state r = s0;
        for (int i = 0; i < n; ++i) r = advance(r, cand.phases[i].jerk, cand.phases[i].duration);
        cand.end = r;
        cand.total = T;
      } else if (std::abs(T) > k_tneg_tol) {
        return;
      }
    }

    // Defined target fields must be met.
    if ((tgt.position && std::abs(cand.end.position - *tgt.position) > k_match_tol) ||
        (tgt.velocity && std::abs(cand.end.velocity - *tgt.velocity) > k_match_tol) ||
        (tgt.acceleration && std::abs(cand.end.acceleration - *tgt.acceleration) > k_match_tol)) {
      if (stats) {
        ++stats->target_miss;
        std::fprintf(stderr, "  [miss] %s end=(%.9f,%.9f,%.9f) tgt=(%s,%s,%s)\n", family, cand.end.position,
                     cand.end.velocity, cand.end.acceleration,
                     tgt.position ? std::to_string(*tgt.position).c_str() : "free",
                     tgt.velocity ? std::to_string(*tgt.velocity).c_str() : "free",
                     tgt.acceleration ? std::to_string(*tgt.acceleration).c_str() : "free");
      }
      return;
    }

    // Free fields: static limits plus future constraint safety.
    if (!tgt.velocity || !tgt.acceleration) {
      if (!future_safe(cand.end.velocity, cand.end.acceleration, L, k_limit_slack)) {
        if (stats) {
          ++stats->future_unsafe;
          std::fprintf(stderr, "  [unsafe] %s end=(%.6f,%.6f,%.6f)\n", family, cand.end.position,
                       cand.end.velocity, cand.end.acceleration);
        }
        return;
      }
    }
    if (!tgt.acceleration) {
      if ((L.a_hi && cand.end.acceleration > *L.a_hi + k_limit_slack) ||
          (L.a_lo && cand.end.acceleration < *L.a_lo - k_limit_slack)) {
        if (stats) ++stats->accel_out;
        return;
      }
    }

    switch (ofield) {
      case obj_field::velocity: cand.objective_value = cand.end.velocity; break;
      case obj_field::acceleration: cand.objective_value = cand.end.acceleration; break;
      case obj_field::position: cand.objective_value = cand.end.position; break;
    }
    candidates.push_back(cand);
    if (early_exit && !satisfied && phases_within_limits(s0, cand, L, k_limit_slack)) {
      satisfied = true;
    }
  }
};

// Characteristic scales used for unbounded brackets.
struct scales {
  double vel = 1.0;
  double acc = 1.0;
  double dur = 1.0;
};

scales make_scales(const solve_ctx& c) {
  const double jm = std::max(c.L.j_hi, -c.L.j_lo);
  const double jw = std::min(c.L.j_hi, -c.L.j_lo);
  double v = std::abs(c.s0.velocity);
  if (c.tgt.velocity) v = std::max(v, std::abs(*c.tgt.velocity));
  if (c.L.v_hi) v = std::max(v, std::abs(*c.L.v_hi));
  if (c.L.v_lo) v = std::max(v, std::abs(*c.L.v_lo));
  double d = 0.0;
  if (c.tgt.position) d = std::abs(c.D());
  double a = std::abs(c.s0.acceleration);
  if (c.tgt.acceleration) a = std::max(a, std::abs(*c.tgt.acceleration));
  scales s;
  // Peak velocity/acceleration magnitudes of a time-optimal sweep over the
  // problem's own distance and velocity span, with modest headroom.
  s.vel = 1.0 + v + 1.5 * std::cbrt(jm * d * d);
  s.acc = 1.0 + a + 1.5 * std::sqrt(jm * s.vel);
  s.dur = 2.0 * (1.0 + std::cbrt(6.0 * (1.0 + d) / jw) + 2.0 * std::sqrt(2.0 * s.vel / jw) + s.acc / jw);
  // Tight acceleration bounds stretch everything: velocity swings and the
  // distance budget are then covered at the weakest sustained acceleration.
  double a_eff = std::numeric_limits<double>::infinity();
  if (c.L.a_hi) a_eff = std::min(a_eff, std::abs(*c.L.a_hi));
  if (c.L.a_lo) a_eff = std::min(a_eff, std::abs(*c.L.a_lo));
  if (std::isfinite(a_eff) && a_eff > 1e-12) {
    s.dur += 2.0 * (2.0 * s.vel / a_eff + std::sqrt(2.0 * (1.0 + d) / a_eff));
  }
  // A tight velocity bound stretches the distance coverage similarly.
  double v_eff = std::numeric_limits<double>::infinity();
  if (c.L.v_hi) v_eff = std::min(v_eff, std::abs(*c.L.v_hi));
  if (c.L.v_lo) v_eff = std::min(v_eff, std::abs(*c.L.v_lo));
  if (std::isfinite(v_eff) && v_eff > 1e-12) {
    s.dur += 2.0 * d / v_eff;
  }
  if (c.fixed) s.dur = c.T;
  return s;
}

double bracket_a_lo(const solve_ctx& c, const scales& s) {
  double lo = c.L.a_lo ? *c.L.a_lo : -s.acc;
  // Within a fixed budget only accelerations reachable by ramping fit.
  if (c.fixed) lo = std::max(lo, c.s0.acceleration + c.L.j_lo * c.T);
  return lo;
}
double bracket_a_hi(const solve_ctx& c, const scales& s) {
  double hi = c.L.a_hi ? *c.L.a_hi : s.acc;
  if (c.fixed) hi = std::min(hi, c.s0.acceleration + c.L.j_hi * c.T);
  return hi;
}
double max_dv_within(const solve_ctx& c, double T) {
  const double jm = std::max(c.L.j_hi, -c.L.j_lo);
  double a_mag = std::abs(c.s0.acceleration) + jm * T;
  if (c.L.a_hi && c.L.a_lo) {
    a_mag = std::min(a_mag, std::max(std::abs(*c.L.a_hi), std::abs(*c.L.a_lo)));
  }
  return a_mag * T + 1e-9;
}
double bracket_v_lo(const solve_ctx& c, const scales& s) {
  double lo = c.L.v_lo ? *c.L.v_lo : -s.vel;
  if (c.fixed) lo = std::max(lo, c.s0.velocity - max_dv_within(c, c.T));
  return lo;
}
double bracket_v_hi(const solve_ctx& c, const scales& s) {
  double hi = c.L.v_hi ? *c.L.v_hi : s.vel;
  if (c.fixed) hi = std::min(hi, c.s0.velocity + max_dv_within(c, c.T));
  return hi;
}

// Scan [lo, hi] for sign changes of `f` (which may be undefined over parts
// of the interval) and refine each bracket by bisection. Definedness edges
// are refined too, so roots hiding next to a feasibility boundary are found.
template <class F, class G>
void scan_roots(double lo, double hi, int steps, F&& f, G&& on_root, const std::vector<double>& anchors = {}) {
  if (!(hi > lo)) {
    if (hi == lo && f(lo) && std::abs(*f(lo)) < 1e-9) on_root(lo);
    return;
  }
  const double ztol = 1e-11 * (1.0 + std::abs(lo) + std::abs(hi));

  auto bisect = [&](double a, double b, double fa) {
    for (int it = 0; it < 90; ++it) {
      const double mid = 0.5 * (a + b);
      std::optional<double> fm = f(mid);
      if (!fm) break;
      if ((fa < 0.0) == (*fm < 0.0)) {
        a = mid;
        fa = *fm;
      } else {
        b = mid;
      }
      if (b - a < 1e-15 * (1.0 + std::abs(a))) break;
    }
    on_root(0.5 * (a + b));
  };

  // Bisect the definedness boundary between a defined point and an undefined
  // one; returns the innermost defined sample found.
  auto refine_edge = [&](double defined_x, double undefined_x) -> std::optional<std::pair<double, double>> {
    double a = defined_x, b = undefined_x;
    std::optional<double> fa = f(a);
    if (!fa) return std::nullopt;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (a + b);
      std::optional<double> fm = f(mid);
      if (fm) {
        a = mid;
        fa = *fm;
      } else {
        b = mid;
      }
      if (std::abs(b - a) < 1e-12 * (1.0 + std::abs(a))) break;
    }
    return std::make_pair(a, *fa);
  };

  // Handles one scan cell given its endpoint evaluations; probes the interior
  // of fully-undefined cells so narrow feasibility windows are not skipped.
  auto cell = [&](auto&& self, double xa, std::optional<double> fa, double xb, std::optional<double> fb,
                  int depth) -> void {
        if (fa && fb) {
          if ((*fa < 0.0) != (*fb < 0.0)) bisect(xa, xb, *fa);
          return;
        }
        if (fa && !fb) {
          if (auto edge = refine_edge(xa, xb)) {
            if (std::abs(edge->second) <= ztol) {
              on_root(edge->first);
            } else if ((*fa < 0.0) != (edge->second < 0.0)) {
              bisect(xa, edge->first, *fa);
            }
          }
          return;
        }
        if (!fa && fb) {
          if (auto edge = refine_edge(xb, xa)) {
            if (std::abs(edge->second) <= ztol) {
              on_root(edge->first);
            } else if ((*fb < 0.0) != (edge->second < 0.0)) {
              bisect(edge->first, xb, edge->second);
            }
          }
          return;
        }
        if (depth <= 0) return;
        const double xm = 0.5 * (xa + xb);
        std::optional<double> fm = f(xm);
        if (fm && std::abs(*fm) <= ztol) on_root(xm);
        self(self, xa, fa, xm, fm, fm ? depth : depth - 1);
        self(self, xm, fm, xb, fb, fm ? depth : depth - 1);
      };

  // Sample sequence: uniform grid plus anchor points (typically analytic
  // branch-window edges), each bracketed by nearby probes.
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(steps) + 1 + 3 * anchors.size());
  const double h = (hi - lo) / steps;
  for (int i = 0; i <= steps; ++i) xs.push_back(i == steps ? hi : lo + i * h);
  const double eps = 1e-7 * (hi - lo);
  for (double a : anchors) {
    if (!std::isfinite(a) || a < lo || a > hi) continue;
    xs.push_back(a);
    if (a - eps > lo) xs.push_back(a - eps);
    if (a + eps < hi) xs.push_back(a + eps);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::optional<double> prev = f(xs.front());
  double prev_x = xs.front();
  if (prev && std::abs(*prev) <= ztol) on_root(xs.front());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double x = xs[i];
    std::optional<double> cur = f(x);
    if (cur && std::abs(*cur) <= ztol) on_root(x);
    cell(cell, prev_x, prev, x, cur, 2);
    prev = cur;
    prev_x = x;
  }
}

// Variant of scan_roots that tracks N residual branches in one sweep. The
// evaluator fills an array of optional residuals per sample; sign changes and
// definedness edges are refined per branch.
template <int N, class F, class G>
void scan_roots_multi(double lo, double hi, int steps, F&& eval, G&& on_root,
                      const std::vector<double>& anchors = {}) {
  if (!(hi > lo)) return;
  const double ztol = 1e-11 * (1.0 + std::abs(lo) + std::abs(hi));
  using slots = std::array<std::optional<double>, N>;

  auto eval_one = [&](double x, int k) -> std::optional<double> {
    slots tmp;
    eval(x, tmp);
    return tmp[k];
  };
  auto bisect = [&](int k, double a, double b, double fa) {
    for (int it = 0; it < 90; ++it) {
      const double mid = 0.5 * (a + b);
      std::optional<double> fm = eval_one(mid, k);
      if (!fm) break;
      if ((fa < 0.0) == (*fm < 0.0)) {
        a = mid;
        fa = *fm;
      } else {
        b = mid;
      }
      if (std::abs(b - a) < 1e-15 * (1.0 + std::abs(a))) break;
    }
    on_root(k, 0.5 * (a + b));
  };
  auto refine_edge = [&](int k, double defined_x, double undefined_x) -> std::optional<std::pair<double, double>> {
    double a = defined_x, b = undefined_x;
    std::optional<double> fa = eval_one(a, k);
    if (!fa) return std::nullopt;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (a + b);
      std::optional<double> fm = eval_one(mid, k);
      if (fm) {
        a = mid;
        fa = *fm;
      } else {
        b = mid;
      }
      if (std::abs(b - a) < 1e-12 * (1.0 + std::abs(a))) break;
    }
    return std::make_pair(a, *fa);
  };
  auto cell = [&](auto&& self, double xa, const slots& fa, double xb, const slots& fb, int depth) -> void {
    bool any_pair = false, all_undef = true;
    for (int k = 0; k < N; ++k) {
      if (fa[k] || fb[k]) all_undef = false;
      if (fa[k] && fb[k]) any_pair = true;
    }
    for (int k = 0; k < N; ++k) {
      if (fa[k] && fb[k]) {
        if ((*fa[k] < 0.0) != (*fb[k] < 0.0)) bisect(k, xa, xb, *fa[k]);
      } else if (fa[k] && !fb[k]) {
        if (auto edge = refine_edge(k, xa, xb)) {
          if (std::abs(edge->second) <= ztol) {
            on_root(k, edge->first);
          } else if ((*fa[k] < 0.0) != (edge->second < 0.0)) {
            bisect(k, xa, edge->first, *fa[k]);
          }
        }
      } else if (!fa[k] && fb[k]) {
        if (auto edge = refine_edge(k, xb, xa)) {
          if (std::abs(edge->second) <= ztol) {
            on_root(k, edge->first);
          } else if ((*fb[k] < 0.0) != (edge->second < 0.0)) {
            bisect(k, edge->first, xb, edge->second);
          }
        }
      }
    }
    if (!all_undef || depth <= 0) return;
    (void)any_pair;
    const double xm = 0.5 * (xa + xb);
    slots fm;
    eval(xm, fm);
    for (int k = 0; k < N; ++k) {
      if (fm[k] && std::abs(*fm[k]) <= ztol) on_root(k, xm);
    }
    self(self, xa, fa, xm, fm, depth - 1);
    self(self, xm, fm, xb, fb, depth - 1);
  };

  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(steps) + 1 + 3 * anchors.size());
  const double h = (hi - lo) / steps;
  for (int i = 0; i <= steps; ++i) xs.push_back(i == steps ? hi : lo + i * h);
  const double eps = 1e-7 * (hi - lo);
  for (double a : anchors) {
    if (!std::isfinite(a) || a < lo || a > hi) continue;
    xs.push_back(a);
    if (a - eps > lo) xs.push_back(a - eps);
    if (a + eps < hi) xs.push_back(a + eps);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  slots prev;
  eval(xs.front(), prev);
  double prev_x = xs.front();
  for (int k = 0; k < N; ++k) {
    if (prev[k] && std::abs(*prev[k]) <= ztol) on_root(k, xs.front());
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    slots cur;
    eval(xs[i], cur);
    for (int k = 0; k < N; ++k) {
      if (cur[k] && std::abs(*cur[k]) <= ztol) on_root(k, xs[i]);
    }
    cell(cell, prev_x, prev, xs[i], cur, 2);
    prev = cur;
    prev_x = xs[i];
  }
}

// ---------------------------------------------------------------------------
// Family solvers. Each emits candidates; validation and selection happen
// afterwards over the full pool.
// ---------------------------------------------------------------------------

std::vector<double> end_accel_pins(const solve_ctx& c, std::optional<double> v7);

// Cruise phase at a pinned velocity closes the position equation linearly.
void family_cruise_full(solve_ctx& c) {
  const double v7 = *c.tgt.velocity, a7 = *c.tgt.acceleration;
  for (const std::optional<double>& vc_opt : {c.L.v_hi, c.L.v_lo}) {
    if (!vc_opt) continue;
    const double vc = *vc_opt;
    if (std::abs(vc) < 1e-12) continue;
    for (int s1 : {+1, -1}) {
      stage_sol A[3];
      const int nA = stage_solutions(c.s0.acceleration, 0.0, vc - c.s0.velocity, s1, c.L, A);
      for (int ia = 0; ia < nA; ++ia) {
        const axis_state mid = stage_advance(c.s0, A[ia]);
        for (int s2 : {+1, -1}) {
          stage_sol B[3];
          const int nB = stage_solutions(0.0, a7, v7 - vc, s2, c.L, B);
          for (int ib = 0; ib < nB; ++ib) {
            axis_state probe(0.0, vc, 0.0);
            const double dp_b = stage_advance(probe, B[ib]).position;
            const double t4 = (*c.tgt.position - mid.position - dp_b) / vc;
            if (t4 < -k_tneg_tol) continue;
            phase_buf buf;
            buf.push(A[ia]);
            buf.push(std::max(t4, 0.0), 0.0);
            buf.push(B[ib]);
            c.emit("cruise", buf);
          }
        }
      }
    }
  }
}

// Junction family: ramp a0 -> alpha, then a closing stage to (v7, a7).
// One nonlinear unknown (alpha); position residual root-solved.
void family_junction_full(solve_ctx& c) {
  const scales sc = make_scales(c);
  const double v7 = *c.tgt.velocity, a7 = *c.tgt.acceleration;
  const double alo = bracket_a_lo(c, sc), ahi = bracket_a_hi(c, sc);
  // Stage-branch validity edges in alpha: where the closing stage's peak
  // crosses zero, the far endpoint, or the acceleration cap. Quadratics.
  auto stage_edge_anchors = [&](int s2) {
    std::vector<double> out;
    const double j_up = s2 > 0 ? c.L.j_hi : c.L.j_lo;
    const double j_dn = s2 > 0 ? c.L.j_lo : c.L.j_hi;
    const double k = 1.0 / (2.0 * j_up) - 1.0 / (2.0 * j_dn);
    const std::optional<double> cap = s2 > 0 ? c.L.a_hi : c.L.a_lo;
    for (double j1 : {c.L.j_lo, c.L.j_hi}) {
      const double A = -1.0 / (2.0 * j1) + 1.0 / (2.0 * j_up);
      const double C = v7 - c.s0.velocity + c.s0.acceleration * c.s0.acceleration / (2.0 * j1) -
                       a7 * a7 / (2.0 * j_dn);
      std::vector<double> rhs{0.0, k * a7 * a7};
      if (cap) rhs.push_back(k * *cap * *cap);
      for (double q : rhs) {
        for (double root : solve_quadratic(A, 0.0, C - q)) out.push_back(root);
      }
      for (double root : solve_quadratic(A - k, 0.0, C)) out.push_back(root);
    }
    return out;
  };
  for (int s2 : {+1, -1}) {
    const std::vector<double> anchors = stage_edge_anchors(s2);
    auto eval = [&](double alpha, std::array<std::optional<double>, 3>& out) {
      out = {};
      const double j1 = alpha >= c.s0.acceleration ? c.L.j_hi : c.L.j_lo;
      const double t1 = (alpha - c.s0.acceleration) / j1;
      const axis_state mid = advance(c.s0, j1, t1);
      stage_sol g[3];
      const int n = stage_solutions(alpha, a7, v7 - mid.velocity, s2, c.L, g);
      for (int b = 0; b < n; ++b) {
        out[b] = stage_advance(mid, g[b]).position - *c.tgt.position;
      }
    };
    auto on_root = [&](int branch, double alpha) {
      const double j1 = alpha >= c.s0.acceleration ? c.L.j_hi : c.L.j_lo;
      const double t1 = (alpha - c.s0.acceleration) / j1;
      const axis_state mid = advance(c.s0, j1, t1);
      stage_sol g[3];
      const int n = stage_solutions(alpha, a7, v7 - mid.velocity, s2, c.L, g);
      if (branch >= n) return;
      phase_buf buf;
      buf.push(t1, j1);
      buf.push(g[branch]);
      c.emit("junction", buf);
    };
    scan_roots_multi<3>(alo, ahi, 40, eval, on_root, anchors);
  }
}

// Hold at an acceleration limit before the closing stage; the hold duration
// is the scanned unknown.
void family_hold_full(solve_ctx& c) {
  const scales sc = make_scales(c);
  const double v7 = *c.tgt.velocity, a7 = *c.tgt.acceleration;
  for (const std::optional<double>& pin : {c.L.a_hi, c.L.a_lo}) {
    if (!pin || std::abs(*pin) < 1e-12) continue;
    const double P = *pin;
    const double j1 = P >= c.s0.acceleration ? c.L.j_hi : c.L.j_lo;
    const double t1 = (P - c.s0.acceleration) / j1;
    const axis_state after_r1 = advance(c.s0, j1, t1);
    for (int s2 : {+1, -1}) {
      // Branch-window edges: dv(t2) is linear in t2, so each edge value of
      // the closing stage's discriminant gives one anchor.
      std::vector<double> anchors;
      {
        const double j_up = s2 > 0 ? c.L.j_hi : c.L.j_lo;
        const double j_dn = s2 > 0 ? c.L.j_lo : c.L.j_hi;
        const double k = 1.0 / (2.0 * j_up) - 1.0 / (2.0 * j_dn);
        const double cc = -P * P / (2.0 * j_up) + a7 * a7 / (2.0 * j_dn);
        const std::optional<double> cap = s2 > 0 ? c.L.a_hi : c.L.a_lo;
        const double m = s2 > 0 ? std::max(P, a7) : std::min(P, a7);
        std::vector<double> dv_edges{cc, cc + k * m * m};
        if (cap) dv_edges.push_back(cc + k * *cap * *cap);
        for (double dv_e : dv_edges) {
          // v7 - (v_r1 + P t2) = dv_e
          if (std::abs(P) > 1e-12) anchors.push_back((v7 - after_r1.velocity - dv_e) / P);
        }
      }
      auto eval = [&](double t2, std::array<std::optional<double>, 3>& out) {
        out = {};
        const axis_state mid = advance(after_r1, 0.0, t2);
        stage_sol g[3];
        const int n = stage_solutions(P, a7, v7 - mid.velocity, s2, c.L, g);
        for (int b = 0; b < n; ++b) {
          out[b] = stage_advance(mid, g[b]).position - *c.tgt.position;
        }
      };
      auto on_root = [&](int branch, double t2) {
        const axis_state mid = advance(after_r1, 0.0, t2);
        stage_sol g[3];
        const int n = stage_solutions(P, a7, v7 - mid.velocity, s2, c.L, g);
        if (branch >= n) return;
        phase_buf buf;
        buf.push(t1, j1);
        buf.push(t2, 0.0);
        buf.push(g[branch]);
        c.emit("limit_hold", buf);
      };
      scan_roots_multi<3>(0.0, sc.dur, 40, eval, on_root, anchors);
    }
  }
}

// Fixed duration, fully defined target: cruise at a free junction velocity;
// the cruise duration absorbs the time budget and the position residual is
// root-solved over the junction velocity.
void family_fixed_cruise_full(solve_ctx& c) {
  const scales sc = make_scales(c);
  const double v7 = *c.tgt.velocity, a7 = *c.tgt.acceleration;
  const double vlo = bracket_v_lo(c, sc), vhi = bracket_v_hi(c, sc);
  for (int s1 : {+1, -1}) {
    for (int s2 : {+1, -1}) {
      auto eval = [&](double vc, std::array<std::optional<double>, 9>& out) {
        out = {};
        stage_sol A[3];
        const int nA = stage_solutions(c.s0.acceleration, 0.0, vc - c.s0.velocity, s1, c.L, A);
        if (nA == 0) return;
        stage_sol B[3];
        const int nB = stage_solutions(0.0, a7, v7 - vc, s2, c.L, B);
        if (nB == 0) return;
        for (int ia = 0; ia < nA; ++ia) {
          const axis_state mid = stage_advance(c.s0, A[ia]);
          for (int ib = 0; ib < nB; ++ib) {
            const double t4 = c.T - A[ia].duration() - B[ib].duration();
            if (t4 < -k_tneg_tol) continue;
            const axis_state mid2 = advance(mid, 0.0, std::max(t4, 0.0));
            out[ia * 3 + ib] = stage_advance(mid2, B[ib]).position - *c.tgt.position;
          }
        }
      };
      auto on_root = [&](int k, double vc) {
        stage_sol A[3];
        const int nA = stage_solutions(c.s0.acceleration, 0.0, vc - c.s0.velocity, s1, c.L, A);
        stage_sol B[3];
        const int nB = stage_solutions(0.0, a7, v7 - vc, s2, c.L, B);
        const int ia = k / 3, ib = k % 3;
        if (ia >= nA || ib >= nB) return;
        const double t4 = c.T - A[ia].duration() - B[ib].duration();
        if (t4 < -k_tneg_tol) return;
        phase_buf buf;
        buf.push(A[ia]);
        buf.push(std::max(t4, 0.0), 0.0);
        buf.push(B[ib]);
        c.emit("fixed_cruise", buf);
      };
      scan_roots_multi<9>(vlo, vhi, 48, eval, on_root);
    }
  }
}

// Fixed duration without an a = 0 junction: ramp to P, hold, ramp to Q,
// singular hold at Q, ramp to a7. The Q-hold makes the time budget closable
// for targets whose acceleration never crosses zero.
void family_fixed_singular_hold(solve_ctx& c) {
  const scales sc = make_scales(c);
  const double v7 = *c.tgt.velocity, a7 = *c.tgt.acceleration;
  const double dv_target = v7 - c.s0.velocity;

  auto run_variant = [&](bool p_pinned, double P_value) {
    auto inner = [&](double outer) -> std::optional<std::vector<std::array<double, 2>>> {
      // outer = tP (hold at pinned P) or P itself (free-P variant, tP = 0).
      const double P = p_pinned ? P_value : outer;
      const double tP = p_pinned ? outer : 0.0;
      const double j1 = P >= c.s0.acceleration ? c.L.j_hi : c.L.j_lo;
      const double t1 = (P - c.s0.acceleration) / j1;
      if (t1 < 0.0) return std::nullopt;
      if (c.L.a_hi && P > *c.L.a_hi + 1e-9) return std::nullopt;
      if (c.L.a_lo && P < *c.L.a_lo - 1e-9) return std::nullopt;

      // Try both jerk branches for the P->Q and Q->a7 ramps.
      for (double j2 : {c.L.j_lo, c.L.j_hi}) {
        for (double j3 : {c.L.j_lo, c.L.j_hi}) {
          // T: t1 + tP + (Q-P)/j2 + tQ + (a7-Q)/j3 = T  ->  tQ linear in Q.
          // dv: ramps quadratic + P tP + Q tQ = dv_target -> quadratic in Q.
          const double budget = c.T - t1 - tP;
          // tQ = budget - (Q-P)/j2 - (a7-Q)/j3 = budget + P/j2 - a7/j3 + Q(1/j3 - 1/j2)
          const double tq0 = budget + P / j2 - a7 / j3;
          const double tq1 = 1.0 / j3 - 1.0 / j2;
          // dv = dv(r1) + P tP + (Q^2-P^2)/(2 j2) + Q tQ + (a7^2-Q^2)/(2 j3)
          const double dv_r1 = (P * P - c.s0.acceleration * c.s0.acceleration) / (2.0 * j1);
          const double cc0 = dv_r1 + P * tP - P * P / (2.0 * j2) + a7 * a7 / (2.0 * j3) - dv_target;
          const double cc1 = tq0;
          const double cc2 = 1.0 / (2.0 * j2) - 1.0 / (2.0 * j3) + tq1;
          double q_roots[2];
          const int nq = solve_quadratic_fast(cc2, cc1, cc0, q_roots);
          for (int qi = 0; qi < nq; ++qi) {
            const double Q = q_roots[qi];
            const double t2 = (Q - P) / j2;
            const double t3 = (a7 - Q) / j3;
            const double tQ = tq0 + tq1 * Q;
            if (t2 < -k_tneg_tol || t3 < -k_tneg_tol || tQ < -k_tneg_tol) continue;
            if (c.L.a_hi && Q > *c.L.a_hi + 1e-9) continue;
            if (c.L.a_lo && Q < *c.L.a_lo - 1e-9) continue;
            return std::vector<std::array<double, 2>>{
                {t1, j1}, {tP, 0.0}, {std::max(t2, 0.0), j2}, {std::max(tQ, 0.0), 0.0}, {std::max(t3, 0.0), j3}};
          }
          (void)0;
        }
      }
      return std::nullopt;
    };

    auto residual = [&](double outer) -> std::optional<double> {
      auto ph = inner(outer);
      if (!ph) return std::nullopt;
      axis_state s = c.s0;
      for (const auto& p : *ph) s = advance(s, p[1], std::max(p[0], 0.0));
      return s.position - *c.tgt.position;
    };
    const double lo = p_pinned ? 0.0 : bracket_a_lo(c, sc);
    const double hi = p_pinned ? c.T : bracket_a_hi(c, sc);
    scan_roots(lo, hi, 32, residual, [&](double outer) {
      auto ph = inner(outer);
      if (!ph) return;
      phase_buf buf;
      for (const auto& p : *ph) buf.push(std::max(p[0], 0.0), p[1]);
      c.emit("fixed_singular_hold", buf);
    });
  };

  if (c.L.a_hi) run_variant(true, *c.L.a_hi);
  if (c.L.a_lo) run_variant(true, *c.L.a_lo);
  run_variant(false, 0.0);
}

// --- position + acceleration defined, velocity free -----------------------

void family_pa_direct(solve_ctx& c) {
  const scales sc = make_scales(c);
  const double a7 = *c.tgt.acceleration;
  // ramp a0 -> alpha -> a7, no velocity equation; position residual in alpha.
  auto build = [&](double alpha) -> std::optional<phase_buf> {
    const double j1 = alpha >= c.s0.acceleration ? c.L.j_hi : c.L.j_lo;
    const double j2 = a7 >= alpha ? c.L.j_hi : c.L.j_lo;
    const double t1 = (alpha - c.s0.acceleration) / j1;
    const double t2 = (a7 - alpha) / j2;
    if (t1 < 0.0 || t2 < 0.0) return std::nullopt;
    phase_buf buf;
    buf.push(t1, j1);
    buf.push(t2, j2);
    return buf;
  };
  auto residual = [&](double alpha) -> std::optional<double> {
    auto buf = build(alpha);
    if (!buf) return std::nullopt;
    axis_state s = c.s0;
    for (int i = 0; i < buf->n; ++i) s = advance(s, buf->items[i].jerk, buf->items[i].duration);
    return s.position - *c.tgt.position;
  };
  scan_roots(bracket_a_lo(c, sc), bracket_a_hi(c, sc), 32, residual, [&](double alpha) {
    auto buf = build(alpha);
    if (buf) c.emit("pa_direct", *buf);
  });

  // ramp to a limit, hold, ramp to a7; hold duration scanned.
  for (const std::optional<double>& pin : {c.L.a_hi, c.L.a_lo}) {
    if (!pin || std::abs(*pin) < 1e-12) continue;
    const double P = *pin;
    const double j1 = P >= c.s0.acceleration ? c.L.j_hi : c.L.j_lo;
    const double j3 = a7 >= P ? c.L.j_hi : c.L.j_lo;
    const double t1 = (P - c.s0.acceleration) / j1;
    const double t3 = (a7 - P) / j3;
    if (t1 < 0.0 || t3 < 0.0) continue;
    auto residual2 = [&](double t2) -> std::optional<double> {
      axis_state s = advance(c.s0, j1, t1);
      s = advance(s, 0.0, t2);
      s = advance(s, j3, t3);
      return s.position - *c.tgt.position;
    };
    scan_roots(0.0, sc.dur, 32, residual2, [&](double t2) {
      phase_buf buf;
      buf.push(t1, j1);
      buf.push(t2, 0.0);
      buf.push(t3, j3);
      c.emit("pa_hold", buf);
    });
  }
}

// Cruise at the highest future-safe velocity, then taper to a7.
void family_pa_safe_cruise(solve_ctx& c) {
  const double a7 = *c.tgt.acceleration;
  const double j_taper = a7 >= 0.0 ? c.L.j_hi : c.L.j_lo;
  const double t_taper = a7 / j_taper;
  if (t_taper < 0.0) return;
  axis_state probe(0.0, 0.0, 0.0);
  const axis_state taper_end = advance(probe, j_taper, t_taper);
  const double dv_taper = taper_end.velocity;

  struct side_def {
    std::optional<double> bound;
    int dir;
  };
  for (const side_def side : {side_def{c.L.v_hi, +1}, side_def{c.L.v_lo, -1}}) {
    if (!side.bound) continue;
    double vc;
    if (side.dir > 0) {
      vc = *side.bound - std::max(0.0, dv_taper + future_rise(a7, c.L));
    } else {
      vc = *side.bound + std::max(0.0, -dv_taper + future_drop(a7, c.L));
    }
    if (std::abs(vc) < 1e-12) continue;
    for (int s1 : {+1, -1}) {
      stage_sol A[3];
      const int nA = stage_solutions(c.s0.acceleration, 0.0, vc - c.s0.velocity, s1, c.L, A);
      for (int ia = 0; ia < nA; ++ia) {
        const axis_state mid = stage_advance(c.s0, A[ia]);
        const double dp_taper = vc * t_taper + taper_end.position;
        const double t4 = (*c.tgt.position - mid.position - dp_taper) / vc;
        if (t4 < -k_tneg_tol) continue;
        phase_buf buf;
        buf.push(A[ia]);
        buf.push(std::max(t4, 0.0), 0.0);
        buf.push(t_taper, j_taper);
        c.emit("pa_safe_cruise", buf);
      }
    }
  }
}

// Fixed duration with free velocity: cruise at a free junction velocity and
// taper to a7; valid whenever the trajectory has room to loiter.
void family_pa_fixed_cruise(solve_ctx& c) {
  const scales sc = make_scales(c);
  const double a7 = *c.tgt.acceleration;
  const double j_taper = a7 >= 0.0 ? c.L.j_hi : c.L.j_lo;
  const double t_taper = a7 / j_taper;
  if (t_taper < 0.0) return;
  for (int s1 : {+1, -1}) {
    auto build = [&](int b1, double vc) -> std::optional<phase_buf> {
      stage_sol A[3];
      const int nA = stage_solutions(c.s0.acceleration, 0.0, vc - c.s0.velocity, s1, c.L, A);
      if (b1 >= nA) return std::nullopt;
      const double t4 = c.T - A[b1].duration() - t_taper;
      if (t4 < -k_tneg_tol) return std::nullopt;
      phase_buf buf;
      buf.push(A[b1]);
      buf.push(std::max(t4, 0.0), 0.0);
      buf.push(t_taper, j_taper);
      return buf;
    };
    auto eval = [&](double vc, std::array<std::optional<double>, 3>& out) {
      out = {};
      for (int b1 = 0; b1 < 3; ++b1) {
        auto buf = build(b1, vc);
        if (!buf) continue;
        axis_state st = c.s0;
        for (int i = 0; i < buf->n; ++i) st = advance(st, buf->items[i].jerk, buf->items[i].duration);
        out[b1] = st.position - *c.tgt.position;
      }
    };
    auto on_root = [&](int b1, double vc) {
      auto buf = build(b1, vc);
      if (buf) c.emit("pa_fixed_cruise", *buf);
    };
    scan_roots_multi<3>(bracket_v_lo(c, sc), bracket_v_hi(c, sc), 48, eval, on_root);
  }
}

// Fixed duration with free velocity: wind up against the motion direction,
// sweep through, taper to a7. Hold subsets give closed forms; the remaining
// sets are one-dimensional scans. template_sign=+1 maximizes the end
// velocity, -1 minimizes it.
void family_pa_fixed_wind(solve_ctx& c, int template_sign) {
  const double a7 = *c.tgt.acceleration;
  const double j_dn = template_sign > 0 ? c.L.j_lo : c.L.j_hi;  // wind-down jerk
  const double j_up = template_sign > 0 ? c.L.j_hi : c.L.j_lo;  // sweep jerk
  const std::optional<double> Aw = template_sign > 0 ? c.L.a_lo : c.L.a_hi;  // wind hold level
  const std::optional<double> Ah = template_sign > 0 ? c.L.a_hi : c.L.a_lo;  // sweep hold level
  const scales sc = make_scales(c);

  // Phases: r1 a0->alpha_w (j_dn), hold tw, r2 alpha_w->gamma (j_up), hold th,
  // r3 gamma->a7 (j_dn). T is linear in every unknown.
  auto assemble = [&](double alpha_w, double tw, double gamma, double th) -> std::optional<phase_buf> {
    const double t1 = (alpha_w - c.s0.acceleration) / j_dn;
    const double t2 = (gamma - alpha_w) / j_up;
    const double t3 = (a7 - gamma) / j_dn;
    if (t1 < -k_tneg_tol || t2 < -k_tneg_tol || t3 < -k_tneg_tol || tw < -k_tneg_tol || th < -k_tneg_tol) {
      return std::nullopt;
    }
    if (c.L.a_hi && gamma > *c.L.a_hi + 1e-9) return std::nullopt;
    if (c.L.a_lo && gamma < *c.L.a_lo - 1e-9) return std::nullopt;
    if (c.L.a_hi && alpha_w > *c.L.a_hi + 1e-9) return std::nullopt;
    if (c.L.a_lo && alpha_w < *c.L.a_lo - 1e-9) return std::nullopt;
    phase_buf buf;
    buf.push(std::max(t1, 0.0), j_dn);
    buf.push(std::max(tw, 0.0), 0.0);
    buf.push(std::max(t2, 0.0), j_up);
    buf.push(std::max(th, 0.0), 0.0);
    buf.push(std::max(t3, 0.0), j_dn);
    return buf;
  };
  auto emit_if_root = [&](double alpha_w, double tw, double gamma, double th) {
    auto buf = assemble(alpha_w, tw, gamma, th);
    if (buf) c.emit("pa_fixed_wind", *buf);
  };
  auto position_of = [&](double alpha_w, double tw, double gamma, double th) -> std::optional<double> {
    auto buf = assemble(alpha_w, tw, gamma, th);
    if (!buf) return std::nullopt;
    axis_state s = c.s0;
    for (int i = 0; i < buf->n; ++i) s = advance(s, buf->items[i].jerk, buf->items[i].duration);
    return s.position;
  };
  auto ramp_time = [&](double alpha_w, double gamma) {
    return (alpha_w - c.s0.acceleration) / j_dn + (gamma - alpha_w) / j_up + (a7 - gamma) / j_dn;
  };

  // {w,h}: both holds active, closed form via scan on tw (position quadratic).
  if (Aw && Ah) {
    auto residual = [&](double tw) -> std::optional<double> {
      const double th = c.T - ramp_time(*Aw, *Ah) - tw;
      if (th < -k_tneg_tol) return std::nullopt;
      auto p = position_of(*Aw, tw, *Ah, std::max(th, 0.0));
      if (!p) return std::nullopt;
      return *p - *c.tgt.position;
    };
    scan_roots(0.0, c.T, 48, residual, [&](double tw) {
      const double th = c.T - ramp_time(*Aw, *Ah) - tw;
      emit_if_root(*Aw, tw, *Ah, std::max(th, 0.0));
    });
  }
  // {w}: wind hold active, gamma free.
  if (Aw) {
    auto residual = [&](double gamma) -> std::optional<double> {
      const double tw = c.T - ramp_time(*Aw, gamma);
      if (tw < -k_tneg_tol) return std::nullopt;
      auto p = position_of(*Aw, std::max(tw, 0.0), gamma, 0.0);
      if (!p) return std::nullopt;
      return *p - *c.tgt.position;
    };
    scan_roots(bracket_a_lo(c, sc), bracket_a_hi(c, sc), 32, residual, [&](double gamma) {
      const double tw = c.T - ramp_time(*Aw, gamma);
      emit_if_root(*Aw, std::max(tw, 0.0), gamma, 0.0);
    });
  }
  // {h}: sweep hold active, alpha_w free.
  if (Ah) {
    auto residual = [&](double alpha_w) -> std::optional<double> {
      const double th = c.T - ramp_time(alpha_w, *Ah);
      if (th < -k_tneg_tol) return std::nullopt;
      auto p = position_of(alpha_w, 0.0, *Ah, std::max(th, 0.0));
      if (!p) return std::nullopt;
      return *p - *c.tgt.position;
    };
    scan_roots(bracket_a_lo(c, sc), bracket_a_hi(c, sc), 32, residual, [&](double alpha_w) {
      const double th = c.T - ramp_time(alpha_w, *Ah);
      emit_if_root(alpha_w, 0.0, *Ah, std::max(th, 0.0));
    });
  }
  // {}: no holds; gamma from the time budget, alpha_w scanned.
  {
    auto gamma_of = [&](double alpha_w) -> double {
      // T = t1 + t2 + t3 with t2,t3 linear in gamma.
      // T = (alpha_w - a0)/j_dn + (gamma - alpha_w)/j_up + (a7 - gamma)/j_dn
      const double base = (alpha_w - c.s0.acceleration) / j_dn - alpha_w / j_up + a7 / j_dn;
      const double slope = 1.0 / j_up - 1.0 / j_dn;
      if (std::abs(slope) < 1e-300) return std::numeric_limits<double>::quiet_NaN();
      return (c.T - base) / slope;
    };
    auto residual = [&](double alpha_w) -> std::optional<double> {
      const double gamma = gamma_of(alpha_w);
      if (!std::isfinite(gamma)) return std::nullopt;
      auto p = position_of(alpha_w, 0.0, gamma, 0.0);
      if (!p) return std::nullopt;
      return *p - *c.tgt.position;
    };
    scan_roots(bracket_a_lo(c, sc), bracket_a_hi(c, sc), 32, residual, [&](double alpha_w) {
      const double gamma = gamma_of(alpha_w);
      if (std::isfinite(gamma)) emit_if_root(alpha_w, 0.0, gamma, 0.0);
    });
  }

  // Velocity-capped variant: wind, stage to the safe ceiling, ride, taper.
  const std::optional<double> cap = template_sign > 0 ? c.L.v_hi : c.L.v_lo;
  if (cap) {
    const double j_taper = a7 >= 0.0 ? c.L.j_hi : c.L.j_lo;
    const double t_taper = a7 / j_taper;
    if (t_taper >= 0.0) {
      axis_state probe(0.0, 0.0, 0.0);
      const axis_state taper_end = advance(probe, j_taper, t_taper);
      double vc;
      if (template_sign > 0) {
        vc = *cap - std::max(0.0, taper_end.velocity + future_rise(a7, c.L));
      } else {
        vc = *cap + std::max(0.0, -taper_end.velocity + future_drop(a7, c.L));
      }
      for (int s1 : {+1, -1}) {
        for (int b1 = 0; b1 < 3; ++b1) {
          auto assemble_ride = [&](double vw) -> std::optional<phase_buf> {
            stage_sol W[3];
            const int nW = stage_solutions(c.s0.acceleration, 0.0, vw - c.s0.velocity, s1, c.L, W);
            if (b1 >= nW) return std::nullopt;
            stage_sol R[3];
            const int nR = stage_solutions(0.0, 0.0, vc - vw, template_sign, c.L, R);
            if (nR == 0) return std::nullopt;
            const double tv = c.T - W[b1].duration() - R[0].duration() - t_taper;
            if (tv < -k_tneg_tol) return std::nullopt;
            phase_buf buf;
            buf.push(W[b1]);
            buf.push(R[0]);
            buf.push(std::max(tv, 0.0), 0.0);
            buf.push(t_taper, j_taper);
            return buf;
          };
          auto residual = [&](double vw) -> std::optional<double> {
            auto buf = assemble_ride(vw);
            if (!buf) return std::nullopt;
            axis_state s = c.s0;
            for (int i = 0; i < buf->n; ++i) s = advance(s, buf->items[i].jerk, buf->items[i].duration);
            return s.position - *c.tgt.position;
          };
          scan_roots(bracket_v_lo(c, sc), bracket_v_hi(c, sc), 32, residual, [&](double vw) {
            auto buf = assemble_ride(vw);
            if (buf) c.emit("pa_fixed_ride", *buf);
          });
        }
      }
    }
  }
}

// --- position + velocity defined, acceleration free -----------------------

void family_pv(solve_ctx& c) {
  const scales sc = make_scales(c);
  const double v7 = *c.tgt.velocity;
  // ramp a0 -> alpha, ramp alpha -> a_end with a_end from the velocity
  // equation; position residual over alpha.
  for (double j2 : {c.L.j_lo, c.L.j_hi}) {
    for (int root_sign : {+1, -1}) {
      auto build = [&](double alpha) -> std::optional<phase_buf> {
        const double j1 = alpha >= c.s0.acceleration ? c.L.j_hi : c.L.j_lo;
        const double t1 = (alpha - c.s0.acceleration) / j1;
        if (t1 < 0.0) return std::nullopt;
        const axis_state mid = advance(c.s0, j1, t1);
        // (a_end^2 - alpha^2) / (2 j2) = v7 - mid.v
        const double rr = alpha * alpha + 2.0 * j2 * (v7 - mid.velocity);
        if (rr < 0.0) return std::nullopt;
        const double a_end = root_sign * std::sqrt(rr);
        const double t2 = (a_end - alpha) / j2;
        if (t2 < 0.0) return std::nullopt;
        if (c.L.a_hi && a_end > *c.L.a_hi + 1e-9) return std::nullopt;
        if (c.L.a_lo && a_end < *c.L.a_lo - 1e-9) return std::nullopt;
        phase_buf buf;
        buf.push(t1, j1);
        buf.push(t2, j2);
        return buf;
      };
      auto residual = [&](double alpha) -> std::optional<double> {
        auto buf = build(alpha);
        if (!buf) return std::nullopt;
        axis_state s = c.s0;
        for (int i = 0; i < buf->n; ++i) s = advance(s, buf->items[i].jerk, buf->items[i].duration);
        return s.position - *c.tgt.position;
      };
      scan_roots(bracket_a_lo(c, sc), bracket_a_hi(c, sc), 32, residual, [&](double alpha) {
        auto buf = build(alpha);
        if (buf) c.emit("pv_direct", *buf);
      });
    }
  }
  // hold at a limit between the ramps.
  for (const std::optional<double>& pin : {c.L.a_hi, c.L.a_lo}) {
    if (!pin || std::abs(*pin) < 1e-12) continue;
    const double P = *pin;
    const double j1 = P >= c.s0.acceleration ? c.L.j_hi : c.L.j_lo;
    const double t1 = (P - c.s0.acceleration) / j1;
    if (t1 < 0.0) continue;
    const axis_state after_r1 = advance(c.s0, j1, t1);
    for (double j2 : {c.L.j_lo, c.L.j_hi}) {
      for (int root_sign : {+1, -1}) {
        auto build = [&](double t2) -> std::optional<phase_buf> {
          const axis_state mid = advance(after_r1, 0.0, t2);
          const double rr = P * P + 2.0 * j2 * (v7 - mid.velocity);
          if (rr < 0.0) return std::nullopt;
          const double a_end = root_sign * std::sqrt(rr);
          const double t3 = (a_end - P) / j2;
          if (t3 < 0.0) return std::nullopt;
          if (c.L.a_hi && a_end > *c.L.a_hi + 1e-9) return std::nullopt;
          if (c.L.a_lo && a_end < *c.L.a_lo - 1e-9) return std::nullopt;
          phase_buf buf;
          buf.push(t1, j1);
          buf.push(t2, 0.0);
          buf.push(t3, j2);
          return buf;
        };
        auto residual = [&](double t2) -> std::optional<double> {
          auto buf = build(t2);
          if (!buf) return std::nullopt;
          axis_state s = c.s0;
          for (int i = 0; i < buf->n; ++i) s = advance(s, buf->items[i].jerk, buf->items[i].duration);
          return s.position - *c.tgt.position;
        };
        scan_roots(0.0, sc.dur, 32, residual, [&](double t2) {
          auto buf = build(t2);
          if (buf) c.emit("pv_hold", *buf);
        });
      }
    }
  }
  // cruise at a velocity limit, then final ramp 0 -> a_end.
  for (const std::optional<double>& vc_opt : {c.L.v_hi, c.L.v_lo}) {
    if (!vc_opt || std::abs(*vc_opt) < 1e-12) continue;
    const double vc = *vc_opt;
    for (double j2 : {c.L.j_lo, c.L.j_hi}) {
      for (int root_sign : {+1, -1}) {
        const double rr = 2.0 * j2 * (v7 - vc);
        if (rr < 0.0) continue;
        const double a_end = root_sign * std::sqrt(rr);
        const double t3 = (a_end - 0.0) / j2;
        if (t3 < 0.0) continue;
        for (int s1 : {+1, -1}) {
          stage_sol A[3];
          const int nA = stage_solutions(c.s0.acceleration, 0.0, vc - c.s0.velocity, s1, c.L, A);
          for (int ia = 0; ia < nA; ++ia) {
            const axis_state mid = stage_advance(c.s0, A[ia]);
            axis_state probe(0.0, vc, 0.0);
            const double dp3 = advance(probe, j2, t3).position;
            const double t4 = (*c.tgt.position - mid.position - dp3) / vc;
            if (t4 < -k_tneg_tol) continue;
            phase_buf buf;
            buf.push(A[ia]);
            buf.push(std::max(t4, 0.0), 0.0);
            buf.push(t3, j2);
            c.emit("pv_cruise", buf);
          }
        }
      }
    }
  }
}

// Fixed duration, acceleration free: cruise at a free velocity, final ramp
// to the acceleration that closes the velocity equation.
void family_pv_fixed(solve_ctx& c) {
  const scales sc = make_scales(c);
  const double v7 = *c.tgt.velocity;
  for (double j2 : {c.L.j_lo, c.L.j_hi}) {
    for (int root_sign : {+1, -1}) {
      for (int s1 : {+1, -1}) {
        auto build = [&](int b1, double vc) -> std::optional<phase_buf> {
          stage_sol A[3];
          const int nA = stage_solutions(c.s0.acceleration, 0.0, vc - c.s0.velocity, s1, c.L, A);
          if (b1 >= nA) return std::nullopt;
          const double rr = 2.0 * j2 * (v7 - vc);
          if (rr < 0.0) return std::nullopt;
          const double a_end = root_sign * std::sqrt(rr);
          const double t3 = a_end / j2;
          if (t3 < 0.0) return std::nullopt;
          if (c.L.a_hi && a_end > *c.L.a_hi + 1e-9) return std::nullopt;
          if (c.L.a_lo && a_end < *c.L.a_lo - 1e-9) return std::nullopt;
          const double t4 = c.T - A[b1].duration() - t3;
          if (t4 < -k_tneg_tol) return std::nullopt;
          phase_buf buf;
          buf.push(A[b1]);
          buf.push(std::max(t4, 0.0), 0.0);
          buf.push(t3, j2);
          return buf;
        };
        auto eval = [&](double vc, std::array<std::optional<double>, 3>& out) {
          out = {};
          for (int b1 = 0; b1 < 3; ++b1) {
            auto buf = build(b1, vc);
            if (!buf) continue;
            axis_state st = c.s0;
            for (int i = 0; i < buf->n; ++i) st = advance(st, buf->items[i].jerk, buf->items[i].duration);
            out[b1] = st.position - *c.tgt.position;
          }
        };
        auto on_root = [&](int b1, double vc) {
          auto buf = build(b1, vc);
          if (buf) c.emit("pv_fixed_cruise", *buf);
        };
        scan_roots_multi<3>(bracket_v_lo(c, sc), bracket_v_hi(c, sc), 48, eval, on_root);
      }
    }
  }
}

// Fixed duration, acceleration free, tight budgets: ramp, hold at the peak,
// final ramp to the end acceleration that closes the velocity equation.
void family_pv_fixed_direct(solve_ctx& c) {
  const scales sc = make_scales(c);
  const double v7 = *c.tgt.velocity;
  for (double j2 : {c.L.j_lo, c.L.j_hi}) {
    auto build = [&](double alpha) -> std::optional<phase_buf> {
      const double j1 = alpha >= c.s0.acceleration ? c.L.j_hi : c.L.j_lo;
      const double t1 = (alpha - c.s0.acceleration) / j1;
      if (t1 < 0.0 || t1 > c.T + k_tneg_tol) return std::nullopt;
      const double dv_r1 = (alpha * alpha - c.s0.acceleration * c.s0.acceleration) / (2.0 * j1);
      // dv = dv_r1 + alpha th + (ae^2 - alpha^2)/(2 j2), th = T - t1 - (ae - alpha)/j2
      const double base_t = c.T - t1;
      const double cc2 = 1.0 / (2.0 * j2);
      const double cc1 = -alpha / j2;
      const double cc0 =
          dv_r1 + alpha * base_t + alpha * alpha / j2 - alpha * alpha / (2.0 * j2) - (v7 - c.s0.velocity);
      for (double ae : solve_quadratic(cc2, cc1, cc0)) {
        const double t3 = (ae - alpha) / j2;
        const double th = base_t - t3;
        if (t3 < -k_tneg_tol || th < -k_tneg_tol) continue;
        if (c.L.a_hi && ae > *c.L.a_hi + 1e-9) continue;
        if (c.L.a_lo && ae < *c.L.a_lo - 1e-9) continue;
        phase_buf buf;
        buf.push(t1, j1);
        buf.push(std::max(th, 0.0), 0.0);
        buf.push(std::max(t3, 0.0), j2);
        return buf;
      }
      return std::nullopt;
    };
    auto residual = [&](double alpha) -> std::optional<double> {
      auto buf = build(alpha);
      if (!buf) return std::nullopt;
      axis_state s = c.s0;
      for (int i = 0; i < buf->n; ++i) s = advance(s, buf->items[i].jerk, buf->items[i].duration);
      return s.position - *c.tgt.position;
    };
    scan_roots(bracket_a_lo(c, sc), bracket_a_hi(c, sc), 48, residual, [&](double alpha) {
      auto buf = build(alpha);
      if (buf) c.emit("pv_fixed_direct", *buf);
    });
  }
}

// --- velocity + acceleration defined, position free -----------------------

void family_va(solve_ctx& c) {
  const double v7 = *c.tgt.velocity, a7 = *c.tgt.acceleration;
  for (int s : {+1, -1}) {
    stage_sol g[3];
    const int n = stage_solutions(c.s0.acceleration, a7, v7 - c.s0.velocity, s, c.L, g);
    for (int i = 0; i < n; ++i) {
      phase_buf buf;
      buf.push(g[i]);
      c.emit("va_stage", buf);
    }
  }
  // Composite through a velocity limit when the direct stage overshoots it.
  for (const std::optional<double>& vm_opt : {c.L.v_hi, c.L.v_lo}) {
    if (!vm_opt) continue;
    const double vm = *vm_opt;
    for (int s1 : {+1, -1}) {
      stage_sol A[3];
      const int nA = stage_solutions(c.s0.acceleration, 0.0, vm - c.s0.velocity, s1, c.L, A);
      for (int ia = 0; ia < nA; ++ia) {
        for (int s2 : {+1, -1}) {
          stage_sol B[3];
          const int nB = stage_solutions(0.0, a7, v7 - vm, s2, c.L, B);
          for (int ib = 0; ib < nB; ++ib) {
            phase_buf buf;
            buf.push(A[ia]);
            buf.push(B[ib]);
            c.emit("va_via_vlimit", buf);
          }
        }
      }
    }
  }
}

void family_va_fixed(solve_ctx& c) {
  const scales sc = make_scales(c);
  const double v7 = *c.tgt.velocity, a7 = *c.tgt.acceleration;
  // stage to an intermediate velocity, hold, stage to the target. The hold
  // absorbs the time budget; intermediate velocity scanned (any root of the
  // budget equation is a valid trajectory; for position objectives the
  // selection keeps the extremal one).
  const double vlo = bracket_v_lo(c, sc), vhi = bracket_v_hi(c, sc);
  for (int s1 : {+1, -1}) {
    for (int s2 : {+1, -1}) {
      auto build = [&](int k, double vm) -> std::optional<phase_buf> {
        stage_sol A[3];
        const int nA = stage_solutions(c.s0.acceleration, 0.0, vm - c.s0.velocity, s1, c.L, A);
        stage_sol B[3];
        const int nB = stage_solutions(0.0, a7, v7 - vm, s2, c.L, B);
        const int ia = k / 3, ib = k % 3;
        if (ia >= nA || ib >= nB) return std::nullopt;
        const double tv = c.T - A[ia].duration() - B[ib].duration();
        if (tv < -k_tneg_tol) return std::nullopt;
        phase_buf buf;
        buf.push(A[ia]);
        buf.push(std::max(tv, 0.0), 0.0);
        buf.push(B[ib]);
        return buf;
      };
      // Emit at grid nodes where the budget closes, and additionally at the
      // boundary of the feasible vm range (tv = 0), which carries the
      // extremal end positions.
      const int steps = 24;
      for (int i = 0; i <= steps; ++i) {
        const double vm = vlo + (vhi - vlo) * i / steps;
        for (int k = 0; k < 9; ++k) {
          if (auto buf = build(k, vm)) c.emit("va_fixed", *buf);
        }
      }
      auto eval = [&](double vm, std::array<std::optional<double>, 9>& out) {
        out = {};
        stage_sol A[3];
        const int nA = stage_solutions(c.s0.acceleration, 0.0, vm - c.s0.velocity, s1, c.L, A);
        if (nA == 0) return;
        stage_sol B[3];
        const int nB = stage_solutions(0.0, a7, v7 - vm, s2, c.L, B);
        for (int ia = 0; ia < nA; ++ia) {
          for (int ib = 0; ib < nB; ++ib) {
            out[ia * 3 + ib] = c.T - A[ia].duration() - B[ib].duration();
          }
        }
      };
      auto on_root = [&](int k, double vm) {
        if (auto buf = build(k, vm)) c.emit("va_fixed", *buf);
      };
      scan_roots_multi<9>(vlo, vhi, 24, eval, on_root);
    }
  }
}

// --- single-field targets --------------------------------------------------

void family_p_only(solve_ctx& c) {
  // Full-jerk (optionally via an acceleration hold) until the position is
  // crossed; the earliest crossing inside each phase is a candidate.
  for (int dir : {+1, -1}) {
    const double j1 = dir > 0 ? c.L.j_hi : c.L.j_lo;
    const std::optional<double> pin = dir > 0 ? c.L.a_hi : c.L.a_lo;
    // Crossing during the initial ramp.
    {
      const poly3 p{{c.s0.position - *c.tgt.position, c.s0.velocity, 0.5 * c.s0.acceleration, j1 / 6.0}};
      const scales sc = make_scales(c);
      for (double t : roots_in_interval(p, 0.0, sc.dur)) {
        phase_buf buf;
        buf.push(t, j1);
        c.emit("p_ramp", buf);
      }
    }
    if (pin) {
      const double t1 = (*pin - c.s0.acceleration) / j1;
      if (t1 >= 0.0) {
        const axis_state mid = advance(c.s0, j1, t1);
        const poly3 p{{mid.position - *c.tgt.position, mid.velocity, 0.5 * mid.acceleration, 0.0}};
        const scales sc = make_scales(c);
        for (double t : roots_in_interval(p, 0.0, sc.dur)) {
          phase_buf buf;
          buf.push(t1, j1);
          buf.push(t, 0.0);
          c.emit("p_ramp_hold", buf);
        }
      }
    }
  }
  // Ride the safety envelope: ramp/hold, then taper so that the end state
  // sits exactly on the future-safe boundary when velocity is bounded.
  for (int dir : {+1, -1}) {
    const std::optional<double> vb = dir > 0 ? c.L.v_hi : c.L.v_lo;
    if (!vb) continue;
    for (double ae : end_accel_pins(c, std::nullopt)) {
      if (dir > 0 && ae < 0.0) continue;
      if (dir < 0 && ae > 0.0) continue;
      const double v_end = dir > 0 ? *vb - future_rise(ae, c.L) : *vb + future_drop(ae, c.L);
      for (int s1 : {+1, -1}) {
        stage_sol g[3];
        const int n = stage_solutions(c.s0.acceleration, ae, v_end - c.s0.velocity, s1, c.L, g);
        for (int i = 0; i < n; ++i) {
          const axis_state end = stage_advance(c.s0, g[i]);
          const double need = *c.tgt.position - end.position;
          // Insert a cruise just before the final ramp to cover the gap.
          // Split the stage at its hold (alpha) if possible; otherwise only
          // accept a direct hit.
          if (std::abs(ae) < 1e-12 && std::abs(v_end) > 1e-12) {
            const double t4 = need / v_end;
            if (t4 >= -k_tneg_tol) {
              phase_buf buf;
              buf.push(g[i]);
              buf.push(std::max(t4, 0.0), 0.0);
              c.emit("p_envelope", buf);
            }
          } else if (std::abs(need) <= k_match_tol) {
            phase_buf buf;
            buf.push(g[i]);
            c.emit("p_envelope", buf);
          }
        }
      }
    }
  }
}

void family_v_only(solve_ctx& c) {
  const double v7 = *c.tgt.velocity;
  // End the moment the velocity is reached: single ramp, ramp+hold, or
  // ramp+hold+taper to a future-safe end acceleration.
  for (double j1 : {c.L.j_hi, c.L.j_lo}) {
    // v(t) = v0 + a0 t + j t^2/2 = v7
    for (double t : solve_quadratic(0.5 * j1, c.s0.acceleration, c.s0.velocity - v7)) {
      if (t < 0.0) continue;
      phase_buf buf;
      buf.push(t, j1);
      c.emit("v_ramp", buf);
    }
  }
  for (const std::optional<double>& pin : {c.L.a_hi, c.L.a_lo}) {
    if (!pin || std::abs(*pin) < 1e-12) continue;
    const double P = *pin;
    const double j1 = P >= c.s0.acceleration ? c.L.j_hi : c.L.j_lo;
    const double t1 = (P - c.s0.acceleration) / j1;
    if (t1 < 0.0) continue;
    const axis_state mid = advance(c.s0, j1, t1);
    const double t2 = (v7 - mid.velocity) / P;
    if (t2 >= -k_tneg_tol) {
      phase_buf buf;
      buf.push(t1, j1);
      buf.push(std::max(t2, 0.0), 0.0);
      c.emit("v_ramp_hold", buf);
    }
    // taper to zero acceleration ending exactly at v7
    const double j3 = -P >= 0.0 ? c.L.j_hi : c.L.j_lo;
    const double t3 = -P / j3;
    if (t3 >= 0.0) {
      axis_state probe(0.0, 0.0, P);
      const double dv3 = advance(probe, j3, t3).velocity;
      const double t2b = (v7 - mid.velocity - dv3) / P;
      if (t2b >= -k_tneg_tol) {
        phase_buf buf;
        buf.push(t1, j1);
        buf.push(std::max(t2b, 0.0), 0.0);
        buf.push(t3, j3);
        c.emit("v_ramp_hold_taper", buf);
      }
    }
  }
  // Plain stage to (v7, 0): always feasible, deterministic fallback.
  for (int s : {+1, -1}) {
    stage_sol g[3];
    const int n = stage_solutions(c.s0.acceleration, 0.0, v7 - c.s0.velocity, s, c.L, g);
    for (int i = 0; i < n; ++i) {
      phase_buf buf;
      buf.push(g[i]);
      c.emit("v_stage", buf);
    }
  }
}

// Two jerk phases closing the velocity equation at exactly T; end
// acceleration free. Handles budgets too short to pass through a = 0.
void family_v_fixed_direct(solve_ctx& c) {
  const double dv = *c.tgt.velocity - c.s0.velocity;
  for (double ja : {c.L.j_lo, c.L.j_hi}) {
    for (double jb : {c.L.j_lo, c.L.j_hi}) {
      // dv = a0 T + ja (t1 T - t1^2/2) + jb (T - t1)^2 / 2
      const double cc2 = -0.5 * ja + 0.5 * jb;
      const double cc1 = ja * c.T - jb * c.T;
      const double cc0 = c.s0.acceleration * c.T + 0.5 * jb * c.T * c.T - dv;
      for (double t1 : solve_quadratic(cc2, cc1, cc0)) {
        if (t1 < -k_tneg_tol || t1 > c.T + k_tneg_tol) continue;
        phase_buf buf;
        buf.push(std::clamp(t1, 0.0, c.T), ja);
        buf.push(std::clamp(c.T - t1, 0.0, c.T), jb);
        c.emit("v_fixed_direct", buf);
      }
    }
  }
}

void family_v_fixed(solve_ctx& c) {
  const scales sc = make_scales(c);
  const double v7 = *c.tgt.velocity;
  // stage to vm, hold, ramp 0 -> a_end closing the velocity equation; a_end
  // scanned, the hold absorbs the budget.
  for (double j3 : {c.L.j_hi, c.L.j_lo}) {
    for (int s1 : {+1, -1}) {
      for (int b1 = 0; b1 < 3; ++b1) {
        auto build = [&](double ae) -> std::optional<phase_buf> {
          const double t3 = ae / j3;
          if (t3 < 0.0) return std::nullopt;
          axis_state probe(0.0, 0.0, 0.0);
          const double dv3 = advance(probe, j3, t3).velocity;
          const double vm = v7 - dv3;
          stage_sol A[3];
          const int nA = stage_solutions(c.s0.acceleration, 0.0, vm - c.s0.velocity, s1, c.L, A);
          if (b1 >= nA) return std::nullopt;
          const double tv = c.T - A[b1].duration() - t3;
          if (tv < -k_tneg_tol) return std::nullopt;
          phase_buf buf;
          buf.push(A[b1]);
          buf.push(std::max(tv, 0.0), 0.0);
          buf.push(t3, j3);
          return buf;
        };
        const double alo = bracket_a_lo(c, sc), ahi = bracket_a_hi(c, sc);
        const int steps = 32;
        for (int i = 0; i <= steps; ++i) {
          auto buf = build(alo + (ahi - alo) * i / steps);
          if (buf) c.emit("v_fixed", *buf);
        }
        // Boundary of the budget (tv = 0) for the extremal end acceleration.
        auto tv_of = [&](double ae) -> std::optional<double> {
          const double t3 = ae / j3;
          if (t3 < 0.0) return std::nullopt;
          axis_state probe(0.0, 0.0, 0.0);
          const double vm = v7 - advance(probe, j3, t3).velocity;
          stage_sol A[3];
          const int nA = stage_solutions(c.s0.acceleration, 0.0, vm - c.s0.velocity, s1, c.L, A);
          if (b1 >= nA) return std::nullopt;
          return c.T - A[b1].duration() - t3;
        };
        scan_roots(alo, ahi, 32, tv_of, [&](double ae) {
          auto buf = build(ae);
          if (buf) c.emit("v_fixed", *buf);
        });
      }
    }
  }
}

void family_a_only(solve_ctx& c) {
  const double a7 = *c.tgt.acceleration;
  // direct ramp
  {
    const double j = a7 >= c.s0.acceleration ? c.L.j_hi : c.L.j_lo;
    const double t = (a7 - c.s0.acceleration) / j;
    if (t >= 0.0) {
      phase_buf buf;
      buf.push(t, j);
      c.emit("a_ramp", buf);
    }
  }
  // velocity-protected: stage to (v_pre, 0), then ramp 0 -> a7, with v_pre
  // placed so the final ramp ends exactly on the future-safe boundary.
  const double j2 = a7 >= 0.0 ? c.L.j_hi : c.L.j_lo;
  const double t2 = a7 / j2;
  if (t2 < 0.0) return;
  axis_state probe(0.0, 0.0, 0.0);
  const double dv2 = advance(probe, j2, t2).velocity;
  for (int dir : {+1, -1}) {
    const std::optional<double> vb = dir > 0 ? c.L.v_hi : c.L.v_lo;
    if (!vb) continue;
    double v_pre;
    if (dir > 0) {
      v_pre = *vb - std::max(0.0, dv2 + future_rise(a7, c.L));
    } else {
      v_pre = *vb + std::max(0.0, -dv2 + future_drop(a7, c.L));
    }
    for (int s1 : {+1, -1}) {
      stage_sol A[3];
      const int nA = stage_solutions(c.s0.acceleration, 0.0, v_pre - c.s0.velocity, s1, c.L, A);
      for (int ia = 0; ia < nA; ++ia) {
        phase_buf buf;
        buf.push(A[ia]);
        buf.push(t2, j2);
        c.emit("a_protected", buf);
      }
    }
  }
}

void family_a_fixed(solve_ctx& c) {
  const double a7 = *c.tgt.acceleration;
  const scales sc = make_scales(c);
  // stage to vm, hold, taper 0 -> a7; vm scanned, hold absorbs the budget.
  const double j2 = a7 >= 0.0 ? c.L.j_hi : c.L.j_lo;
  const double t2 = a7 / j2;
  if (t2 < 0.0) return;
  for (int s1 : {+1, -1}) {
    for (int b1 = 0; b1 < 3; ++b1) {
      auto build = [&](double vm) -> std::optional<phase_buf> {
        stage_sol A[3];
        const int nA = stage_solutions(c.s0.acceleration, 0.0, vm - c.s0.velocity, s1, c.L, A);
        if (b1 >= nA) return std::nullopt;
        const double tv = c.T - A[b1].duration() - t2;
        if (tv < -k_tneg_tol) return std::nullopt;
        phase_buf buf;
        buf.push(A[b1]);
        buf.push(std::max(tv, 0.0), 0.0);
        buf.push(t2, j2);
        return buf;
      };
      const double vlo = bracket_v_lo(c, sc), vhi = bracket_v_hi(c, sc);
      const int steps = 32;
      for (int i = 0; i <= steps; ++i) {
        auto buf = build(vlo + (vhi - vlo) * i / steps);
        if (buf) c.emit("a_fixed", *buf);
      }
      auto tv_of = [&](double vm) -> std::optional<double> {
        stage_sol A[3];
        const int nA = stage_solutions(c.s0.acceleration, 0.0, vm - c.s0.velocity, s1, c.L, A);
        if (b1 >= nA) return std::nullopt;
        return c.T - A[b1].duration() - t2;
      };
      scan_roots(vlo, vhi, 32, tv_of, [&](double vm) {
        auto buf = build(vm);
        if (buf) c.emit("a_fixed", *buf);
      });
    }
  }
  // ramp to an intermediate acceleration, hold, ramp to a7; the hold absorbs
  // the budget. Limit pins give the extremes; a grid covers the interior.
  const double qlo = bracket_a_lo(c, sc), qhi = bracket_a_hi(c, sc);
  auto try_q = [&](double Q) {
    const double j1 = Q >= c.s0.acceleration ? c.L.j_hi : c.L.j_lo;
    const double t1 = (Q - c.s0.acceleration) / j1;
    const double j3 = a7 >= Q ? c.L.j_hi : c.L.j_lo;
    const double t3 = (a7 - Q) / j3;
    if (t1 < 0.0 || t3 < 0.0) return;
    const double th = c.T - t1 - t3;
    if (th < -k_tneg_tol) return;
    phase_buf buf;
    buf.push(t1, j1);
    buf.push(std::max(th, 0.0), 0.0);
    buf.push(t3, j3);
    c.emit("a_fixed_hold", buf);
  };
  if (c.L.a_hi) try_q(*c.L.a_hi);
  if (c.L.a_lo) try_q(*c.L.a_lo);
  try_q(c.s0.acceleration);
  try_q(a7);
  const int steps = 24;
  for (int i = 0; i <= steps; ++i) try_q(qlo + (qhi - qlo) * i / steps);
}

// Candidate end accelerations for free-acceleration rows: zero, the limits
// and the future-safe boundary at the (known or spanned) end velocity.
std::vector<double> end_accel_pins(const solve_ctx& c, std::optional<double> v7) {
  const scales sc = make_scales(c);
  double hi = c.L.a_hi ? *c.L.a_hi : sc.acc;
  double lo = c.L.a_lo ? *c.L.a_lo : -sc.acc;
  if (c.L.v_hi) {
    const double room = v7 ? *c.L.v_hi - *v7 : (c.L.v_lo ? *c.L.v_hi - *c.L.v_lo : *c.L.v_hi);
    hi = std::min(hi, std::sqrt(std::max(0.0, 2.0 * -c.L.j_lo * room)));
  }
  if (c.L.v_lo) {
    const double room = v7 ? *v7 - *c.L.v_lo : (c.L.v_hi ? *c.L.v_hi - *c.L.v_lo : -*c.L.v_lo);
    lo = std::max(lo, -std::sqrt(std::max(0.0, 2.0 * c.L.j_hi * room)));
  }
  std::vector<double> pins{0.0, hi, lo, 0.5 * hi, 0.5 * lo};
  std::sort(pins.begin(), pins.end());
  std::vector<double> out;
  for (double p : pins) {
    if (!std::isfinite(p)) continue;
    if (!out.empty() && std::abs(p - out.back()) < 1e-9) continue;
    out.push_back(p);
  }
  return out;
}

// Boundary end velocities compatible with a defined end acceleration: the
// edges of the interval where both the ramp into and out of a7 stay inside
// the velocity bounds.
std::vector<double> end_velocity_pins(const solve_ctx& c, double a7) {
  std::vector<double> pins;
  if (c.L.v_lo) pins.push_back(*c.L.v_lo + a7 * a7 / (2.0 * c.L.j_hi));
  if (c.L.v_hi) pins.push_back(*c.L.v_hi - a7 * a7 / (2.0 * -c.L.j_lo));
  std::vector<double> out;
  for (double p : pins) {
    if (!std::isfinite(p)) continue;
    if (c.L.v_lo && p < *c.L.v_lo - 1e-12) continue;
    if (c.L.v_hi && p > *c.L.v_hi + 1e-12) continue;
    bool dup = false;
    for (double q : out) dup = dup || std::abs(p - q) < 1e-9;
    if (!dup) out.push_back(p);
  }
  return out;
}

void run_full_families(solve_ctx& c) {
  if (!c.fixed) {
    family_cruise_full(c);
    family_junction_full(c);
    family_hold_full(c);
  } else {
    family_fixed_cruise_full(c);
    if (c.satisfied) return;
    family_fixed_singular_hold(c);
  }
}

// --- dispatch ---------------------------------------------------------------

void run_families(solve_ctx& c) {
  const bool P = c.tgt.position.has_value();
  const bool V = c.tgt.velocity.has_value();
  const bool A = c.tgt.acceleration.has_value();
  if (c.satisfied) return;

  // Zero-length candidate when the defined fields already match (time-optimal).
  if (!c.fixed) {
    phase_buf empty;
    c.emit("identity", empty);
  }

  // Free-acceleration rows additionally reuse the fully-defined families with
  // the end acceleration pinned to safe candidate values; profiles that need
  // both acceleration limits end pinned, so this closes the 5-phase shapes.
  auto make_sub = [&]() {
    solve_ctx sub;
    sub.s0 = c.s0;
    sub.tgt = c.tgt;
    sub.L = c.L;
    sub.fixed = c.fixed;
    sub.T = c.T;
    sub.goal = c.goal;
    sub.ofield = c.ofield;
    sub.stats = c.stats;
    sub.early_exit = c.early_exit;
    return sub;
  };
  auto merge_pinned_accel = [&](std::optional<double> v7_hint) {
    for (double pin : end_accel_pins(c, v7_hint)) {
      if (c.satisfied) return;
      solve_ctx sub = make_sub();
      sub.tgt.acceleration = pin;
      run_families(sub);
      for (auto& cand : sub.candidates) c.candidates.push_back(cand);
      if (sub.satisfied) c.satisfied = true;
    }
  };

  // Free-velocity rows: profiles whose end velocity sits on a limit-or-safety
  // boundary come from the fully-defined families with the end velocity pinned.
  auto merge_pinned_velocity = [&](double a7) {
    for (double pin : end_velocity_pins(c, a7)) {
      if (c.satisfied) return;
      solve_ctx sub = make_sub();
      sub.tgt.velocity = pin;
      run_families(sub);
      for (auto& cand : sub.candidates) c.candidates.push_back(cand);
      if (sub.satisfied) c.satisfied = true;
    }
  };

  if (P && V && A) {
    run_full_families(c);
  } else if (P && !V && A) {
    if (!c.fixed) {
      family_pa_direct(c);
      family_pa_safe_cruise(c);
    } else {
      family_pa_fixed_cruise(c);
      if (!c.satisfied) family_pa_fixed_wind(c, +1);
      if (!c.satisfied) family_pa_fixed_wind(c, -1);
    }
    if (!c.satisfied) merge_pinned_velocity(*c.tgt.acceleration);
  } else if (P && V && !A) {
    if (!c.fixed) {
      family_pv(c);
    } else {
      family_pv_fixed(c);
      if (!c.satisfied) family_pv_fixed_direct(c);
    }
    if (!c.satisfied) merge_pinned_accel(*c.tgt.velocity);
  } else if (P && !V && !A) {
    if (!c.fixed) {
      family_p_only(c);
    }
    merge_pinned_accel(std::nullopt);
  } else if (!P && V && A) {
    if (!c.fixed) {
      family_va(c);
    } else {
      family_va_fixed(c);
    }
  } else if (!P && V && !A) {
    if (!c.fixed) {
      family_v_only(c);
    } else {
      family_v_fixed_direct(c);
      if (!c.satisfied) family_v_fixed(c);
    }
    if (!c.satisfied) merge_pinned_accel(*c.tgt.velocity);
  } else if (!P && !V && A) {
    if (!c.fixed) {
      family_a_only(c);
    } else {
      family_a_fixed(c);
    }
    if (!c.satisfied) merge_pinned_velocity(*c.tgt.acceleration);
  }
}

// --- validation and selection ----------------------------------------------

struct validated {
  candidate cand;
};

// Extrema check directly on the phase buffer; mirrors extrema() without
// constructing a trajectory.
bool phases_within_limits(const axis_state& s0, const candidate& cand, const lim& L, double slack) {
  axis_state s = s0;
  for (int i = 0; i <= cand.n_phases; ++i) {
    if (L.v_hi && s.velocity > *L.v_hi + slack) return false;
    if (L.v_lo && s.velocity < *L.v_lo - slack) return false;
    if (L.a_hi && s.acceleration > *L.a_hi + slack) return false;
    if (L.a_lo && s.acceleration < *L.a_lo - slack) return false;
    if (i == cand.n_phases) break;
    const double j = cand.phases[i].jerk;
    const double dt = cand.phases[i].duration;
    if (j < L.j_lo - slack || j > L.j_hi + slack) return false;
    // interior velocity extremum where a(tau) = 0
    if (j != 0.0) {
      const double tau = -s.acceleration / j;
      if (tau > 0.0 && tau < dt) {
        const double v_ext = s.velocity + s.acceleration * tau + 0.5 * j * tau * tau;
        if (L.v_hi && v_ext > *L.v_hi + slack) return false;
        if (L.v_lo && v_ext < *L.v_lo - slack) return false;
      }
    }
    s = advance(s, j, dt);
  }
  return true;
}



bool sign_seq_less(const candidate& a, const candidate& b) {
  const int n = std::min(a.n_phases, b.n_phases);
  for (int i = 0; i < n; ++i) {
    if (a.sign_seq[i] != b.sign_seq[i]) return a.sign_seq[i] < b.sign_seq[i];
  }
  if (a.n_phases != b.n_phases) return a.n_phases < b.n_phases;
  for (int i = 0; i < n; ++i) {
    if (a.phases[i].duration != b.phases[i].duration) return a.phases[i].duration < b.phases[i].duration;
  }
  return false;
}

std::optional<validated> select_candidate(solve_ctx& c) {
  std::optional<validated> best;
  for (const candidate& cand : c.candidates) {
    if (!phases_within_limits(c.s0, cand, c.L, k_limit_slack)) {
      if (c.stats) ++c.stats->limits_out;
      continue;
    }
    if (!best) {
      best = validated{cand};
      continue;
    }
    bool better = false;
    if (!c.fixed) {
      if (cand.total < best->cand.total - k_tie_tol) {
        better = true;
      } else if (cand.total <= best->cand.total + k_tie_tol) {
        better = sign_seq_less(cand, best->cand);
      }
    } else if (c.goal) {
      const double sgn = (*c.goal == objective::maximize) ? -1.0 : 1.0;
      const double va = sgn * cand.objective_value, vb = sgn * best->cand.objective_value;
      if (va < vb - k_tie_tol) {
        better = true;
      } else if (va <= vb + k_tie_tol) {
        better = sign_seq_less(cand, best->cand);
      }
    } else {
      better = sign_seq_less(cand, best->cand);
    }
    if (better) best = validated{cand};
  }
  return best;
}

condition_set describe(const candidate& cand, bool fixed) {
  condition_set cs;
  cs.family = cand.family;
  for (int i = 0; i < 7; ++i) {
    if (i < cand.n_phases) {
      cs.jerk[i] = cand.phases[i].jerk;
      cs.duration[i] = condition_set::duration_pin::solved;
      if (cand.phases[i].jerk == 0.0) {
        cs.state[i] = cand.end.acceleration == 0.0 ? condition_set::state_pin::velocity_limit
                                                   : condition_set::state_pin::accel_limit;
      } else {
        cs.state[i] = condition_set::state_pin::propagate;
      }
    } else {
      cs.jerk[i] = 0.0;
      cs.duration[i] = condition_set::duration_pin::zero;
      cs.state[i] = condition_set::state_pin::propagate;
    }
  }
  if (cand.n_phases > 0) cs.state[std::min(cand.n_phases, 7) - 1] = condition_set::state_pin::target;
  if (fixed && cand.n_phases > 0) cs.duration[std::min(cand.n_phases, 7) - 1] = condition_set::duration_pin::total_time;
  return cs;
}

// --- recovery of limit-violating start states -------------------------------

struct recovery {
  std::vector<jerk_phase> phases;
  axis_state end;
  double duration = 0.0;
};

recovery recover_start(const axis_state& start, const lim& L) {
  recovery rec;
  rec.end = start;
  auto append = [&](double t, double j) {
    if (t <= 0.0) return;
    rec.phases.emplace_back(t, j);
    rec.end = advance(rec.end, j, t);
    rec.duration += t;
  };
  // Acceleration back inside its bounds at maximal jerk.
  if (L.a_hi && rec.end.acceleration > *L.a_hi) {
    append((*L.a_hi - rec.end.acceleration) / L.j_lo, L.j_lo);
  } else if (L.a_lo && rec.end.acceleration < *L.a_lo) {
    append((*L.a_lo - rec.end.acceleration) / L.j_hi, L.j_hi);
  }
  // Velocity (or its unavoidable overshoot) back inside the bounds.
  auto brake_to = [&](double v_bound, int sign) {
    stage_sol g[3];
    const int n = stage_solutions(rec.end.acceleration, 0.0, v_bound - rec.end.velocity, sign, L, g);
    double best_t = std::numeric_limits<double>::infinity();
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (g[i].duration() < best_t) {
        best_t = g[i].duration();
        best = i;
      }
    }
    if (best >= 0) {
      append(g[best].t_up, g[best].j_up);
      append(g[best].t_hold, 0.0);
      append(g[best].t_dn, g[best].j_dn);
    }
  };
  if (L.v_hi && rec.end.velocity + future_rise(rec.end.acceleration, L) > *L.v_hi) {
    brake_to(*L.v_hi, -1);
  } else if (L.v_lo && rec.end.velocity - future_drop(rec.end.acceleration, L) < *L.v_lo) {
    brake_to(*L.v_lo, +1);
  }
  return rec;
}

lim resolve_limits(const axis_limits& limits) {
  limits.validate();
  if (!limits.jerk_min || !limits.jerk_max) {
    throw infeasible_target("plan: jerk limits must be bounded");
  }
  if (limits.acceleration_min && !(*limits.acceleration_min < 0.0)) {
    throw infeasible_target("plan: acceleration_min must be < 0");
  }
  if (limits.acceleration_max && !(*limits.acceleration_max > 0.0)) {
    throw infeasible_target("plan: acceleration_max must be > 0");
  }
  lim L;
  L.v_lo = limits.velocity_min;
  L.v_hi = limits.velocity_max;
  L.a_lo = limits.acceleration_min;
  L.a_hi = limits.acceleration_max;
  L.j_lo = *limits.jerk_min;
  L.j_hi = *limits.jerk_max;
  return L;
}

obj_field pick_objective_field(const partial_target& tgt) {
  if (!tgt.velocity) return obj_field::velocity;
  if (!tgt.acceleration) return obj_field::acceleration;
  return obj_field::position;
}

void check_target_static(const partial_target& tgt, const lim& L) {
  tgt.validate();
  if (tgt.velocity) {
    if (L.v_hi && *tgt.velocity > *L.v_hi + k_limit_slack) throw infeasible_target("target velocity above velocity_max");
    if (L.v_lo && *tgt.velocity < *L.v_lo - k_limit_slack) throw infeasible_target("target velocity below velocity_min");
  }
  if (tgt.acceleration) {
    if (L.a_hi && *tgt.acceleration > *L.a_hi + k_limit_slack) throw infeasible_target("target acceleration above acceleration_max");
    if (L.a_lo && *tgt.acceleration < *L.a_lo - k_limit_slack) throw infeasible_target("target acceleration below acceleration_min");
  }
}

}  // namespace

void partial_target::validate() const {
  if (!position && !velocity && !acceleration) {
    throw std::invalid_argument("partial_target: at least one field must be defined");
  }
  auto fin = [](const std::optional<double>& v) { return !v || std::isfinite(*v); };
  if (!fin(position) || !fin(velocity) || !fin(acceleration)) {
    throw std::invalid_argument("partial_target: non-finite field");
  }
}

bool partial_target::matched_by(const axis_state& s, double tol) const {
  if (position && std::abs(s.position - *position) > tol) return false;
  if (velocity && std::abs(s.velocity - *velocity) > tol) return false;
  if (acceleration && std::abs(s.acceleration - *acceleration) > tol) return false;
  return true;
}

duration_spec duration_spec::fixed_total(double total, std::optional<objective> goal) {
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::invalid_argument("duration_spec: fixed total must be > 0 and finite");
  }
  duration_spec d;
  d.fixed = true;
  d.total = total;
  d.goal = goal;
  return d;
}

namespace detail {

plan_report plan_with_report(const axis_state& start, const partial_target& target, const axis_limits& limits,
                             const duration_spec& duration) {
  if (!is_finite(start)) throw std::invalid_argument("plan: non-finite start");
  const lim L = resolve_limits(limits);
  check_target_static(target, L);

  const recovery rec = recover_start(start, L);

  solve_ctx ctx;
  ctx.candidates.reserve(96);
  ctx.early_exit = duration.fixed && !duration.goal;
  ctx.s0 = rec.end;
  ctx.tgt = target;
  ctx.L = L;
  ctx.fixed = duration.fixed;
  ctx.goal = duration.goal;
  ctx.ofield = pick_objective_field(target);
  if (duration.fixed) {
    ctx.T = duration.total - rec.duration;
    if (ctx.T < -k_tneg_tol) {
      throw infeasible_duration("plan: fixed duration shorter than the recovery prefix");
    }
    ctx.T = std::max(ctx.T, 0.0);
  }

  reject_stats stats;
  if (std::getenv("OTG_PLAN_DEBUG")) ctx.stats = &stats;
  run_families(ctx);
  std::optional<validated> best = select_candidate(ctx);
  if (ctx.stats) {
    std::fprintf(stderr,
                 "[plan] candidates=%zu buf_bad=%d nonfinite=%d fixed_resid=%d target_miss=%d unsafe=%d "
                 "accel_out=%d limits_out=%d\n",
                 ctx.candidates.size(), stats.buf_bad, stats.nonfinite, stats.fixed_residual, stats.target_miss,
                 stats.future_unsafe, stats.accel_out, stats.limits_out);
    for (const candidate& cand : ctx.candidates) {
      std::fprintf(stderr, "  [cand] %s T=%.9f end=(%.6f, %.6f, %.6f)\n", cand.family, cand.total,
                   cand.end.position, cand.end.velocity, cand.end.acceleration);
    }
  }
  if (!best && duration.fixed) {
    // Distinguish an infeasible duration from an unreachable target; a fixed
    // duration equal to the time-optimal one is served by that profile.
    const plan_report opt = plan_with_report(start, target, limits, duration_spec::time_optimal());
    if (opt.trajectory.total_duration() > duration.total + k_tneg_tol) {
      throw infeasible_duration("plan: fixed duration below the time-optimal duration");
    }
    if (std::abs(opt.trajectory.total_duration() - duration.total) <= k_tneg_tol) {
      return opt;
    }
    throw infeasible_duration("plan: no valid trajectory for the fixed duration");
  }
  if (!best) {
    throw infeasible_target("plan: no valid trajectory found");
  }

  plan_report report;
  report.conditions = describe(best->cand, duration.fixed);
  report.objective_value = best->cand.objective_value;
  std::vector<jerk_phase> phases = rec.phases;
  phases.insert(phases.end(), best->cand.phases.begin(), best->cand.phases.begin() + best->cand.n_phases);
  // Canonical form: split ramps at interior a = 0 crossings so the classic
  // seven-phase structure (and its zero-duration cruise boundary) is explicit.
  std::vector<jerk_phase> canonical;
  canonical.reserve(phases.size() + 2);
  axis_state walk = start;
  for (const jerk_phase& ph : phases) {
    if (ph.jerk != 0.0) {
      const double tau = -walk.acceleration / ph.jerk;
      if (tau > 1e-12 && tau < ph.duration - 1e-12) {
        canonical.emplace_back(tau, ph.jerk);
        canonical.emplace_back(ph.duration - tau, ph.jerk);
        walk = advance(walk, ph.jerk, ph.duration);
        continue;
      }
    }
    canonical.push_back(ph);
    walk = advance(walk, ph.jerk, ph.duration);
  }
  report.trajectory = axis_trajectory(start, std::move(canonical));
  return report;
}

}  // namespace detail

axis_trajectory plan(const axis_state& start, const partial_target& target, const axis_limits& limits,
                     const duration_spec& duration) {
  return detail::plan_with_report(start, target, limits, duration).trajectory;
}

axis_trajectory plan_reverse(const axis_state& end, const partial_target& target_at_start,
                             const axis_limits& limits, const duration_spec& duration) {
  axis_state start_rev(end.position, -end.velocity, end.acceleration);
  partial_target tgt_rev = target_at_start;
  if (tgt_rev.velocity) tgt_rev.velocity = -*tgt_rev.velocity;
  axis_limits lim_rev = limits;
  lim_rev.velocity_min = limits.velocity_max ? std::optional<double>(-*limits.velocity_max) : std::nullopt;
  lim_rev.velocity_max = limits.velocity_min ? std::optional<double>(-*limits.velocity_min) : std::nullopt;
  lim_rev.jerk_min = limits.jerk_max ? std::optional<double>(-*limits.jerk_max) : std::nullopt;
  lim_rev.jerk_max = limits.jerk_min ? std::optional<double>(-*limits.jerk_min) : std::nullopt;
  const axis_trajectory rev = plan(start_rev, tgt_rev, lim_rev, duration);
  return time_reversed(rev);
}

partial_target clamp_target(const partial_target& target, const axis_limits& limits) {
  target.validate();
  limits.validate();
  partial_target out = target;
  const bool have_j = limits.jerk_min && limits.jerk_max;
  if (!have_j) return out;
  const double j_up = *limits.jerk_max;
  const double j_dn = -*limits.jerk_min;

  // Acceleration magnitude bound from the velocity span (both directions).
  if (out.acceleration && limits.velocity_min && limits.velocity_max) {
    const double span = *limits.velocity_max - *limits.velocity_min;
    const double a_hi = std::sqrt(2.0 * j_dn * span);
    const double a_lo = -std::sqrt(2.0 * j_up * span);
    out.acceleration = std::clamp(*out.acceleration, a_lo, a_hi);
  }
  // Velocity bounds from the (defined or worst-case) target acceleration.
  if (out.velocity) {
    double a_hi_ref = 0.0, a_lo_ref = 0.0;
    if (out.acceleration) {
      a_hi_ref = pos_part(*out.acceleration);
      a_lo_ref = -neg_part(*out.acceleration);
    } else {
      if (limits.acceleration_max) a_hi_ref = pos_part(*limits.acceleration_max);
      if (limits.acceleration_min) a_lo_ref = -neg_part(*limits.acceleration_min);
    }
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    if (limits.velocity_max) hi = *limits.velocity_max - a_hi_ref * a_hi_ref / (2.0 * j_dn);
    if (limits.velocity_min) lo = *limits.velocity_min + a_lo_ref * a_lo_ref / (2.0 * j_up);
    if (lo <= hi) {
      out.velocity = std::clamp(*out.velocity, lo, hi);
    } else {
      out.velocity = 0.5 * (lo + hi);
    }
  }
  return out;
}

velocity_interval reachable_velocity_interval(const axis_state& start, double end_position, double total,
                                              const axis_limits& limits) {
  partial_target tgt;
  tgt.position = end_position;
  tgt.acceleration = 0.0;
  axis_trajectory lo, hi;
  try {
    lo = plan(start, tgt, limits, duration_spec::fixed_total(total, objective::minimize));
    hi = plan(start, tgt, limits, duration_spec::fixed_total(total, objective::maximize));
  } catch (const infeasible_target& e) {
    throw infeasible_duration(std::string("reachable_velocity_interval: ") + e.what());
  }
  velocity_interval out;
  out.lo = lo.phases().empty() ? lo.start().velocity : lo.end().velocity;
  out.hi = hi.phases().empty() ? hi.start().velocity : hi.end().velocity;
  if (out.lo > out.hi) std::swap(out.lo, out.hi);
  return out;
}

}  // namespace otg
