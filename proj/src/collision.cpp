#include "otg/collision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "otg/errors.hpp"

namespace otg {

namespace {

constexpr double k_time_dedup = 1e-9;

std::vector<double> merged_breakpoints(const piecewise_poly& a, const piecewise_poly& b, double horizon) {
  std::vector<double> ts{0.0, horizon};
  for (double t : a.piece_starts()) {
    if (t > 0.0 && t < horizon) ts.push_back(t);
  }
  for (double t : b.piece_starts()) {
    if (t > 0.0 && t < horizon) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(), [](double x, double y) { return std::abs(x - y) < k_time_dedup; }),
           ts.end());
  return ts;
}

poly3 anchored_piece(const piecewise_poly& pp, double t0) {
  const std::size_t i = pp.piece_index(t0);
  return pp.pieces()[i].shifted(t0 - pp.piece_starts()[i]);
}

}  // namespace

obstacle obstacle::box(const std::vector<double>& lower, const std::vector<double>& upper, double inflation) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw std::invalid_argument("obstacle::box: bound size mismatch");
  }
  obstacle obs;
  obs.inflation = inflation;
  obs.axes.reserve(lower.size());
  for (std::size_t i = 0; i < lower.size(); ++i) {
    obs.axes.push_back({piecewise_poly::constant(lower[i]), piecewise_poly::constant(upper[i])});
  }
  return obs;
}

void obstacle::validate(double horizon) const {
  if (axes.empty()) throw std::invalid_argument("obstacle: no axes");
  if (!(inflation >= 0.0) || !std::isfinite(inflation)) {
    throw std::invalid_argument("obstacle: inflation must be finite and >= 0");
  }
  for (std::size_t k = 0; k < axes.size(); ++k) {
    std::vector<double> probes{0.0, horizon};
    for (double t : axes[k].lower.piece_starts()) probes.push_back(std::clamp(t, 0.0, horizon));
    for (double t : axes[k].upper.piece_starts()) probes.push_back(std::clamp(t, 0.0, horizon));
    for (int i = 0; i <= 32; ++i) probes.push_back(horizon * i / 32.0);
    for (double t : probes) {
      if (!(lower_at(k, t) < upper_at(k, t))) {
        throw std::invalid_argument("obstacle: lower bound not below upper bound on axis " + std::to_string(k));
      }
    }
  }
}

bool obstacle::strictly_inside(const std::vector<axis_state>& states, double t) const {
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (!(states[k].position > lower_at(k, t) && states[k].position < upper_at(k, t))) return false;
  }
  return true;
}

obstacle obstacle::time_shifted(double t0) const {
  obstacle out = *this;
  for (auto& ax : out.axes) {
    ax.lower = ax.lower.time_shifted(t0);
    ax.upper = ax.upper.time_shifted(t0);
  }
  return out;
}

piecewise_poly position_polynomial(const axis_trajectory& traj) {
  std::vector<double> starts;
  std::vector<poly3> pieces;
  starts.reserve(traj.phases().size() + 1);
  pieces.reserve(traj.phases().size() + 1);
  double t0 = 0.0;
  if (traj.phases().empty()) {
    starts.push_back(0.0);
    pieces.push_back(poly3{{traj.start().position, traj.start().velocity, 0.5 * traj.start().acceleration, 0.0}});
    return piecewise_poly(std::move(starts), std::move(pieces));
  }
  for (std::size_t i = 0; i < traj.phases().size(); ++i) {
    const axis_state& b = traj.boundary_state(i);
    starts.push_back(t0);
    pieces.push_back(poly3{{b.position, b.velocity, 0.5 * b.acceleration, traj.phases()[i].jerk / 6.0}});
    t0 += traj.phases()[i].duration;
  }
  return piecewise_poly(std::move(starts), std::move(pieces));
}

std::vector<crossing> axis_crossings(const axis_trajectory& traj, const piecewise_poly& bound, double horizon) {
  const piecewise_poly pos = position_polynomial(traj);
  const std::vector<double> breaks = merged_breakpoints(pos, bound, horizon);

  std::vector<crossing> out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double t0 = breaks[i], t1 = breaks[i + 1];
    const poly3 diff = anchored_piece(pos, t0) - anchored_piece(bound, t0);
    const double scale =
        std::max({std::abs(diff.c[0]), std::abs(diff.c[1]), std::abs(diff.c[2]), std::abs(diff.c[3]), 1e-12});
    for (double tau : roots_in_interval(diff, 0.0, t1 - t0)) {
      const double t = t0 + tau;
      if (!out.empty() && std::abs(t - out.back().time) <= k_time_dedup) continue;
      const double slope = diff.deriv(tau);
      crossing c;
      c.time = t;
      if (std::abs(slope) <= 1e-7 * scale) {
        c.direction = crossing_direction::touch;
      } else {
        c.direction = slope > 0.0 ? crossing_direction::rising : crossing_direction::falling;
      }
      out.push_back(c);
    }
  }
  return out;
}

std::vector<time_interval> axis_inside_intervals(const axis_trajectory& traj, const obstacle_axis& bounds,
                                                 double inflation, double horizon) {
  const piecewise_poly lo = bounds.lower.offset(-inflation);
  const piecewise_poly hi = bounds.upper.offset(inflation);
  std::vector<crossing> events = axis_crossings(traj, lo, horizon);
  {
    std::vector<crossing> up = axis_crossings(traj, hi, horizon);
    events.insert(events.end(), up.begin(), up.end());
  }
  std::sort(events.begin(), events.end(), [](const crossing& a, const crossing& b) { return a.time < b.time; });

  std::vector<double> ts{0.0};
  for (const crossing& e : events) {
    if (e.time > ts.back() + k_time_dedup && e.time < horizon - k_time_dedup) ts.push_back(e.time);
  }
  ts.push_back(horizon);

  auto inside_at = [&](double t) {
    const double p = evaluate(traj, std::min(t, traj.total_duration())).position;
    return p >= lo.eval(t) && p <= hi.eval(t);
  };

  std::vector<time_interval> intervals;
  // Segment classification by midpoint; adjacent inside segments merge.
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (!inside_at(0.5 * (ts[i] + ts[i + 1]))) continue;
    if (!intervals.empty() && std::abs(intervals.back().leave - ts[i]) <= k_time_dedup) {
      intervals.back().leave = ts[i + 1];
    } else {
      intervals.push_back({ts[i], ts[i + 1]});
    }
  }
  // Tangential touches from outside: zero-length inside intervals.
  for (const crossing& e : events) {
    if (e.direction != crossing_direction::touch) continue;
    bool covered = false;
    for (const auto& iv : intervals) {
      covered = covered || (e.time >= iv.enter - k_time_dedup && e.time <= iv.leave + k_time_dedup);
    }
    if (!covered && inside_at(e.time)) intervals.push_back({e.time, e.time});
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const time_interval& a, const time_interval& b) { return a.enter < b.enter; });
  return intervals;
}

namespace {

std::vector<time_interval> intersect_sets(const std::vector<time_interval>& a, const std::vector<time_interval>& b) {
  std::vector<time_interval> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double enter = std::max(a[i].enter, b[j].enter);
    const double leave = std::min(a[i].leave, b[j].leave);
    if (enter <= leave + 1e-12) out.push_back({enter, std::max(enter, leave)});
    if (a[i].leave < b[j].leave) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

}  // namespace

std::optional<collision_info> first_collision(const multi_axis_trajectory& traj, const obstacle& obs) {
  const std::size_t n = traj.axis_count();
  if (obs.axes.size() != n) {
    throw std::invalid_argument("first_collision: obstacle/trajectory axis count mismatch");
  }
  const double T = traj.total_duration();
  obs.validate(T);

  const std::vector<axis_state> start = evaluate_all(traj, 0.0);
  if (obs.strictly_inside(start, 0.0)) {
    throw invalid_endpoint("first_collision: start state inside the inflated obstacle");
  }
  const std::vector<axis_state> end = evaluate_all(traj, T);
  if (obs.strictly_inside(end, T)) {
    throw invalid_endpoint("first_collision: end state inside the inflated obstacle");
  }

  std::vector<std::vector<time_interval>> per_axis(n);
  for (std::size_t k = 0; k < n; ++k) {
    per_axis[k] = axis_inside_intervals(traj.axes[k], obs.axes[k], obs.inflation, T);
    if (per_axis[k].empty()) return std::nullopt;
  }
  std::vector<time_interval> common = per_axis[0];
  for (std::size_t k = 1; k < n && !common.empty(); ++k) {
    common = intersect_sets(common, per_axis[k]);
  }
  if (common.empty()) return std::nullopt;

  collision_info info;
  info.time = common.front().enter;
  info.states = evaluate_all(traj, info.time);
  info.axis_intervals.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& iv : per_axis[k]) {
      if (info.time >= iv.enter - k_time_dedup && info.time <= iv.leave + k_time_dedup) {
        info.axis_intervals[k] = iv;
        break;
      }
    }
  }
  return info;
}

std::optional<std::pair<std::size_t, collision_info>> collides_any(const multi_axis_trajectory& traj,
                                                                   const std::vector<obstacle>& obstacles) {
  std::optional<std::pair<std::size_t, collision_info>> best;
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const auto hit = first_collision(traj, obstacles[i]);
    if (hit && (!best || hit->time < best->second.time - 1e-12)) {
      best = std::make_pair(i, *hit);
    }
  }
  return best;
}

}  // namespace otg
