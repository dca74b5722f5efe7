#include "otg/planner.hpp"

#include <algorithm>
#include <chrono>
#include <future>

namespace otg {

namespace {

using clock = std::chrono::steady_clock;

double seconds_since(clock::time_point t0) {
  return std::chrono::duration<double>(clock::now() - t0).count();
}

bool report_order(const candidate_report& a, const candidate_report& b) {
  if (a.built != b.built) return a.built;
  if (a.built && std::abs(a.total_time - b.total_time) > 1e-9) return a.total_time < b.total_time;
  if (a.spec.bound_axes[0] != b.spec.bound_axes[0]) return a.spec.bound_axes[0] < b.spec.bound_axes[0];
  if (a.spec.bound_axes[1] != b.spec.bound_axes[1]) return a.spec.bound_axes[1] < b.spec.bound_axes[1];
  return static_cast<int>(a.spec.side) < static_cast<int>(b.spec.side);
}

}  // namespace

plan_result plan(std::span<const axis_state> starts, std::span<const partial_target> targets,
                 std::span<const axis_limits> limits, const std::vector<obstacle>& obstacles,
                 const plan_config& config) {
  const auto t_total = clock::now();
  plan_result result;

  const std::size_t n = starts.size();
  for (const obstacle& obs : obstacles) {
    if (obs.axes.size() != n) {
      throw std::invalid_argument("plan: obstacle axis count does not match the state dimension");
    }
  }

  const auto t_direct = clock::now();
  multi_axis_trajectory direct = plan_synchronized(starts, targets, limits);
  result.timings.direct_seconds = seconds_since(t_direct);
  result.direct_total_time = direct.total_duration();

  const auto t_coll = clock::now();
  std::optional<std::pair<std::size_t, collision_info>> hit = collides_any(direct, obstacles);
  result.timings.collision_seconds = seconds_since(t_coll);

  if (!hit) {
    result.chosen = std::move(direct);
    result.timings.total_seconds = seconds_since(t_total);
    return result;
  }
  result.direct_collision = hit->second;
  result.used_evasion = true;

  // Free target fields take the direct plan's resolved end values: segment
  // probes plan backwards from a full target state.
  const std::vector<axis_state> full_targets = evaluate_all(direct, direct.total_duration());
  result.resolved_targets = full_targets;
  std::vector<axis_state> start_vec(starts.begin(), starts.end());
  std::vector<axis_limits> limit_vec(limits.begin(), limits.end());

  const auto t_cand = clock::now();
  candidate_enumeration enumeration;
  try {
    enumeration = enumerate_candidates(n, hit->second, direct, config.prune_candidates);
  } catch (const std::invalid_argument& e) {
    result.timings.total_seconds = seconds_since(t_total);
    throw all_candidates_collide(std::string("plan: cannot evade: ") + e.what(), std::move(result));
  }
  result.prepruning_count = enumeration.prepruning_count;

  const obstacle& evaded = obstacles[hit->first];
  auto build_one = [&](const candidate_spec& spec) {
    candidate_report rep;
    rep.spec = spec;
    try {
      evasion_candidate cand =
          build_evading_trajectory(start_vec, full_targets, limit_vec, evaded, spec, hit->second, config.evasion);
      rep.built = true;
      rep.total_time = cand.total_time;
      rep.via = cand.via;
      rep.kind = cand.kind;
      rep.free_axis_dominant = cand.free_axis_dominant;
      return std::make_pair(rep, std::optional<multi_axis_trajectory>(std::move(cand.trajectory)));
    } catch (const std::exception& e) {
      rep.failure = e.what();
      return std::make_pair(rep, std::optional<multi_axis_trajectory>());
    }
  };

  std::vector<std::pair<candidate_report, std::optional<multi_axis_trajectory>>> built(
      enumeration.candidates.size());
  if (config.parallel && enumeration.candidates.size() > 1) {
    std::vector<std::future<std::pair<candidate_report, std::optional<multi_axis_trajectory>>>> futures;
    futures.reserve(enumeration.candidates.size());
    for (const candidate_spec& spec : enumeration.candidates) {
      futures.push_back(std::async(std::launch::async, build_one, spec));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) built[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < enumeration.candidates.size(); ++i) {
      built[i] = build_one(enumeration.candidates[i]);
    }
  }
  result.timings.candidates_seconds = seconds_since(t_cand);

  // Deterministic ranking independent of build order.
  std::vector<std::size_t> order(built.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return report_order(built[a].first, built[b].first); });

  const auto t_select = clock::now();
  std::optional<multi_axis_trajectory> chosen;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    auto& [rep, traj] = built[order[rank]];
    if (rep.built && !chosen) {
      if (!collides_any(*traj, obstacles)) {
        rep.collision_free = true;
        chosen = std::move(*traj);
        result.chosen_candidate = rank;
      }
    }
    result.candidates.push_back(rep);
  }
  result.timings.selection_seconds = seconds_since(t_select);
  result.timings.total_seconds = seconds_since(t_total);

  if (!chosen) {
    throw all_candidates_collide("plan: every evasion candidate collided or failed", std::move(result));
  }
  result.chosen = std::move(*chosen);
  return result;
}

plan_result replan_step(std::span<const axis_state> current, std::span<const partial_target> targets,
                        std::span<const axis_limits> limits, const std::vector<obstacle>& obstacles,
                        const plan_config& config) {
  return plan(current, targets, limits, obstacles, config);
}

}  // namespace otg
