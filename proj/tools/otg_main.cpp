// otg command-line front end: one-shot planning, closed-loop simulation,
// planner fuzzing, latency benchmarking and sampling-map export.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "otg/evasion.hpp"
#include "otg/fuzz.hpp"
#include "otg/oracle.hpp"
#include "otg/planner.hpp"
#include "otg/scenario.hpp"

namespace {

constexpr int k_exit_ok = 0;
constexpr int k_exit_schema = 2;
constexpr int k_exit_infeasible = 3;
constexpr int k_exit_io = 4;

namespace fs = std::filesystem;

struct common_options {
  std::string scenario_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  bool parallel = false;
  double trace_dt = 0.01;
};

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw otg::io_error("cannot create output directory: " + dir + ": " + ec.message());
}

void write_traces(const std::string& dir, const otg::scenario& scn, const otg::multi_axis_trajectory& traj,
                  double dt) {
  for (std::size_t i = 0; i < traj.axes.size(); ++i) {
    const std::string name = dir + "/trace_" + scn.axis_names[i] + ".csv";
    otg::write_text_file(name, otg::trace_csv(traj.axes[i], dt));
  }
}

int cmd_plan(const common_options& opt) {
  const otg::scenario scn = otg::load_scenario(opt.scenario_path);
  ensure_out_dir(opt.out_dir);
  otg::plan_config cfg;
  cfg.parallel = opt.parallel;
  try {
    const otg::plan_result result = otg::plan(scn.start, scn.target, scn.limits, scn.obstacle_shapes(), cfg);
    otg::write_text_file(opt.out_dir + "/summary.txt", otg::summary_text(result, scn));
    otg::write_text_file(opt.out_dir + "/timings.txt", otg::timings_text(result));
    write_traces(opt.out_dir, scn, result.chosen, opt.trace_dt);
    std::printf("plan: total %.6f s (%s), wrote %s\n", result.chosen.total_duration(),
                result.used_evasion ? "evading" : "direct", opt.out_dir.c_str());
    return k_exit_ok;
  } catch (const otg::all_candidates_collide& e) {
    otg::write_text_file(opt.out_dir + "/summary.txt",
                         std::string("status = no_collision_free_candidate\nerror = ") + e.what() + "\n");
    std::fprintf(stderr, "plan failed: %s\n", e.what());
    return k_exit_infeasible;
  }
}

double obstacle_clearance(const otg::obstacle& obs, const std::vector<otg::axis_state>& states, double t) {
  // max over axes of the signed distance outside the inflated interval;
  // negative means inside on every axis (in collision).
  double best = -1e300;
  for (std::size_t k = 0; k < obs.axes.size(); ++k) {
    const double lo = obs.lower_at(k, t), hi = obs.upper_at(k, t);
    best = std::max(best, std::max(lo - states[k].position, states[k].position - hi));
  }
  return best;
}

int cmd_simulate(const common_options& opt) {
  const otg::scenario scn = otg::load_scenario(opt.scenario_path);
  ensure_out_dir(opt.out_dir);
  const std::size_t n = scn.axis_count();
  const double dt = scn.simulation.control_period;
  if (!(dt > 0.0)) throw otg::scenario_error("simulate: control_period must be > 0");

  otg::plan_config cfg;
  cfg.parallel = opt.parallel;

  std::mt19937_64 rng(scn.simulation.disturbance_seed ^ opt.seed);
  std::normal_distribution<double> noise(0.0, scn.simulation.disturbance_stddev);

  std::vector<otg::axis_state> state = scn.start;
  double t_sim = 0.0;
  double min_clearance = 1e300;
  double direct_time_estimate = -1.0;
  bool detected_preemptively = false;
  bool ever_detected = false;
  std::optional<otg::multi_axis_trajectory> current_plan;
  double current_plan_age = 0.0;
  std::vector<double> replan_seconds;

  std::ostringstream trace;
  trace.precision(12);
  trace << "t";
  for (const auto& name : scn.axis_names) trace << ",p_" << name << ",v_" << name << ",a_" << name;
  trace << ",clearance\n";

  auto arrived = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& tgt = scn.target[i];
      if (tgt.position && std::abs(state[i].position - *tgt.position) > 1e-3) return false;
      if (tgt.velocity && std::abs(state[i].velocity - *tgt.velocity) > 1e-3) return false;
      if (tgt.acceleration && std::abs(state[i].acceleration - *tgt.acceleration) > 1e-3) return false;
    }
    return true;
  };

  while (t_sim < scn.simulation.duration_cap) {
    std::vector<otg::obstacle> visible;
    for (const auto& o : scn.obstacles) {
      if (o.reveal_time <= t_sim + 1e-12) visible.push_back(o.shape.time_shifted(t_sim));
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
      otg::plan_result step = otg::replan_step(state, scn.target, scn.limits, visible, cfg);
      if (step.used_evasion && step.direct_collision && !ever_detected) {
        ever_detected = true;
        double clearance_now = 1e300;
        for (const auto& obs : visible) {
          clearance_now = std::min(clearance_now, obstacle_clearance(obs, state, 0.0));
        }
        detected_preemptively = step.direct_collision->time > 0.0 && clearance_now > 0.0;
      }
      if (direct_time_estimate < 0.0) direct_time_estimate = step.direct_total_time;
      current_plan = std::move(step.chosen);
      current_plan_age = 0.0;
    } catch (const otg::planning_error& e) {
      if (!current_plan) {
        std::fprintf(stderr, "simulate: no feasible plan at t=%.3f: %s\n", t_sim, e.what());
        return k_exit_infeasible;
      }
      // keep flying the previous plan
    }
    replan_seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    // Geometric clearance against every obstacle, revealed or not.
    double clearance_here = 1e300;
    for (const auto& o : scn.obstacles) {
      clearance_here = std::min(clearance_here, obstacle_clearance(o.shape, state, t_sim));
    }
    min_clearance = std::min(min_clearance, clearance_here);
    trace << t_sim;
    for (std::size_t i = 0; i < n; ++i) {
      trace << "," << state[i].position << "," << state[i].velocity << "," << state[i].acceleration;
    }
    trace << "," << clearance_here << "\n";
    if (arrived()) break;

    // Ideal triple integrator: follow the current plan for one period.
    current_plan_age = std::min(current_plan_age + dt, current_plan->total_duration());
    auto next = otg::evaluate_all(*current_plan, current_plan_age);
    if (scn.simulation.disturbance_stddev > 0.0) {
      for (auto& s : next) s = otg::axis_state(s.position, s.velocity + noise(rng) * dt, s.acceleration);
    }
    state = next;
    t_sim += dt;
  }

  std::sort(replan_seconds.begin(), replan_seconds.end());
  std::ostringstream sum;
  sum.precision(12);
  sum << "status = " << (arrived() ? "arrived" : "timeout") << "\n";
  sum << "final_time = " << t_sim << "\n";
  sum << "min_clearance = " << min_clearance << "\n";
  sum << "collision_detected = " << (ever_detected ? "true" : "false") << "\n";
  sum << "detected_preemptively = " << (detected_preemptively ? "true" : "false") << "\n";
  sum << "direct_time_estimate = " << direct_time_estimate << "\n";
  sum << "steps = " << replan_seconds.size() << "\n";
  otg::write_text_file(opt.out_dir + "/simulation_summary.txt", sum.str());
  otg::write_text_file(opt.out_dir + "/flight_trace.csv", trace.str());
  {
    std::ostringstream hist;
    hist << "replan_seconds\n";
    for (double s : replan_seconds) hist << s << "\n";
    otg::write_text_file(opt.out_dir + "/replan_times.csv", hist.str());
  }
  std::printf("simulate: %s at t=%.3f s, min clearance %.4f m, %zu steps\n",
              arrived() ? "arrived" : "timed out", t_sim, min_clearance, replan_seconds.size());
  return arrived() ? k_exit_ok : k_exit_infeasible;
}

int cmd_fuzz(std::uint64_t count, std::uint64_t seed) {
  const otg::fuzz::report rep = otg::fuzz::run(count, seed);
  std::printf("fuzz: %llu instances, %zu failures, %.1f s\n", static_cast<unsigned long long>(rep.count),
              rep.failures.size(), rep.elapsed_seconds);
  for (const auto& f : rep.failures) {
    std::printf("  failure index=%llu seed=%llu: %s\n", static_cast<unsigned long long>(f.index),
                static_cast<unsigned long long>(f.seed), f.reason.c_str());
  }
  return rep.failures.empty() ? k_exit_ok : k_exit_infeasible;
}

int cmd_bench(const common_options& opt, int iterations) {
  const otg::scenario scn = otg::load_scenario(opt.scenario_path);
  const std::vector<otg::obstacle> obstacles = scn.obstacle_shapes();

  auto run_mode = [&](bool parallel) {
    otg::plan_config cfg;
    cfg.parallel = parallel;
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(iterations));
    for (int i = 0; i < iterations + 3; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      const otg::plan_result r = otg::plan(scn.start, scn.target, scn.limits, obstacles, cfg);
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      (void)r;
      if (i >= 3) samples.push_back(s);  // warmup excluded
    }
    std::sort(samples.begin(), samples.end());
    const double p50 = samples[samples.size() / 2];
    const double p95 = samples[std::min(samples.size() - 1, static_cast<std::size_t>(samples.size() * 0.95))];
    std::printf("%s: p50 %.3f ms, p95 %.3f ms, max %.3f ms (%d iterations)\n",
                parallel ? "parallel" : "single-core", p50 * 1e3, p95 * 1e3, samples.back() * 1e3, iterations);
  };
  run_mode(false);
  run_mode(true);
  return k_exit_ok;
}

int cmd_sample_map(const common_options& opt, int resolution, const std::string& output) {
  const otg::scenario scn = otg::load_scenario(opt.scenario_path);
  const std::vector<otg::obstacle> obstacles = scn.obstacle_shapes();

  const otg::plan_result result = otg::plan(scn.start, scn.target, scn.limits, obstacles);
  const otg::candidate_report* cand = nullptr;
  for (const auto& c : result.candidates) {
    if (c.built && c.via) {
      cand = &c;
      break;
    }
  }
  if (!cand) {
    std::fprintf(stderr, "sample-map: scenario produced no evasion candidate to map\n");
    return k_exit_infeasible;
  }
  const std::size_t a0 = cand->spec.bound_axes[0], a1 = cand->spec.bound_axes[1];
  const std::array<otg::axis_state, 2> start2{scn.start[a0], scn.start[a1]};
  const std::array<otg::axis_state, 2> target2{result.resolved_targets[a0], result.resolved_targets[a1]};
  const std::array<double, 2> via2{cand->via->states[a0].position, cand->via->states[a1].position};
  const std::array<otg::axis_limits, 2> limits2{scn.limits[a0], scn.limits[a1]};

  auto range_of = [&](const otg::axis_limits& lim) -> std::array<double, 2> {
    return {lim.velocity_min.value_or(-5.0), lim.velocity_max.value_or(5.0)};
  };
  const auto map = otg::oracle::grid_viastate_time_map(start2, via2, target2, limits2, resolution,
                                                       range_of(limits2[0]), range_of(limits2[1]));
  std::ostringstream csv;
  csv.precision(12);
  csv << "vx,vy,T1,T2,Ttotal\n";
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      csv << map.vx(i) << "," << map.vy(j) << ",";
      if (map.feasible(i, j)) {
        csv << map.t1(i, j) << "," << map.t2(i, j) << "," << map.total(i, j) << "\n";
      } else {
        csv << ",,\n";
      }
    }
  }
  otg::write_text_file(output, csv.str());
  std::printf("sample-map: wrote %dx%d grid for axes (%zu,%zu) to %s\n", resolution, resolution, a0, a1,
              output.c_str());
  return k_exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-optimal trajectory generation with obstacle evasion"};
  app.require_subcommand(1);

  common_options opt;
  std::uint64_t fuzz_count = 100000;
  int iterations = 200;
  int resolution = 100;
  std::string map_output = "sample_map.csv";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", opt.scenario_path, "scenario file")->required();
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_flag("--parallel", opt.parallel, "evaluate candidates in parallel");
    sub->add_option("--trace-dt", opt.trace_dt, "trace sample step [s]")->check(CLI::PositiveNumber);
  };

  CLI::App* plan_cmd = app.add_subcommand("plan", "one-shot plan for a scenario");
  add_common(plan_cmd);

  CLI::App* sim_cmd = app.add_subcommand("simulate", "closed-loop simulation with replanning");
  add_common(sim_cmd);

  CLI::App* fuzz_cmd = app.add_subcommand("fuzz", "randomized single-axis planner fuzzing");
  fuzz_cmd->add_option("--count", fuzz_count, "number of instances")->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--seed", opt.seed, "random seed");

  CLI::App* bench_cmd = app.add_subcommand("bench", "full-pipeline latency measurement");
  add_common(bench_cmd);
  bench_cmd->add_option("--iterations", iterations, "number of measured runs")->check(CLI::PositiveNumber);

  CLI::App* map_cmd = app.add_subcommand("sample-map", "export the viastate sampling map CSV");
  add_common(map_cmd);
  map_cmd->add_option("--resolution", resolution, "grid resolution per axis")->check(CLI::Range(2, 1000));
  map_cmd->add_option("--output", map_output, "output CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? k_exit_ok : k_exit_schema;
  }

  try {
    if (plan_cmd->parsed()) return cmd_plan(opt);
    if (sim_cmd->parsed()) return cmd_simulate(opt);
    if (fuzz_cmd->parsed()) return cmd_fuzz(fuzz_count, opt.seed);
    if (bench_cmd->parsed()) return cmd_bench(opt, iterations);
    if (map_cmd->parsed()) return cmd_sample_map(opt, resolution, map_output);
  } catch (const otg::scenario_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return k_exit_schema;
  } catch (const otg::io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return k_exit_io;
  } catch (const otg::planning_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return k_exit_infeasible;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return k_exit_schema;
  }
  return k_exit_schema;
}
