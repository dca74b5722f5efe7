#include "otg/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace otg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw scenario_error("scenario: " + what); }

double finite_number(const json& j, const std::string& what) {
  if (!j.is_number()) fail(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(what + " must be finite");
  return v;
}

// Free fields: null or the quoted token "NaN".
std::optional<double> optional_field(const json& j, const std::string& what) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "NaN" || s == "nan") return std::nullopt;
    fail(what + ": unknown token '" + s + "' (expected \"NaN\")");
  }
  return finite_number(j, what);
}

// Unbounded limits: null or the quoted tokens "Inf"/"-Inf".
std::optional<double> optional_bound(const json& j, const std::string& what) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "Inf" || s == "inf" || s == "-Inf" || s == "-inf") return std::nullopt;
    fail(what + ": unknown token '" + s + "' (expected \"Inf\")");
  }
  return finite_number(j, what);
}

piecewise_poly parse_bound(const json& j, const std::string& what) {
  if (j.is_number()) return piecewise_poly::constant(finite_number(j, what));
  if (!j.is_array() || j.empty()) fail(what + " must be a number or a non-empty list of pieces");
  std::vector<double> starts;
  std::vector<poly3> pieces;
  double expected_start = 0.0;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& piece = j[i];
    // (start time, duration, position, velocity, acceleration, jerk)
    if (!piece.is_array() || piece.size() != 6) {
      fail(what + " piece " + std::to_string(i) + " must be [start, duration, position, velocity, acceleration, jerk]");
    }
    const double start = finite_number(piece[0], what + " piece start");
    const double duration = finite_number(piece[1], what + " piece duration");
    if (i == 0) expected_start = start;
    if (std::abs(start - expected_start) > 1e-9) fail(what + " pieces must be contiguous in time");
    if (duration < 0.0) fail(what + " piece duration must be >= 0");
    poly3 p;
    p.c[0] = finite_number(piece[2], what + " position");
    p.c[1] = finite_number(piece[3], what + " velocity");
    p.c[2] = 0.5 * finite_number(piece[4], what + " acceleration");
    p.c[3] = finite_number(piece[5], what + " jerk") / 6.0;
    starts.push_back(start);
    pieces.push_back(p);
    expected_start = start + duration;
  }
  return piecewise_poly(std::move(starts), std::move(pieces));
}

}  // namespace

std::vector<obstacle> scenario::obstacle_shapes() const {
  std::vector<obstacle> out;
  out.reserve(obstacles.size());
  for (const auto& o : obstacles) out.push_back(o.shape);
  return out;
}

scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw io_error("cannot open scenario file: " + file.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }

  scenario scn;
  if (!doc.contains("axes") || !doc["axes"].is_array() || doc["axes"].empty()) {
    fail("'axes' must be a non-empty list of axis names");
  }
  for (const auto& name : doc["axes"]) scn.axis_names.push_back(name.get<std::string>());
  const std::size_t n = scn.axis_names.size();

  if (doc.contains("vehicle_radius")) scn.vehicle_radius = finite_number(doc["vehicle_radius"], "vehicle_radius");
  if (scn.vehicle_radius < 0.0) fail("vehicle_radius must be >= 0");

  const json& jstart = doc.at("start");
  const json& jtarget = doc.at("target");
  const json& jlimits = doc.at("limits");
  if (jstart.size() != n || jtarget.size() != n || jlimits.size() != n) {
    fail("start/target/limits must have one entry per axis");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const json& s = jstart[i];
    scn.start.emplace_back(finite_number(s.at("position"), "start.position"),
                           finite_number(s.at("velocity"), "start.velocity"),
                           finite_number(s.at("acceleration"), "start.acceleration"));
    const json& t = jtarget[i];
    partial_target tgt;
    if (t.contains("position")) tgt.position = optional_field(t["position"], "target.position");
    if (t.contains("velocity")) tgt.velocity = optional_field(t["velocity"], "target.velocity");
    if (t.contains("acceleration")) tgt.acceleration = optional_field(t["acceleration"], "target.acceleration");
    try {
      tgt.validate();
    } catch (const std::invalid_argument& e) {
      fail(std::string("target: ") + e.what());
    }
    scn.target.push_back(tgt);
    const json& l = jlimits[i];
    axis_limits lim;
    auto bound_pair = [&](const char* key, std::optional<double>& lo, std::optional<double>& hi) {
      if (!l.contains(key)) return;
      const json& b = l.at(key);
      if (!b.is_array() || b.size() != 2) fail(std::string("limits.") + key + " must be [min, max]");
      lo = optional_bound(b[0], std::string("limits.") + key + "[0]");
      hi = optional_bound(b[1], std::string("limits.") + key + "[1]");
    };
    bound_pair("velocity", lim.velocity_min, lim.velocity_max);
    bound_pair("acceleration", lim.acceleration_min, lim.acceleration_max);
    bound_pair("jerk", lim.jerk_min, lim.jerk_max);
    try {
      lim.validate();
    } catch (const std::invalid_argument& e) {
      fail(std::string("limits: ") + e.what());
    }
    scn.limits.push_back(lim);
  }

  if (doc.contains("simulation")) {
    const json& sim = doc["simulation"];
    if (sim.contains("control_period")) {
      scn.simulation.control_period = finite_number(sim["control_period"], "simulation.control_period");
    }
    if (sim.contains("disturbance_seed")) scn.simulation.disturbance_seed = sim["disturbance_seed"].get<std::uint64_t>();
    if (sim.contains("disturbance_stddev")) {
      scn.simulation.disturbance_stddev = finite_number(sim["disturbance_stddev"], "simulation.disturbance_stddev");
    }
    if (sim.contains("obstacle_reveal_time")) {
      scn.simulation.default_reveal_time = finite_number(sim["obstacle_reveal_time"], "simulation.obstacle_reveal_time");
    }
    if (sim.contains("duration_cap")) scn.simulation.duration_cap = finite_number(sim["duration_cap"], "simulation.duration_cap");
  }

  if (doc.contains("obstacles")) {
    for (const json& jo : doc["obstacles"]) {
      scenario_obstacle so;
      if (jo.contains("margin")) so.margin = finite_number(jo["margin"], "obstacle.margin");
      if (so.margin < 0.0) fail("obstacle.margin must be >= 0");
      so.reveal_time = scn.simulation.default_reveal_time;
      if (jo.contains("reveal_time")) so.reveal_time = finite_number(jo["reveal_time"], "obstacle.reveal_time");
      const json& jaxes = jo.at("axes");
      if (jaxes.size() != n) fail("obstacle must define bounds for every axis");
      for (std::size_t i = 0; i < n; ++i) {
        obstacle_axis oa;
        oa.lower = parse_bound(jaxes[i].at("lower"), "obstacle lower bound");
        oa.upper = parse_bound(jaxes[i].at("upper"), "obstacle upper bound");
        so.shape.axes.push_back(std::move(oa));
      }
      so.shape.inflation = scn.vehicle_radius + so.margin;
      try {
        so.shape.validate(scn.simulation.duration_cap);
      } catch (const std::invalid_argument& e) {
        fail(std::string("obstacle: ") + e.what());
      }
      scn.obstacles.push_back(std::move(so));
    }
  }
  return scn;
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw io_error("cannot write: " + tmp.string());
    out << content;
    if (!out) throw io_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw io_error("rename failed: " + file.string() + ": " + ec.message());
}

std::string trace_csv(const axis_trajectory& traj, double dt) {
  std::string out = "t,p,v,a,j\n";
  char line[160];
  const double T = traj.total_duration();
  const long n = std::max(1L, static_cast<long>(std::ceil(T / dt)));
  for (long i = 0; i <= n; ++i) {
    const double t = std::min(T, i * dt);
    const axis_state s = evaluate(traj, t);
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", t, s.position, s.velocity,
                  s.acceleration, jerk_at(traj, t));
    out += line;
    if (t >= T) break;
  }
  return out;
}

namespace {

const char* face_name(face f) { return f == face::low ? "low" : "high"; }

const char* kind_name(influence_kind k) {
  switch (k) {
    case influence_kind::single_zero: return "single_zero";
    case influence_kind::single_min: return "single_min";
    case influence_kind::single_max: return "single_max";
    case influence_kind::multi_case1: return "multi_case1";
    case influence_kind::multi_case2: return "multi_case2";
    case influence_kind::multi_case3: return "multi_case3";
    case influence_kind::multi_case4: return "multi_case4";
  }
  return "unknown";
}

}  // namespace

std::string summary_text(const plan_result& result, const scenario& scn) {
  std::ostringstream out;
  out.precision(12);
  out << "status = ok\n";
  out << "axes = " << scn.axis_count() << "\n";
  out << "vehicle_radius = " << scn.vehicle_radius << "\n";
  out << "direct.total_time = " << result.direct_total_time << "\n";
  out << "direct.collides = " << (result.direct_collision ? "true" : "false") << "\n";
  if (result.direct_collision) {
    out << "direct.collision.time = " << result.direct_collision->time << "\n";
    for (std::size_t k = 0; k < result.direct_collision->states.size(); ++k) {
      out << "direct.collision.position." << k << " = " << result.direct_collision->states[k].position << "\n";
    }
  }
  out << "candidates.prepruning = " << result.prepruning_count << "\n";
  out << "candidates.count = " << result.candidates.size() << "\n";
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    const candidate_report& c = result.candidates[i];
    const std::string p = "candidate." + std::to_string(i) + ".";
    out << p << "bound_axes = " << c.spec.bound_axes[0] << "," << c.spec.bound_axes[1] << "\n";
    out << p << "side = " << face_name(c.spec.side) << "\n";
    out << p << "built = " << (c.built ? "true" : "false") << "\n";
    if (c.built) {
      out << p << "total_time = " << c.total_time << "\n";
      out << p << "collision_free = " << (c.collision_free ? "true" : "false") << "\n";
      out << p << "influence = " << kind_name(c.kind) << "\n";
      if (c.via) out << p << "pass_time = " << c.via->pass_time << "\n";
    } else {
      out << p << "failure = " << c.failure << "\n";
    }
  }
  out << "chosen.used_evasion = " << (result.used_evasion ? "true" : "false") << "\n";
  if (result.used_evasion) out << "chosen.candidate = " << result.chosen_candidate << "\n";
  out << "chosen.total_time = " << result.chosen.total_duration() << "\n";
  return out.str();
}

std::string timings_text(const plan_result& result) {
  std::ostringstream out;
  out.precision(6);
  out << "timing.direct_seconds = " << result.timings.direct_seconds << "\n";
  out << "timing.collision_seconds = " << result.timings.collision_seconds << "\n";
  out << "timing.candidates_seconds = " << result.timings.candidates_seconds << "\n";
  out << "timing.selection_seconds = " << result.timings.selection_seconds << "\n";
  out << "timing.total_seconds = " << result.timings.total_seconds << "\n";
  return out.str();
}

}  // namespace otg
