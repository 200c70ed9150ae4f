#include "vortexlab/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "vortexlab/collisions.hpp"
#include "vortexlab/csv.hpp"
#include "vortexlab/parallelogram.hpp"
#include "vortexlab/reduced_flow.hpp"
#include "vortexlab/report_json.hpp"

namespace vortexlab {

using nlohmann::json;

namespace {

json state_json(const VortexState& s) {
  json pos = json::array();
  for (const auto& z : s.positions) pos.push_back({number(z.real()), number(z.imag())});
  return {{"time", number(s.time)}, {"strengths", s.strengths}, {"positions", pos}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

json reduction_section(const ScenarioConfig& cfg, RunSummary& summary) {
  const auto& a = cfg.analysis;
  const auto [state, perm] = relabel_binary_first(cfg.initial, a.reduction_pair);
  std::array<double, 4> g{state.strengths[0], state.strengths[1], state.strengths[2], state.strengths[3]};
  json out;
  out["permutation"] = json::array({perm[0] + 1, perm[1] + 1, perm[2] + 1, perm[3] + 1});
  out["chain"] = to_json(transform_chain(g));
  const ReducedChartPoint rp = chart_to_reduced(state);
  out["initial_point"] = to_json(rp);
  ComparisonOptions opt;
  opt.window = a.reduction_window;
  opt.samples = a.reduction_samples;
  opt.envelope_fraction = a.envelope_fraction;
  opt.full = cfg.integrator;
  // The comparison grid replaces the scenario's own sampling.
  opt.full.sample_interval = 0.0;
  const ComparisonReport rep = compare_with_full(rp, g, opt);
  out["comparison"] = to_json(rep);
  summary.reduction_deviation = rep.max_deviation;
  summary.reduction_within_envelope = rep.within_envelope ? "true" : "false";
  return out;
}

}  // namespace

json build_report(const ScenarioConfig& cfg, const Trajectory& traj, RunSummary& summary) {
  const auto& a = cfg.analysis;
  const std::size_t n = cfg.initial.size();
  json rep;
  rep["schema"] = kReportSchema;
  rep["scenario"] = {{"generator", cfg.generator.kind},
                     {"generator_params", cfg.generator.params},
                     {"n", n},
                     {"t_end", number(cfg.t_end)},
                     {"recenter", cfg.recenter},
                     {"initial_state", state_json(cfg.initial)}};
  rep["termination"] = std::string(to_string(traj.termination));
  rep["accepted_steps"] = traj.accepted_steps;
  rep["rejected_steps"] = traj.rejected_steps;
  rep["samples"] = traj.samples.size();
  rep["final_time"] = number(traj.samples.back().time());
  rep["initial_invariants"] = to_json(traj.samples.front().invariants);
  rep["final_invariants"] = to_json(traj.samples.back().invariants);
  rep["drift"] = to_json(traj.drift);

  if (a.classify) {
    if (traj.samples.size() >= 10) {
      const CollisionReport cr = classify(traj, a.eps);
      rep["collision_report"] = to_json(cr);
      std::string tags;
      for (const auto& c : cr.clusters) {
        if (!tags.empty()) tags += ' ';
        tags += std::string(to_string(c.kind)) + ":";
        for (std::size_t k = 0; k < c.members.size(); ++k) tags += (k ? "-" : "") + std::to_string(c.members[k] + 1);
      }
      summary.collision_tags = tags;
    } else {
      rep["collision_report"] = {{"skipped", "fewer than 10 samples"}};
    }
  }
  if (a.conditions && n == 4) {
    rep["conditions"] = {{"M", number(traj.samples.front().invariants.m_pair_sum)},
                         {"m_tol", number(a.m_tol)},
                         {"patterns", to_json(necessary_conditions(cfg.initial.strengths,
                                                                   traj.samples.front().invariants.m_pair_sum, a.m_tol))}};
  }
  if (a.beta12_bound) {
    const BoundReport b = beta12_virial_bound(traj, a.bound_pair);
    json bj = to_json(b);
    bj["pair"] = json::array({a.bound_pair.first + 1, a.bound_pair.second + 1});
    rep["beta12_bound"] = bj;
    if (b.applicable) summary.bound_ratio = b.ratio;
  }
  if (cfg.generator.kind == "parallelogram" || a.parallelogram) {
    const auto& g = cfg.initial.strengths;
    json pj;
    if (n == 4) {
      // h only rescales the curve; the exponents and limit direction do not depend on it.
      const ParallelogramParams prm = ParallelogramParams::make(g[0], g[1], 1.0);
      pj["params"] = to_json(prm);
      summary.delta = prm.delta;
      summary.alpha = prm.alpha;
      try {
        const auto d = limit_direction_of_curve(prm);
        pj["limit_direction"] = {number(d[0]), number(d[1]), number(d[2])};
        summary.limit_direction = d;
      } catch (const DomainError& e) {
        pj["limit_direction"] = nullptr;
        pj["limit_direction_reason"] = e.what();
      }
      if (a.parallelogram) pj["preservation"] = to_json(check_preservation(traj));
    } else {
      pj["skipped"] = "needs four vortices";
    }
    rep["parallelogram"] = pj;
  }
  if (a.reduction) rep["reduction"] = reduction_section(cfg, summary);
  return rep;
}

RunSummary run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  RunSummary summary;
  const Trajectory traj = integrate(cfg.initial, cfg.initial.time + cfg.t_end, cfg.integrator);
  summary.termination = std::string(to_string(traj.termination));
  summary.accepted_steps = traj.accepted_steps;
  summary.drift = traj.drift;
  {
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    write_text(dir / "trajectory.csv", os.str());
  }
  {
    std::ostringstream os;
    write_shape_csv(os, traj);
    write_text(dir / "shape.csv", os.str());
  }
  const json rep = build_report(cfg, traj, summary);
  write_text(dir / "report.json", rep.dump(2) + "\n");
  summary.ok = true;
  return summary;
}

std::vector<SweepPoint> expand_sweep(const json& doc) {
  if (!doc.is_object() || !doc.contains("template") || !doc.contains("parameters"))
    throw InvalidArgument("sweep file needs 'template' and 'parameters'");
  for (const auto& [k, v] : doc.items())
    if (k != "template" && k != "parameters" && k != "schema") throw InvalidArgument("unknown key '" + k + "' in sweep");
  if (doc.contains("schema") && doc.at("schema") != kSweepSchema)
    throw InvalidArgument(std::string("unsupported sweep schema, expected ") + kSweepSchema);
  const auto& params = doc.at("parameters");
  if (!params.is_object() || params.empty()) throw InvalidArgument("sweep grid is empty");
  std::map<std::string, json> axes;
  for (const auto& [k, v] : params.items()) {
    if (!v.is_array() || v.empty()) throw InvalidArgument("sweep grid is empty along '" + k + "'");
    axes[k] = v;
  }
  std::vector<SweepPoint> points{SweepPoint{{}, doc.at("template")}};
  for (const auto& [ptr, values] : axes) {
    std::vector<SweepPoint> next;
    for (const auto& p : points)
      for (const auto& v : values) {
        SweepPoint q = p;
        q.values.emplace_back(ptr, v);
        q.scenario[json::json_pointer(ptr)] = v;
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  return points;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string cell(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

}  // namespace

SweepResult run_sweep(const json& doc, const std::filesystem::path& out_dir, unsigned jobs) {
  const auto points = expand_sweep(doc);
  std::filesystem::create_directories(out_dir);
  std::vector<RunSummary> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < points.size(); k = next++) {
      char name[32];
      std::snprintf(name, sizeof name, "run_%04zu", k);
      try {
        const ScenarioConfig cfg = parse_scenario(points[k].scenario);
        rows[k] = run_scenario(cfg, out_dir / name);
      } catch (const std::exception& e) {
        rows[k] = RunSummary{};
        rows[k].message = error_kind(e) + ": " + e.what();
      }
    }
  };
  const unsigned n_workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ostringstream os;
  os << "index,status";
  for (const auto& [ptr, v] : points.front().values) os << ',' << csv_field(ptr);
  os << ",termination,accepted_steps,drift_H,drift_I,drift_Z,drift_M,collision_tags,bound_ratio,delta,alpha,"
        "limit_x,limit_y,limit_z,reduction_deviation,reduction_within_envelope,message\n";
  SweepResult res;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& r = rows[k];
    (r.ok ? res.ok : res.failed)++;
    os << k << ',' << (r.ok ? "ok" : "error");
    for (const auto& [ptr, v] : points[k].values) os << ',' << csv_field(v.is_number() ? cell(v.get<double>()) : v.dump());
    if (r.ok) {
      os << ',' << r.termination << ',' << r.accepted_steps << ',' << cell(r.drift.energy) << ','
         << cell(r.drift.angular_impulse) << ',' << cell(r.drift.moment) << ',' << cell(r.drift.m) << ','
         << csv_field(r.collision_tags) << ',' << cell(r.bound_ratio) << ',' << cell(r.delta) << ',' << cell(r.alpha)
         << ',' << cell(r.limit_direction[0]) << ',' << cell(r.limit_direction[1]) << ',' << cell(r.limit_direction[2])
         << ',' << cell(r.reduction_deviation) << ',' << r.reduction_within_envelope << ",\n";
    } else {
      os << ",,,,,,,,,,,,,,,," << csv_field(r.message) << '\n';
    }
  }
  write_text(out_dir / "summary.csv", os.str());
  return res;
}

}  // namespace vortexlab
