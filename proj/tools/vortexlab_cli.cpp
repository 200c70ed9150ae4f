#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "vortexlab/collisions.hpp"
#include "vortexlab/csv.hpp"
#include "vortexlab/parallelogram.hpp"
#include "vortexlab/reduced_flow.hpp"
#include "vortexlab/report_json.hpp"
#include "vortexlab/runner.hpp"
#include "vortexlab/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vortexlab;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;
constexpr int kPartial = 3;

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

// Error JSON goes to stderr and, when a directory is known, to error.json.
// A config that fails to parse still has the environment override.
int fail(const std::exception& e, fs::path dir) {
  const std::string text = error_json(error_kind(e), e.what()).dump(2) + "\n";
  std::cerr << text;
  if (const char* env = std::getenv("VORTEXLAB_OUTPUT_DIR"); dir.empty() && env && *env) dir = env;
  if (!dir.empty()) {
    try {
      write_file(dir / "error.json", text);
    } catch (...) {
    }
  }
  return kRuntime;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return json::parse(in);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0) throw InvalidArgument("bad number '" + item + "' in --strengths");
    out.push_back(v);
  }
  return out;
}

int cmd_run(const std::string& config) {
  fs::path dir;
  try {
    const ScenarioConfig cfg = load_scenario(config);
    dir = cfg.output_dir;
    run_scenario(cfg, dir);
    std::cout << (dir / "report.json").string() << "\n";
    return kOk;
  } catch (const std::exception& e) {
    return fail(e, dir);
  }
}

int cmd_sweep(const std::string& config, const std::string& out, unsigned jobs) {
  fs::path dir = out;
  try {
    const json doc = read_json(config);
    if (dir.empty()) {
      const auto& t = doc.at("template");
      dir = t.contains("output_dir") ? fs::path(t.at("output_dir").get<std::string>()) : fs::path("out");
      if (const char* env = std::getenv("VORTEXLAB_OUTPUT_DIR")) dir = env;
    }
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    const SweepResult res = run_sweep(doc, dir, jobs);
    std::cout << res.ok << " ok, " << res.failed << " failed\n";
    return res.failed == 0 ? kOk : kPartial;
  } catch (const std::exception& e) {
    return fail(e, dir);
  }
}

int cmd_classify(const std::string& trajectory, const std::string& strengths, double eps, const std::string& out) {
  try {
    const auto g = parse_list(strengths);
    std::ifstream in(trajectory);
    if (!in) throw InvalidArgument("cannot open " + trajectory);
    const Trajectory traj = trajectory_from_states(read_trajectory_csv(in, g));
    json doc = to_json(classify(traj, eps));
    doc["schema"] = kClassifySchema;
    doc["source"] = fs::path(trajectory).filename().string();
    const std::string text = doc.dump(2) + "\n";
    if (out.empty())
      std::cout << text;
    else
      write_file(out, text);
    return kOk;
  } catch (const std::exception& e) {
    return fail(e, out.empty() ? fs::path() : fs::path(out).parent_path());
  }
}

int cmd_curve(double g1, double g2, double h, const std::string& branch, std::size_t count, double pmin, double pmax,
              const std::string& out) {
  try {
    if (branch != "p" && branch != "q") throw InvalidArgument("--branch must be p or q");
    const auto prm = ParallelogramParams::make(g1, g2, h);
    const auto pts = sample_collapse_branch(prm, branch == "p" ? CurveBranch::p : CurveBranch::q, count, pmin, pmax);
    std::ostringstream os;
    write_curve_csv(os, pts);
    if (out.empty())
      std::cout << os.str();
    else
      write_file(out, os.str());
    return kOk;
  } catch (const std::exception& e) {
    return fail(e, out.empty() ? fs::path() : fs::path(out).parent_path());
  }
}

int cmd_reduce(const std::string& config) {
  fs::path dir;
  try {
    const ScenarioConfig cfg = load_scenario(config);
    dir = cfg.output_dir;
    if (cfg.initial.size() != 4) throw InvalidArgument("reduce needs four vortices");
    const auto& a = cfg.analysis;
    const auto [state, perm] = relabel_binary_first(cfg.initial, a.reduction_pair);
    const std::array<double, 4> g{state.strengths[0], state.strengths[1], state.strengths[2], state.strengths[3]};

    const ReducedChartPoint rp = chart_to_reduced(state);
    const VortexState back = reduced_to_chart(rp, g, state.time);
    double roundtrip = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      roundtrip = std::max(roundtrip, std::abs(back.positions[k] - state.positions[k]));
      scale = std::max(scale, std::abs(state.positions[k]));
    }

    ReducedFlowConfig rcfg;
    const ReducedTrajectory rt = integrate_reduced(rp, g, cfg.t_end, rcfg);

    ComparisonOptions opt;
    opt.window = a.reduction_window;
    opt.samples = a.reduction_samples;
    opt.envelope_fraction = a.envelope_fraction;
    opt.full = cfg.integrator;
    opt.full.sample_interval = 0.0;
    const ComparisonReport cmp = compare_with_full(rp, g, opt);

    std::ostringstream csv;
    CsvWriter w(csv, {"t", "i1", "phi1", "hbar", "i1_full", "phi1_full", "deviation"});
    for (const auto& r : cmp.rows) w.row({r.t, r.i1_reduced, r.phi1_reduced, r.hbar, r.i1_full, r.phi1_full, r.deviation});
    write_file(dir / "reduced.csv", csv.str());

    json doc;
    doc["schema"] = kReduceSchema;
    doc["strengths"] = g;
    doc["permutation"] = json::array({perm[0] + 1, perm[1] + 1, perm[2] + 1, perm[3] + 1});
    doc["chain"] = to_json(transform_chain(g));
    doc["initial_point"] = to_json(rp);
    doc["roundtrip_error"] = number(roundtrip / std::max(scale, 1.0));
    doc["reduced_flow"] = {{"t_end", number(cfg.t_end)},
                           {"termination", std::string(to_string(rt.termination))},
                           {"boundary", rt.boundary},
                           {"final_time", number(rt.t.empty() ? 0.0 : rt.t.back())},
                           {"hbar_drift", number(rt.hbar_drift)},
                           {"derivative_crosscheck", number(rt.derivative_crosscheck)}};
    json cj = to_json(cmp);
    cj["window"] = number(a.reduction_window);
    cj["envelope_fraction"] = number(a.envelope_fraction);
    doc["comparison"] = cj;
    write_file(dir / "reduce.json", doc.dump(2) + "\n");
    std::cout << (dir / "reduce.json").string() << "\n";
    return kOk;
  } catch (const std::exception& e) {
    return fail(e, dir);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point vortex collision and reduction toolkit"};
  app.require_subcommand(1);

  std::string config, out, trajectory, strengths, branch = "p";
  unsigned jobs = 0;
  double eps = 1e-3, g1 = 1.0, g2 = 1.0, h = 1.0, pmin = 1e-12, pmax = 1e-2;
  std::size_t count = 200;

  auto* run = app.add_subcommand("run", "Integrate one scenario and write trajectory.csv, shape.csv, report.json");
  run->add_option("-c,--config", config, "Scenario JSON file")->required()->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid and write summary.csv");
  sweep->add_option("-c,--config", config, "Sweep JSON file (template + parameters)")->required()->check(CLI::ExistingFile);
  sweep->add_option("-j,--jobs", jobs, "Worker threads (0 = hardware concurrency)");
  sweep->add_option("-o,--out", out, "Output directory (default: template output_dir)");

  auto* cls = app.add_subcommand("classify", "Re-analyze an existing trajectory.csv");
  cls->add_option("-t,--trajectory", trajectory, "trajectory.csv")->required()->check(CLI::ExistingFile);
  cls->add_option("-s,--strengths", strengths, "Comma separated strengths")->required();
  cls->add_option("-e,--eps", eps, "Collision threshold on squared distances")->check(CLI::PositiveNumber);
  cls->add_option("-o,--out", out, "Output JSON file (default: stdout)");

  auto* curve = app.add_subcommand("parallelogram-curve", "Sample the parallelogram collapse curve");
  curve->add_option("--gamma1", g1, "Strength of vortices 1 and 3")->required();
  curve->add_option("--gamma2", g2, "Strength of vortices 2 and 4")->required();
  curve->add_option("--hvalue", h, "Exponentiated energy constant")->check(CLI::PositiveNumber);
  curve->add_option("--branch", branch, "Curve parameter: p or q")->check(CLI::IsMember({"p", "q"}));
  curve->add_option("--count", count, "Number of samples")->check(CLI::Range(std::size_t{2}, std::size_t{10000000}));
  curve->add_option("--pmin", pmin, "Smallest parameter value")->check(CLI::PositiveNumber);
  curve->add_option("--pmax", pmax, "Largest parameter value")->check(CLI::PositiveNumber);
  curve->add_option("-o,--out", out, "Output CSV file (default: stdout)");

  auto* red = app.add_subcommand("reduce", "Chart round trip, reduced integration and comparison with the full flow");
  red->add_option("-c,--config", config, "Scenario JSON file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*run) return cmd_run(config);
  if (*sweep) return cmd_sweep(config, out, jobs);
  if (*cls) return cmd_classify(trajectory, strengths, eps, out);
  if (*curve) return cmd_curve(g1, g2, h, branch, count, pmin, pmax, out);
  if (*red) return cmd_reduce(config);
  return kUsage;
}
