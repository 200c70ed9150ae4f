#pragma once

#include <array>
#include <filesystem>
#include <limits>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "vortexlab/scenario.hpp"

namespace vortexlab {

/// One row of a sweep summary, also returned by single runs.
struct RunSummary {
  bool ok = false;
  std::string message;
  std::string termination;
  std::size_t accepted_steps = 0;
  DriftSummary drift;
  std::string collision_tags;
  double bound_ratio = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::array<double, 3> limit_direction{std::numeric_limits<double>::quiet_NaN(),
                                        std::numeric_limits<double>::quiet_NaN(),
                                        std::numeric_limits<double>::quiet_NaN()};
  double reduction_deviation = std::numeric_limits<double>::quiet_NaN();
  std::string reduction_within_envelope;
};

/// Integrates the scenario and writes trajectory.csv, shape.csv and
/// report.json into `dir` (created if needed). Output depends only on `cfg`.
RunSummary run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& dir);

/// Report document for an already integrated trajectory.
nlohmann::json build_report(const ScenarioConfig& cfg, const Trajectory& traj, RunSummary& summary);

struct SweepPoint {
  std::vector<std::pair<std::string, nlohmann::json>> values;  // JSON pointer -> value
  nlohmann::json scenario;
};

/// Cartesian product of `parameters` (JSON pointer -> array of values, taken
/// in sorted pointer order) applied to `template`. Throws InvalidArgument on
/// an empty grid.
std::vector<SweepPoint> expand_sweep(const nlohmann::json& sweep_doc);

struct SweepResult {
  std::size_t ok = 0;
  std::size_t failed = 0;
};

/// Runs every point with at most `jobs` concurrent workers; point k writes
/// into out_dir/run_k. Failures become error rows in summary.csv and never
/// stop the sweep.
SweepResult run_sweep(const nlohmann::json& sweep_doc, const std::filesystem::path& out_dir, unsigned jobs);

}  // namespace vortexlab
