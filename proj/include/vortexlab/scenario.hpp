#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>

#include "vortexlab/dynamics.hpp"
#include "vortexlab/reduction.hpp"

namespace vortexlab {

inline constexpr const char* kScenarioSchema = "vortexlab.scenario/1";

struct AnalysisToggles {
  bool classify = true;
  double eps = 1e-3;
  bool conditions = true;
  /// Tolerance for treating M as zero in the condition table.
  double m_tol = 1e-9;
  bool beta12_bound = false;
  std::pair<std::size_t, std::size_t> bound_pair{0, 1};
  bool parallelogram = false;
  bool reduction = false;
  std::pair<std::size_t, std::size_t> reduction_pair{0, 1};
  double reduction_window = 2.0;
  std::size_t reduction_samples = 200;
  double envelope_fraction = 0.05;
};

/// Where the initial positions came from.
struct GeneratorInfo {
  std::string kind = "explicit";  // explicit | square | parallelogram | random | reduced
  nlohmann::json params = nlohmann::json::object();
};

struct ScenarioConfig {
  VortexState initial;
  GeneratorInfo generator;
  bool recenter = false;
  double t_end = 10.0;
  IntegratorConfig integrator;
  AnalysisToggles analysis;
  std::filesystem::path output_dir = "out";
};

/// Parses and validates a scenario. Throws InvalidArgument (or a JSON error)
/// with a message naming the offending key.
ScenarioConfig parse_scenario(const nlohmann::json& doc);
/// Reads a scenario file; VORTEXLAB_OUTPUT_DIR, when set, replaces output_dir.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Square of side `side` centred at the origin, vertices in cyclic order.
VortexState square_state(const std::vector<double>& strengths, double side = 1.0);

/// Points drawn uniformly in the disk of radius `radius` from a seeded
/// mt19937_64, then one vortex moved along a line so that M equals `m_target`.
/// Throws InvalidArgument when no draw within 1000 attempts reaches the target.
VortexState random_state(const std::vector<double>& strengths, std::uint64_t seed, double m_target,
                         double radius = 1.0);

}  // namespace vortexlab
