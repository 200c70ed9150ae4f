#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "vortexlab/csv.hpp"
#include "vortexlab/runner.hpp"
#include "vortexlab/scenario.hpp"

using namespace vortexlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json square_doc() {
  return json::parse(R"({
    "schema": "vortexlab.scenario/1",
    "strengths": [1, 1, 1, 1],
    "generator": {"kind": "square", "side": 2.0},
    "t_end": 1.0,
    "integrator": {"sample_interval": 0.1}
  })");
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("vortexlab_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("round-trip decimal formatting") {
  std::mt19937_64 rng(81);
  for (int k = 0; k < 1000; ++k) {
    const double v = oracle::uniform(rng, -1.0, 1.0) * std::pow(10.0, oracle::uniform(rng, -300, 300));
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("csv write and read") {
  std::ostringstream os;
  CsvWriter w(os, {"a", "b"});
  w.row({1.0 / 3.0, -2.5e-300});
  w.row({std::numeric_limits<double>::infinity(), 0.0});
  CHECK_THROWS_AS(w.row({1.0}), InvalidArgument);
  std::istringstream in(os.str());
  const auto t = read_csv(in);
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == 1.0 / 3.0);
  CHECK(t.rows[0][1] == -2.5e-300);
  CHECK(std::isinf(t.rows[1][0]));
  CHECK(t.column("b") == 1);
  CHECK_THROWS_AS(t.column("c"), InvalidArgument);
  std::istringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv(ragged), InvalidArgument);
}

TEST_CASE("trajectory csv reads back to the same states") {
  std::mt19937_64 rng(82);
  const auto s = oracle::random_state(rng, 3, 0.4);
  IntegratorConfig cfg;
  cfg.sample_interval = 0.25;
  const auto traj = integrate(s, 1.0, cfg);
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  std::istringstream in(os.str());
  const auto states = read_trajectory_csv(in, s.strengths);
  REQUIRE(states.size() == traj.samples.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    CHECK(states[k].time == traj.samples[k].time());
    for (std::size_t a = 0; a < 3; ++a) CHECK(states[k].positions[a] == traj.samples[k].state.positions[a]);
  }
  std::istringstream again(os.str());
  const auto table = read_csv(again);
  CHECK(table.header.front() == "t");
  CHECK(table.header.back() == "min_pair_dist");
  CHECK(table.header.size() == 1 + 6 + 5);
}

TEST_CASE("scenario parsing") {
  const auto cfg = parse_scenario(square_doc());
  CHECK(cfg.initial.size() == 4);
  CHECK(std::abs(cfg.initial.positions[2] - Point{1.0, 1.0}) < 1e-15);
  CHECK(cfg.generator.kind == "square");
  CHECK(cfg.integrator.sample_interval == 0.1);

  auto doc = square_doc();
  doc["typo"] = 1;
  CHECK_THROWS_WITH_AS(parse_scenario(doc), "unknown key 'typo' in scenario", InvalidArgument);
  doc = square_doc();
  doc["positions"] = json::array({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  CHECK_THROWS_AS(parse_scenario(doc), InvalidArgument);
  doc = square_doc();
  doc["generator"] = {{"kind", "random"}};
  CHECK_THROWS_WITH_AS(parse_scenario(doc), "random generator needs a 'seed'", InvalidArgument);
  doc = square_doc();
  doc["analysis"] = {{"bound_pair", {1, 1}}};
  CHECK_THROWS_AS(parse_scenario(doc), InvalidArgument);
  doc = square_doc();
  doc["schema"] = "vortexlab.scenario/9";
  CHECK_THROWS_AS(parse_scenario(doc), InvalidArgument);
}

TEST_CASE("random generator hits the M target") {
  const std::vector<double> g{1.0, -0.6, 0.9, 0.4};
  for (double m : {-0.5, 0.0, 0.7}) {
    const auto s = random_state(g, 42, m);
    CHECK(invariants(s).m_pair_sum == doctest::Approx(m).scale(1.0).epsilon(1e-12));
    const auto again = random_state(g, 42, m);
    CHECK(again.positions == s.positions);
  }
  CHECK(random_state(g, 43, 0.0).positions != random_state(g, 42, 0.0).positions);
}

TEST_CASE("run writes the three files deterministically") {
  const auto cfg = parse_scenario(square_doc());
  const auto a = scratch("run_a"), b = scratch("run_b");
  const auto sa = run_scenario(cfg, a);
  run_scenario(cfg, b);
  CHECK(sa.ok);
  CHECK(sa.termination == "time_limit");
  for (const char* f : {"trajectory.csv", "shape.csv", "report.json"}) {
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const auto rep = json::parse(slurp(a / "report.json"));
  CHECK(rep["schema"] == "vortexlab.report/1");
  CHECK(rep["collision_report"]["clusters"].empty());
  CHECK(rep["conditions"]["patterns"].size() == 7);
}

TEST_CASE("sweep isolates failing points") {
  json doc;
  doc["template"] = square_doc();
  doc["parameters"] = {{"/generator/side", {1.0, -1.0, 2.0}}, {"/t_end", {0.5, 1.0}}};
  const auto pts = expand_sweep(doc);
  REQUIRE(pts.size() == 6);
  CHECK(pts[0].values[0].first == "/generator/side");
  CHECK(pts[1].values[1].second == 1.0);

  const auto dir = scratch("sweep");
  const auto res = run_sweep(doc, dir, 3);
  CHECK(res.ok == 4);
  CHECK(res.failed == 2);
  const auto summary = slurp(dir / "summary.csv");
  std::istringstream in(summary);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 7);
  CHECK(lines[3].rfind("2,error", 0) == 0);
  CHECK(lines[1].rfind("0,ok", 0) == 0);

  // Serial and parallel sweeps give the same bytes.
  const auto serial = scratch("sweep_serial");
  run_sweep(doc, serial, 1);
  CHECK(slurp(serial / "summary.csv") == summary);

  doc["schema"] = "vortexlab.sweep/2";
  CHECK_THROWS_AS(expand_sweep(doc), InvalidArgument);
  doc["schema"] = "vortexlab.sweep/1";
  CHECK(expand_sweep(doc).size() == 6);
  doc["parameters"] = json::object();
  CHECK_THROWS_AS(expand_sweep(doc), InvalidArgument);
  doc["parameters"] = {{"/t_end", json::array()}};
  CHECK_THROWS_AS(expand_sweep(doc), InvalidArgument);
}
