#include "vortexlab/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>

#include "vortexlab/parallelogram.hpp"

namespace vortexlab {

using nlohmann::json;

namespace {

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw InvalidArgument(where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw InvalidArgument("unknown key '" + k + "' in " + where);
}

double get_number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) throw InvalidArgument(std::string("key '") + key + "' must be a number");
  return obj.at(key).get<double>();
}

double require_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw InvalidArgument("missing key '" + std::string(key) + "' in " + where);
  return get_number(obj, key, 0.0);
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw InvalidArgument(std::string("key '") + key + "' must be true or false");
  return obj.at(key).get<bool>();
}

std::pair<std::size_t, std::size_t> get_pair(const json& obj, const char* key, std::pair<std::size_t, std::size_t> fallback,
                                              std::size_t n) {
  if (!obj.contains(key)) return fallback;
  const auto& a = obj.at(key);
  if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() || !a[1].is_number_integer())
    throw InvalidArgument(std::string("key '") + key + "' must be a pair of one-based indices");
  const auto i = a[0].get<long long>(), j = a[1].get<long long>();
  if (i < 1 || j < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(j) > n || i == j)
    throw InvalidArgument(std::string("key '") + key + "' must name two distinct vortices");
  return {static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)};
}

std::vector<double> get_strengths(const json& doc) {
  if (!doc.contains("strengths")) throw InvalidArgument("missing key 'strengths'");
  const auto& a = doc.at("strengths");
  if (!a.is_array()) throw InvalidArgument("'strengths' must be an array");
  std::vector<double> g;
  for (const auto& v : a) {
    if (!v.is_number()) throw InvalidArgument("'strengths' entries must be numbers");
    g.push_back(v.get<double>());
  }
  return g;
}

// Uniform double in [0, 1) from the top 53 bits; unlike the standard
// distributions this is identical on every platform.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

IntegratorConfig parse_integrator(const json& obj) {
  allow_keys(obj, "integrator",
             {"rel_tol", "abs_tol", "max_step", "min_step", "collision_radius", "blow_up_radius", "sample_interval",
              "event_time_tol", "max_steps"});
  IntegratorConfig c;
  c.rel_tol = get_number(obj, "rel_tol", c.rel_tol);
  c.abs_tol = get_number(obj, "abs_tol", c.abs_tol);
  c.max_step = get_number(obj, "max_step", c.max_step);
  c.min_step = get_number(obj, "min_step", c.min_step);
  c.collision_radius = get_number(obj, "collision_radius", c.collision_radius);
  c.blow_up_radius = get_number(obj, "blow_up_radius", c.blow_up_radius);
  c.sample_interval = get_number(obj, "sample_interval", c.sample_interval);
  c.event_time_tol = get_number(obj, "event_time_tol", c.event_time_tol);
  if (obj.contains("max_steps")) {
    if (!obj.at("max_steps").is_number_unsigned()) throw InvalidArgument("'max_steps' must be a positive integer");
    c.max_steps = obj.at("max_steps").get<std::size_t>();
  }
  c.validate();
  return c;
}

AnalysisToggles parse_analysis(const json& obj, std::size_t n) {
  allow_keys(obj, "analysis",
             {"classify", "eps", "conditions", "m_tol", "beta12_bound", "bound_pair", "parallelogram", "reduction",
              "reduction_pair", "reduction_window", "reduction_samples", "envelope_fraction"});
  AnalysisToggles a;
  a.classify = get_bool(obj, "classify", a.classify);
  a.eps = get_number(obj, "eps", a.eps);
  if (!(a.eps > 0.0)) throw InvalidArgument("'eps' must be positive");
  a.conditions = get_bool(obj, "conditions", a.conditions);
  a.m_tol = get_number(obj, "m_tol", a.m_tol);
  a.beta12_bound = get_bool(obj, "beta12_bound", a.beta12_bound);
  a.bound_pair = get_pair(obj, "bound_pair", a.bound_pair, n);
  a.parallelogram = get_bool(obj, "parallelogram", a.parallelogram);
  a.reduction = get_bool(obj, "reduction", a.reduction);
  a.reduction_pair = get_pair(obj, "reduction_pair", a.reduction_pair, n);
  a.reduction_window = get_number(obj, "reduction_window", a.reduction_window);
  if (!(a.reduction_window > 0.0)) throw InvalidArgument("'reduction_window' must be positive");
  if (obj.contains("reduction_samples")) {
    if (!obj.at("reduction_samples").is_number_unsigned() || obj.at("reduction_samples").get<std::size_t>() < 2)
      throw InvalidArgument("'reduction_samples' must be an integer >= 2");
    a.reduction_samples = obj.at("reduction_samples").get<std::size_t>();
  }
  a.envelope_fraction = get_number(obj, "envelope_fraction", a.envelope_fraction);
  if (!(a.envelope_fraction > 0.0)) throw InvalidArgument("'envelope_fraction' must be positive");
  return a;
}

VortexState generate(const GeneratorInfo& gen, const json& doc) {
  const auto& p = gen.params;
  if (gen.kind == "square") {
    allow_keys(p, "generator", {"kind", "side"});
    const double side = get_number(p, "side", 1.0);
    if (!(side > 0.0)) throw InvalidArgument("square 'side' must be positive");
    const auto g = get_strengths(doc);
    if (g.size() != 4) throw InvalidArgument("square generator needs four strengths");
    return square_state(g, side);
  }
  if (gen.kind == "parallelogram") {
    allow_keys(p, "generator", {"kind", "gamma1", "gamma2", "aspect", "angle"});
    if (doc.contains("strengths")) throw InvalidArgument("parallelogram generator sets the strengths itself");
    const double aspect = get_number(p, "aspect", 1.0);
    if (!(aspect > 0.0)) throw InvalidArgument("parallelogram 'aspect' must be positive");
    const double angle = get_number(p, "angle", kPi / 2);
    if (!(std::sin(angle) != 0.0)) throw InvalidArgument("parallelogram 'angle' must not be a multiple of pi");
    return parallelogram_state(require_number(p, "gamma1", "generator"), require_number(p, "gamma2", "generator"),
                               aspect, angle);
  }
  if (gen.kind == "random") {
    allow_keys(p, "generator", {"kind", "seed", "m_target", "radius"});
    if (!p.contains("seed")) throw InvalidArgument("random generator needs a 'seed'");
    if (!p.at("seed").is_number_unsigned()) throw InvalidArgument("'seed' must be a non-negative integer");
    const double radius = get_number(p, "radius", 1.0);
    if (!(radius > 0.0)) throw InvalidArgument("random 'radius' must be positive");
    return random_state(get_strengths(doc), p.at("seed").get<std::uint64_t>(), get_number(p, "m_target", 0.0), radius);
  }
  if (gen.kind == "reduced") {
    allow_keys(p, "generator", {"kind", "eps", "i0", "i1", "i2", "phi", "phi0", "phi1", "phi2"});
    const auto g = get_strengths(doc);
    if (g.size() != 4) throw InvalidArgument("reduced generator needs four strengths");
    ReducedChartPoint rp;
    const double eps = require_number(p, "eps", "generator");
    if (!(eps > 0.0)) throw InvalidArgument("'eps' must be positive");
    rp.i = eps * eps / 2.0;
    rp.i0 = get_number(p, "i0", 0.0);
    rp.i1 = require_number(p, "i1", "generator");
    rp.i2 = require_number(p, "i2", "generator");
    rp.phi = get_number(p, "phi", 0.0);
    rp.phi0 = get_number(p, "phi0", 0.0);
    rp.phi1 = require_number(p, "phi1", "generator");
    rp.phi2 = get_number(p, "phi2", 0.0);
    return reduced_to_chart(rp, {g[0], g[1], g[2], g[3]});
  }
  throw InvalidArgument("unknown generator kind '" + gen.kind + "'");
}

}  // namespace

VortexState square_state(const std::vector<double>& strengths, double side) {
  if (strengths.size() != 4) throw InvalidArgument("square needs four strengths");
  const double h = side / 2.0;
  VortexState s;
  s.strengths = strengths;
  s.positions = {{-h, -h}, {h, -h}, {h, h}, {-h, h}};
  s.validate();
  return s;
}

VortexState random_state(const std::vector<double>& strengths, std::uint64_t seed, double m_target, double radius) {
  const std::size_t n = strengths.size();
  if (n < 2) throw InvalidArgument("random state needs at least two strengths");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    VortexState s;
    s.strengths = strengths;
    for (std::size_t a = 0; a < n; ++a) {
      const double r = radius * std::sqrt(unit_uniform(rng));
      const double th = kTwoPi * unit_uniform(rng);
      s.positions.push_back(std::polar(r, th));
    }
    const std::size_t k = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n));
    const Point u = std::polar(1.0, kTwoPi * unit_uniform(rng));
    // M is quadratic in the displacement of one vortex along u.
    auto m_at = [&](double t) {
      VortexState moved = s;
      moved.positions[k] += t * radius * u;
      double m = 0.0;
      for (const auto& [i, j] : pair_list(n))
        m += strengths[i] * strengths[j] * std::norm(moved.positions[i] - moved.positions[j]);
      return m;
    };
    const double c = m_at(0.0), mp = m_at(1.0), mm = m_at(-1.0);
    const double qa = 0.5 * (mp + mm) - c, qb = 0.5 * (mp - mm), qc = c - m_target;
    double t = std::numeric_limits<double>::quiet_NaN();
    if (qa == 0.0) {
      if (qb != 0.0) t = -qc / qb;
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (qb + std::copysign(sq, qb));
        const double r1 = q / qa, r2 = q != 0.0 ? qc / q : r1;
        t = std::abs(r1) < std::abs(r2) ? r1 : r2;
      }
    }
    if (!std::isfinite(t) || std::abs(t) > 10.0) continue;
    s.positions[k] += t * radius * u;
    try {
      s.validate();
    } catch (const SingularConfiguration&) {
      continue;
    }
    if (min_pair_distance(s) < 1e-3 * radius) continue;
    return s;
  }
  throw InvalidArgument("random generator could not reach the M target");
}

ScenarioConfig parse_scenario(const json& doc) {
  allow_keys(doc, "scenario",
             {"schema", "strengths", "positions", "generator", "recenter", "t_end", "integrator", "analysis",
              "output_dir"});
  if (doc.contains("schema") && doc.at("schema") != kScenarioSchema)
    throw InvalidArgument("unsupported scenario schema; expected " + std::string(kScenarioSchema));
  ScenarioConfig cfg;
  const bool has_positions = doc.contains("positions");
  const bool has_generator = doc.contains("generator");
  if (has_positions == has_generator) throw InvalidArgument("give exactly one of 'positions' and 'generator'");
  if (has_positions) {
    cfg.initial.strengths = get_strengths(doc);
    const auto& ps = doc.at("positions");
    if (!ps.is_array()) throw InvalidArgument("'positions' must be an array of [x, y] pairs");
    for (const auto& p : ps) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw InvalidArgument("'positions' entries must be [x, y] pairs");
      cfg.initial.positions.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  } else {
    const auto& g = doc.at("generator");
    if (!g.is_object() || !g.contains("kind") || !g.at("kind").is_string())
      throw InvalidArgument("'generator' needs a string 'kind'");
    cfg.generator.kind = g.at("kind").get<std::string>();
    cfg.generator.params = g;
    cfg.initial = generate(cfg.generator, doc);
  }
  cfg.initial.validate();
  cfg.recenter = get_bool(doc, "recenter", false);
  if (cfg.recenter) cfg.initial = recenter(cfg.initial);
  cfg.t_end = get_number(doc, "t_end", cfg.t_end);
  if (!(cfg.t_end > 0.0)) throw InvalidArgument("'t_end' must be positive");
  cfg.integrator = parse_integrator(doc.value("integrator", json::object()));
  cfg.analysis = parse_analysis(doc.value("analysis", json::object()), cfg.initial.size());
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) throw InvalidArgument("'output_dir' must be a string");
    cfg.output_dir = doc.at("output_dir").get<std::string>();
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("scenario file is not valid JSON: " + std::string(e.what()));
  }
  ScenarioConfig cfg = parse_scenario(doc);
  if (const char* dir = std::getenv("VORTEXLAB_OUTPUT_DIR"); dir && *dir) cfg.output_dir = dir;
  return cfg;
}

}  // namespace vortexlab
