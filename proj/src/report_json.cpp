#include "vortexlab/report_json.hpp"

#include <cmath>

namespace vortexlab {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

namespace {

json point(Point z) { return json::array({number(z.real()), number(z.imag())}); }

json one_based(const std::vector<std::size_t>& v) {
  json a = json::array();
  for (auto i : v) a.push_back(i + 1);
  return a;
}

}  // namespace

json to_json(const InvariantSet& inv) {
  return {{"H", number(inv.energy)},
          {"Z", point(inv.moment)},
          {"I", number(inv.angular_impulse)},
          {"M_pair_sum", number(inv.m_pair_sum)},
          {"M_from_moment", number(inv.m_from_moment)},
          {"V", number(inv.virial)},
          {"V_kinematic", number(inv.kinematic_virial)},
          {"Gamma", number(inv.total_strength)}};
}

json to_json(const DriftSummary& d) {
  return {{"H", number(d.energy)}, {"I", number(d.angular_impulse)}, {"Z", number(d.moment)}, {"M", number(d.m)}};
}

json to_json(const CollisionReport& r) {
  json clusters = json::array();
  for (const auto& c : r.clusters) {
    clusters.push_back({{"members", one_based(c.members)},
                        {"kind", std::string(to_string(c.kind))},
                        {"proper", c.proper},
                        {"t_star", number(c.t_star)},
                        {"log_slope", number(c.evidence.log_slope)},
                        {"final_value", c.evidence.values.empty() ? json(nullptr) : number(c.evidence.values.back())},
                        {"evidence_points", c.evidence.values.size()}});
  }
  return {{"n", r.n},
          {"eps", number(r.eps)},
          {"clusters", clusters},
          {"limit_separation", r.limit_separation ? number(*r.limit_separation) : json(nullptr)}};
}

json to_json(const CollapseCondition& c) {
  json groups = json::array();
  for (const auto& g : c.groups) groups.push_back(one_based(g));
  return {{"pattern", c.kind == PatternKind::ternary ? "ternary" : "double_binary"},
          {"groups", groups},
          {"strength_product", number(c.strength_product)},
          {"table_admissible", c.table_admissible},
          {"admissible", c.admissible},
          {"d", c.required_d ? number(*c.required_d) : json(nullptr)},
          {"d_arbitrary", c.d_arbitrary},
          {"reason", c.reason}};
}

json to_json(const std::vector<CollapseCondition>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(to_json(c));
  return a;
}

json to_json(const BoundReport& b) {
  json out{{"applicable", b.applicable}, {"reason", b.reason}, {"virial", number(b.virial)}};
  if (b.applicable) {
    out["r_min"] = number(b.r_min);
    out["r_max"] = number(b.r_max);
    out["ratio"] = number(b.ratio);
    out["rho_trend"] = b.rho_trend;
    out["expected_rho_trend"] = b.expected_rho_trend;
    out["corollary_consistent"] = b.corollary_consistent;
    out["window_points"] = b.values.size();
  }
  return out;
}

json to_json(const PreservationReport& p) {
  return {{"max_abs", {{"b12_b34", number(p.max_abs[0])}, {"b13_b24", number(p.max_abs[1])}, {"b14_b23", number(p.max_abs[2])}}},
          {"max_rel", {{"b12_b34", number(p.max_rel[0])}, {"b13_b24", number(p.max_rel[1])}, {"b14_b23", number(p.max_rel[2])}}},
          {"law_quoted_rel", number(p.law_quoted_rel)},
          {"law_cyclic_rel", number(p.law_cyclic_rel)}};
}

json to_json(const ParallelogramParams& p) {
  return {{"gamma1", number(p.gamma1)}, {"gamma2", number(p.gamma2)}, {"h", number(p.h)},
          {"beta", number(p.beta)},     {"delta", number(p.delta)},   {"alpha", number(p.alpha)},
          {"A", number(p.A)},           {"gamma", number(p.gamma)}};
}

json to_json(const ReducedChartPoint& rp) {
  return {{"i", number(rp.i)},       {"i0", number(rp.i0)},     {"i1", number(rp.i1)},
          {"i2", number(rp.i2)},     {"phi", number(rp.phi)},   {"phi0", number(rp.phi0)},
          {"phi1", number(rp.phi1)}, {"phi2", number(rp.phi2)}, {"epsilon", number(rp.epsilon())}};
}

json to_json(const TransformChain& c) {
  json out{{"T1_residual", number(c.t1.residual)},
           {"T2_residual", number(c.t2.residual)},
           {"A_max", number(c.a_block.cwiseAbs().maxCoeff())},
           {"matrix_canonical", c.matrix_canonical},
           {"condition_holds", c.condition_holds}};
  out["T4_residual"] = c.t4 ? number(c.t4->residual) : json(nullptr);
  return out;
}

json to_json(const ComparisonReport& c) {
  return {{"rows", c.rows.size()},
          {"i1_range", number(c.i1_range)},
          {"max_deviation", number(c.max_deviation)},
          {"max_phi1_gap", number(c.max_phi1_gap)},
          {"envelope", number(c.envelope)},
          {"within_envelope", c.within_envelope},
          {"full_termination", std::string(to_string(c.full_termination))},
          {"reduced_termination", std::string(to_string(c.reduced_termination))}};
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"schema", kErrorSchema}, {"kind", kind}, {"message", message}};
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const SingularConfiguration*>(&e)) return "singular_configuration";
  if (dynamic_cast<const DomainError*>(&e)) return "domain_error";
  if (dynamic_cast<const InvalidArgument*>(&e)) return "invalid_argument";
  if (dynamic_cast<const json::exception*>(&e)) return "config_error";
  return "runtime_error";
}

}  // namespace vortexlab
