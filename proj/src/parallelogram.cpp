#include "vortexlab/parallelogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vortexlab/csv.hpp"
#include "vortexlab/sqdist.hpp"

namespace vortexlab {

double parallelogram_f1(double x) { return std::pow(x, 1.0 / (1.0 + x * x)); }

double parallelogram_f2(double x, double h) { return 2.0 * parallelogram_f1(x) / (h * (1.0 + x)); }

ParallelogramParams ParallelogramParams::make(double gamma1, double gamma2, double h) {
  if (gamma1 == 0.0 || gamma2 == 0.0 || !std::isfinite(gamma1) || !std::isfinite(gamma2))
    throw InvalidArgument("parallelogram strengths must be finite and nonzero");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("energy constant h must be positive");
  ParallelogramParams p;
  p.gamma1 = gamma1;
  p.gamma2 = gamma2;
  p.h = h;
  p.beta = std::abs(gamma2 / gamma1);
  p.delta = 2.0 * std::abs(gamma1 * gamma2) / (gamma1 * gamma1 + gamma2 * gamma2);
  const double denom = 1.0 - 2.0 * p.delta;
  p.alpha = std::abs(denom) > 1e-12 ? 1.0 / denom : std::numeric_limits<double>::quiet_NaN();
  p.A = h / parallelogram_f1(p.beta);
  p.gamma = 1.0 / parallelogram_f2(p.beta, h);
  return p;
}

std::array<double, 2> constraint_residuals(double x, double y, double z, const ParallelogramParams& prm) {
  const double lhs_a = parallelogram_f1(prm.beta) * z;
  const double rhs_a = prm.h * std::pow(x * y, prm.delta);
  const double lhs_b = (1.0 + prm.beta) * z;
  const double rhs_b = 2.0 * (x + y);
  return {std::abs(lhs_a - rhs_a) / std::max(std::abs(lhs_a), std::abs(rhs_a)),
          std::abs(lhs_b - rhs_b) / std::max(std::abs(lhs_b), std::abs(rhs_b))};
}

namespace {

void check_curve_domain(double param, const ParallelogramParams& prm) {
  if (!(param > 0.0)) throw DomainError("curve parameter must be positive");
  if (!(prm.delta > 0.0 && prm.delta < 1.0)) throw DomainError("collapse curve needs 0 < delta < 1");
  if (!std::isfinite(prm.alpha)) throw DomainError("collapse curve undefined at delta = 1/2");
}

CurvePoint finish(double p, double x, double y, const ParallelogramParams& prm) {
  CurvePoint c;
  c.p = p;
  c.x = x;
  c.y = y;
  c.z = 2.0 * (x + y) / (1.0 + prm.beta);
  const auto r = constraint_residuals(c.x, c.y, c.z, prm);
  c.residual_a = r[0];
  c.residual_b = r[1];
  return c;
}

}  // namespace

CurvePoint collapse_curve(double p, const ParallelogramParams& prm) {
  check_curve_domain(p, prm);
  // Evaluated in logs so that large |alpha| does not overflow intermediate powers.
  const double lg = std::log(prm.gamma) - std::log1p(p);
  const double x = std::exp(prm.alpha * (lg + prm.delta * std::log(p)));
  const double y = std::exp(prm.alpha * (lg + (1.0 - prm.delta) * std::log(p)));
  return finish(p, x, y, prm);
}

CurvePoint collapse_curve_q(double q, const ParallelogramParams& prm) {
  check_curve_domain(q, prm);
  const double lg = std::log(prm.gamma) - std::log1p(q);
  const double y = std::exp(prm.alpha * (lg + prm.delta * std::log(q)));
  const double x = std::exp(prm.alpha * (lg + (1.0 - prm.delta) * std::log(q)));
  return finish(q, x, y, prm);
}

std::array<double, 3> limit_direction_of_curve(const ParallelogramParams& prm) {
  if (!(prm.delta > 0.0 && prm.delta < 1.0)) throw DomainError("limit direction needs 0 < delta < 1");
  if (!(prm.delta < 0.5)) throw DomainError("no branch of the curve reaches the origin for delta >= 1/2");
  const double c = 2.0 / (1.0 + prm.beta);
  const double n = std::hypot(1.0, c);
  return {1.0 / n, 0.0, c / n};
}

std::vector<CurvePoint> sample_collapse_branch(const ParallelogramParams& prm, CurveBranch which, std::size_t count,
                                               double param_min, double param_max) {
  if (count < 2) throw InvalidArgument("need at least two samples");
  if (!(param_min > 0.0 && param_min < param_max)) throw InvalidArgument("need 0 < param_min < param_max");
  std::vector<CurvePoint> out;
  out.reserve(count);
  const double lmax = std::log(param_max), lmin = std::log(param_min);
  for (std::size_t k = 0; k < count; ++k) {
    const double s = std::exp(lmax + (lmin - lmax) * static_cast<double>(k) / static_cast<double>(count - 1));
    out.push_back(which == CurveBranch::p ? collapse_curve(s, prm) : collapse_curve_q(s, prm));
  }
  for (std::size_t k = 1; k < out.size(); ++k) {
    const double prev = out[k - 1].x + out[k - 1].y + out[k - 1].z;
    const double cur = out[k].x + out[k].y + out[k].z;
    if (!(cur < prev)) throw DomainError("selected branch does not decrease towards the origin");
  }
  return out;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
  CsvWriter w(out, {"p", "x", "y", "z", "residual_a", "residual_b"});
  for (const auto& c : points) w.row({c.p, c.x, c.y, c.z, c.residual_a, c.residual_b});
}

std::array<double, 2> delta_identity(double gamma1, double gamma2) {
  const double s = gamma1 * gamma1 + gamma2 * gamma2;
  const double delta = 2.0 * std::abs(gamma1 * gamma2) / s;
  const double a = std::abs(gamma1) + std::abs(gamma2);
  return {1.0 + delta, a * a / s};
}

PreservationReport check_preservation(const Trajectory& traj) {
  if (traj.samples.empty()) throw InvalidArgument("empty trajectory");
  const auto& g = traj.strengths;
  if (g.size() != 4) throw InvalidArgument("parallelogram check needs four vortices");
  if (g[0] != g[2] || g[1] != g[3]) throw InvalidArgument("parallelogram check needs Gamma_1 = Gamma_3 and Gamma_2 = Gamma_4");
  // Pair order: 12, 13, 14, 23, 24, 34.
  const auto b0 = squared_distances(traj.samples.front().state);
  const double rho0 = b0[0] + b0[1] + b0[2] + b0[3] + b0[4] + b0[5];
  if (std::abs(b0[0] - b0[5]) > 1e-9 * rho0) throw InvalidArgument("initial data violate b12 = b34");
  if (std::abs(b0[2] - b0[3]) > 1e-9 * rho0) throw InvalidArgument("initial data violate b14 = b23");

  PreservationReport r;
  for (const auto& s : traj.samples) {
    const auto b = squared_distances(s.state);
    const double rho = b[0] + b[1] + b[2] + b[3] + b[4] + b[5];
    const std::array<double, 3> d{std::abs(b[0] - b[5]), std::abs(b[1] - b[4]), std::abs(b[2] - b[3])};
    for (std::size_t k = 0; k < 3; ++k) {
      r.max_abs[k] = std::max(r.max_abs[k], d[k]);
      r.max_rel[k] = std::max(r.max_rel[k], d[k] / rho);
    }
    r.law_quoted_rel = std::max(r.law_quoted_rel, std::abs(b[0] + b[5] - 2.0 * (b[1] + b[2])) / rho);
    r.law_cyclic_rel = std::max(r.law_cyclic_rel, std::abs(b[1] + b[4] - 2.0 * (b[0] + b[2])) / rho);
  }
  return r;
}

VortexState parallelogram_state(double gamma1, double gamma2, double aspect, double angle) {
  if (!(aspect > 0.0)) throw InvalidArgument("aspect must be positive");
  const Point u{aspect / 2.0, 0.0};
  const Point v = std::polar(0.5, angle);
  VortexState s;
  s.positions = {-u - v, u - v, u + v, -u + v};
  s.strengths = {gamma1, gamma2, gamma1, gamma2};
  s.validate();
  return s;
}

}  // namespace vortexlab
