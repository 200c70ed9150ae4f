#include "vortexlab/reduced_flow.hpp"

#include <algorithm>
#include <cmath>

#include "vortexlab/ode.hpp"

namespace vortexlab {

namespace {

using cd = std::complex<double>;
constexpr double kStep = 1e-30;

}  // namespace

ReducedHamiltonian::ReducedHamiltonian(const std::array<double, 4>& strengths, double eps, double i2,
                                       bool include_h2bar)
    : strengths_(strengths), eps_(eps), i2_(i2), include_h2bar_(include_h2bar) {
  if (!reduction_condition_holds(strengths))
    throw InvalidArgument("strengths violate Gamma_1 + Gamma_2 = Gamma_3 = Gamma_4");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  if (!(i2 < 0.0)) throw InvalidArgument("i2 must be negative");
}

bool ReducedHamiltonian::in_domain(double i1, double phi1) const {
  if (!(-i1 - i2_ > 0.0 && i1 - i2_ > 0.0)) return false;
  ReducedChartPoint rp;
  rp.i = eps_ * eps_ / 2.0;
  rp.i1 = i1;
  rp.i2 = i2_;
  rp.phi1 = phi1;
  try {
    (void)h0(rp, strengths_);
  } catch (const DomainError&) {
    return false;
  }
  return true;
}

double ReducedHamiltonian::value(double i1, double phi1) const {
  double v = h0_complex(i1, phi1, eps_, i2_, strengths_).real();
  if (include_h2bar_) v += eps_ * eps_ * h2bar_complex(i1, phi1, i2_, strengths_).real();
  return v;
}

std::array<double, 2> ReducedHamiltonian::gradient(double i1, double phi1) const {
  auto f = [&](cd a, cd b) {
    cd v = h0_complex(a, b, eps_, i2_, strengths_);
    if (include_h2bar_) v += eps_ * eps_ * h2bar_complex(a, b, i2_, strengths_);
    return v;
  };
  return {f(cd(i1, kStep), phi1).imag() / kStep, f(i1, cd(phi1, kStep)).imag() / kStep};
}

std::array<double, 2> ReducedHamiltonian::gradient_central(double i1, double phi1) const {
  const double hi = 1e-6 * std::abs(i2_);
  const double hp = 1e-6;
  return {(value(i1 + hi, phi1) - value(i1 - hi, phi1)) / (2.0 * hi),
          (value(i1, phi1 + hp) - value(i1, phi1 - hp)) / (2.0 * hp)};
}

std::array<double, 2> ReducedHamiltonian::vector_field(double i1, double phi1) const {
  const auto g = gradient(i1, phi1);
  const double w = weight();
  return {g[1] / w, -g[0] / w};
}

std::string_view to_string(ReducedTermination t) {
  switch (t) {
    case ReducedTermination::time_limit: return "time_limit";
    case ReducedTermination::domain_exit: return "domain_exit";
    case ReducedTermination::step_collapse: return "step_collapse";
  }
  return "unknown";
}

ReducedTrajectory integrate_reduced(const ReducedChartPoint& rp0, const std::array<double, 4>& strengths, double t_end,
                                    const ReducedFlowConfig& cfg) {
  if (!(t_end > 0.0)) throw InvalidArgument("t_end must be positive");
  const ReducedHamiltonian ham(strengths, rp0.epsilon(), rp0.i2, cfg.include_h2bar);
  if (!ham.in_domain(rp0.i1, rp0.phi1)) throw DomainError("initial point outside the reduced domain");

  ReducedTrajectory out;
  out.eps = ham.eps();
  out.i2 = ham.i2();
  {
    const auto a = ham.gradient(rp0.i1, rp0.phi1);
    const auto b = ham.gradient_central(rp0.i1, rp0.phi1);
    const double scale = std::max({std::abs(a[0]), std::abs(a[1]), 1e-300});
    out.derivative_crosscheck = std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1])) / scale;
  }

  ode::DormandPrince45 stepper(
      [&ham](double, const ode::Vector& y, ode::Vector& dy) {
        const auto v = ham.vector_field(y[0], y[1]);
        dy[0] = v[0];
        dy[1] = v[1];
      },
      ode::StepControl{cfg.rel_tol, cfg.abs_tol, cfg.max_step, 1e-14});
  stepper.reset(0.0, {rp0.i1, rp0.phi1});

  const double h_initial = ham.value(rp0.i1, rp0.phi1);
  auto record = [&](double t, double i1, double phi1) {
    out.t.push_back(t);
    out.i1.push_back(i1);
    out.phi1.push_back(phi1);
    out.hbar.push_back(ham.value(i1, phi1));
  };
  record(0.0, rp0.i1, rp0.phi1);
  std::size_t next_grid = 1;
  auto emit_grid_until = [&](double t_upto) {
    for (;;) {
      double tg = static_cast<double>(next_grid) * cfg.sample_interval;
      if (std::abs(tg - t_end) <= 1e-12 * std::max(1.0, t_end)) tg = t_end;
      if (tg > t_upto || tg > t_end) break;
      const auto y = stepper.dense(tg);
      record(tg, y[0], y[1]);
      ++next_grid;
    }
  };

  while (stepper.t() < t_end) {
    if (stepper.step(t_end) == ode::DormandPrince45::Outcome::step_collapse) {
      out.termination = ReducedTermination::step_collapse;
      break;
    }
    const auto& y = stepper.y();
    if (!ham.in_domain(y[0], y[1])) {
      double lo = stepper.t_previous(), hi = stepper.t();
      for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        const auto ym = stepper.dense(mid);
        if (ham.in_domain(ym[0], ym[1])) lo = mid;
        else hi = mid;
      }
      if (cfg.sample_interval > 0.0) emit_grid_until(lo);
      const auto yb = stepper.dense(lo);
      record(lo, yb[0], yb[1]);
      out.termination = ReducedTermination::domain_exit;
      out.boundary = "left the domain near t = " + std::to_string(lo) + ", i1 = " + std::to_string(yb[0]) +
                     ", phi1 = " + std::to_string(yb[1]);
      break;
    }
    out.hbar_drift = std::max(out.hbar_drift, std::abs(ham.value(y[0], y[1]) - h_initial) / std::abs(h_initial));
    if (cfg.sample_interval > 0.0) emit_grid_until(stepper.t());
    else record(stepper.t(), y[0], y[1]);
  }
  return out;
}

FixedPoint find_fixed_point(const ReducedHamiltonian& h, double i1, double phi1, int max_iter) {
  FixedPoint fp{i1, phi1, 0.0, false};
  const double di = 1e-6 * std::abs(h.i2());
  const double dp = 1e-6;
  const auto g0 = h.gradient(i1, phi1);
  const double tol = std::max(1e-12, 1e-10 * std::hypot(g0[0], g0[1]));
  for (int it = 0; it < max_iter; ++it) {
    const auto g = h.gradient(fp.i1, fp.phi1);
    fp.gradient_norm = std::hypot(g[0], g[1]);
    if (fp.gradient_norm <= tol) break;
    const auto gi_p = h.gradient(fp.i1 + di, fp.phi1), gi_m = h.gradient(fp.i1 - di, fp.phi1);
    const auto gp_p = h.gradient(fp.i1, fp.phi1 + dp), gp_m = h.gradient(fp.i1, fp.phi1 - dp);
    Eigen::Matrix2d hess;
    hess << (gi_p[0] - gi_m[0]) / (2 * di), (gp_p[0] - gp_m[0]) / (2 * dp), (gi_p[1] - gi_m[1]) / (2 * di),
        (gp_p[1] - gp_m[1]) / (2 * dp);
    const Eigen::Vector2d step = hess.fullPivLu().solve(Eigen::Vector2d(-g[0], -g[1]));
    if (!step.allFinite()) break;
    double scale = 1.0;
    while (scale > 1e-6 && !h.in_domain(fp.i1 + scale * step(0), fp.phi1 + scale * step(1))) scale *= 0.5;
    // Newton is heading out of the domain; give up rather than stall at the boundary.
    if (scale <= 1e-6) break;
    fp.i1 += scale * step(0);
    fp.phi1 += scale * step(1);
  }
  const auto g = h.gradient(fp.i1, fp.phi1);
  fp.gradient_norm = std::hypot(g[0], g[1]);
  fp.converged = fp.gradient_norm <= tol;
  return fp;
}

ComparisonReport compare_with_full(const ReducedChartPoint& rp0, const std::array<double, 4>& strengths,
                                   const ComparisonOptions& opt) {
  if (!(opt.window > 0.0) || opt.samples < 2) throw InvalidArgument("comparison needs a positive window and samples");
  const double dt = opt.window / static_cast<double>(opt.samples);
  IntegratorConfig full_cfg = opt.full;
  full_cfg.sample_interval = dt;
  ReducedFlowConfig red_cfg = opt.reduced;
  red_cfg.sample_interval = dt;

  const VortexState s0 = reduced_to_chart(rp0, strengths);
  const Trajectory full = integrate(s0, opt.window, full_cfg);
  const ReducedTrajectory red = integrate_reduced(rp0, strengths, opt.window, red_cfg);

  ComparisonReport rep;
  rep.full_termination = full.termination;
  rep.reduced_termination = red.termination;
  const auto [lo, hi] = std::minmax_element(red.i1.begin(), red.i1.end());
  rep.i1_range = *hi - *lo;
  rep.envelope = opt.envelope_fraction * rep.i1_range;

  const std::size_t n = std::min(full.samples.size(), red.t.size());
  ReducedChartPoint prev = rp0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& fs = full.samples[k];
    if (std::abs(fs.time() - red.t[k]) > 1e-9 * opt.window) throw Error("sample grids of the two runs differ");
    const ReducedChartPoint cur = unwrap_angles(prev, chart_to_reduced(fs.state));
    prev = cur;
    ComparisonRow row{red.t[k], red.i1[k], red.phi1[k], red.hbar[k], cur.i1, cur.phi1, std::abs(cur.i1 - red.i1[k])};
    double gap = cur.phi1 - red.phi1[k];
    gap -= kPi * std::round(gap / kPi);
    rep.max_phi1_gap = std::max(rep.max_phi1_gap, std::abs(gap));
    rep.max_deviation = std::max(rep.max_deviation, row.deviation);
    rep.rows.push_back(row);
  }
  rep.within_envelope = rep.rows.size() == opt.samples + 1 && rep.max_deviation <= rep.envelope;
  return rep;
}

}  // namespace vortexlab
