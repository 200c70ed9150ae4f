#include "vortexlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vortexlab/ode.hpp"

namespace vortexlab {

void packed_velocity(std::span<const double> strengths, std::span<const double> xy, std::span<double> dxy) {
  const std::size_t n = strengths.size();
  std::fill(dxy.begin(), dxy.end(), 0.0);
  constexpr double k = 1.0 / kTwoPi;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double dx = xy[a] - xy[b];
      const double dy = xy[n + a] - xy[n + b];
      const double inv = k / (dx * dx + dy * dy);
      // i * (dx + i dy) = -dy + i dx
      dxy[a] += strengths[b] * (-dy) * inv;
      dxy[n + a] += strengths[b] * dx * inv;
      dxy[b] -= strengths[a] * (-dy) * inv;
      dxy[n + b] -= strengths[a] * dx * inv;
    }
  }
}

std::vector<Point> velocity_field(const VortexState& state) {
  state.validate();
  const std::size_t n = state.size();
  std::vector<Point> v(n, Point{0.0, 0.0});
  const Point ik{0.0, 1.0 / kTwoPi};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const Point d = state.positions[a] - state.positions[b];
      v[a] += state.strengths[b] * d / std::norm(d);
    }
    v[a] *= ik;
  }
  return v;
}

std::vector<double> pack(const VortexState& state) {
  const std::size_t n = state.size();
  std::vector<double> xy(2 * n);
  for (std::size_t a = 0; a < n; ++a) {
    xy[a] = state.positions[a].real();
    xy[n + a] = state.positions[a].imag();
  }
  return xy;
}

VortexState unpack(std::span<const double> xy, const std::vector<double>& strengths, double time) {
  const std::size_t n = strengths.size();
  VortexState s;
  s.strengths = strengths;
  s.time = time;
  s.positions.resize(n);
  for (std::size_t a = 0; a < n; ++a) s.positions[a] = Point{xy[a], xy[n + a]};
  return s;
}

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidArgument("tolerances must be positive");
  if (!(min_step > 0.0) || !(min_step < max_step)) throw InvalidArgument("require 0 < min_step < max_step");
  if (!(collision_radius > 0.0)) throw InvalidArgument("collision_radius must be positive");
  if (!(blow_up_radius > collision_radius)) throw InvalidArgument("blow_up_radius must exceed collision_radius");
  if (sample_interval < 0.0) throw InvalidArgument("sample_interval must be non-negative");
  if (!(event_time_tol > 0.0)) throw InvalidArgument("event_time_tol must be positive");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::time_limit: return "time_limit";
    case Termination::collision_event: return "collision_event";
    case Termination::step_collapse: return "step_collapse";
    case Termination::blow_up: return "blow_up";
  }
  return "unknown";
}

Termination termination_from_string(std::string_view s) {
  for (auto t : {Termination::time_limit, Termination::collision_event, Termination::step_collapse,
                 Termination::blow_up})
    if (to_string(t) == s) return t;
  throw InvalidArgument("unknown termination '" + std::string(s) + "'");
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(samples.size());
  for (const auto& s : samples) t.push_back(s.time());
  return t;
}

std::vector<double> Trajectory::min_pair_distance_history() const {
  std::vector<double> d;
  d.reserve(samples.size());
  for (const auto& s : samples) d.push_back(s.min_pair_distance);
  return d;
}

double min_pair_distance(const VortexState& state) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& [i, j] : pair_list(state.size())) m = std::min(m, std::abs(state.positions[i] - state.positions[j]));
  return m;
}

double max_pair_distance(const VortexState& state) {
  double m = 0.0;
  for (const auto& [i, j] : pair_list(state.size())) m = std::max(m, std::abs(state.positions[i] - state.positions[j]));
  return m;
}

InvariantScales invariant_scales(const VortexState& state) {
  InvariantScales s{0.0, 0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < state.size(); ++a) {
    const double g = std::abs(state.strengths[a]);
    s.angular_impulse += g * std::norm(state.positions[a]);
    s.moment += g * std::abs(state.positions[a]);
  }
  for (const auto& [i, j] : pair_list(state.size())) {
    const double gg = std::abs(state.strengths[i] * state.strengths[j]);
    const double l = std::abs(state.positions[i] - state.positions[j]);
    s.energy += gg * std::max(1.0, std::abs(std::log(l))) / kTwoPi;
    s.m += gg * l * l;
  }
  return s;
}

VortexState recenter(const VortexState& state) {
  state.validate();
  const double gamma = total_strength(state.strengths);
  if (gamma == 0.0)
    throw DomainError("total strength is zero; the moment Z is translation invariant and cannot be recentered");
  Point z{0.0, 0.0};
  for (std::size_t a = 0; a < state.size(); ++a) z += state.strengths[a] * state.positions[a];
  const Point shift = z / gamma;
  VortexState out = state;
  for (auto& p : out.positions) p -= shift;
  return out;
}

namespace {

struct DriftTracker {
  InvariantSet initial;
  double s_h, s_i, s_z, s_m;
  DriftSummary drift;

  explicit DriftTracker(const VortexState& s0) : initial(invariants(s0)) {
    const auto sc = invariant_scales(s0);
    s_h = std::max(std::abs(initial.energy), sc.energy);
    s_i = std::max(std::abs(initial.angular_impulse), sc.angular_impulse);
    s_z = std::max(std::abs(initial.moment), sc.moment);
    s_m = std::max(std::abs(initial.m_pair_sum), sc.m);
  }

  void update(const InvariantSet& inv) {
    drift.energy = std::max(drift.energy, std::abs(inv.energy - initial.energy) / s_h);
    drift.angular_impulse =
        std::max(drift.angular_impulse, std::abs(inv.angular_impulse - initial.angular_impulse) / s_i);
    drift.moment = std::max(drift.moment, std::abs(std::abs(inv.moment) - std::abs(initial.moment)) / s_z);
    drift.m = std::max(drift.m, std::abs(inv.m_pair_sum - initial.m_pair_sum) / s_m);
  }
};

Sample make_sample(VortexState s) {
  Sample out;
  out.invariants = invariants(s);
  out.min_pair_distance = min_pair_distance(s);
  out.state = std::move(s);
  return out;
}

}  // namespace

Sample sample_of(const VortexState& state) { return make_sample(state); }

Trajectory trajectory_from_states(const std::vector<VortexState>& states) {
  if (states.empty()) throw InvalidArgument("trajectory needs at least one state");
  Trajectory traj;
  traj.strengths = states.front().strengths;
  for (const auto& s : states) {
    if (s.strengths != traj.strengths) throw InvalidArgument("strengths differ between states");
    traj.samples.push_back(make_sample(s));
  }
  return traj;
}

Trajectory integrate(const VortexState& state, double t_end, const IntegratorConfig& cfg,
                     const StepObserver& observer) {
  cfg.validate();
  state.validate();
  if (!(t_end > state.time)) throw InvalidArgument("t_end must exceed the initial time");
  if (min_pair_distance(state) < cfg.collision_radius)
    throw SingularConfiguration("initial state already within the collision radius");

  const std::vector<double> strengths = state.strengths;
  ode::DormandPrince45 stepper(
      [&strengths](double, const ode::Vector& y, ode::Vector& dy) { packed_velocity(strengths, y, dy); },
      ode::StepControl{cfg.rel_tol, cfg.abs_tol, cfg.max_step, cfg.min_step});
  stepper.reset(state.time, pack(state));

  Trajectory traj;
  traj.strengths = strengths;
  DriftTracker tracker(state);
  traj.samples.push_back(make_sample(state));
  const double t0 = state.time;
  std::size_t next_grid = 1;

  auto at = [&](double t) { return unpack(stepper.dense(t), strengths, t); };
  auto emit_grid_until = [&](double t_upto) {
    if (cfg.sample_interval <= 0.0) return;
    for (;;) {
      double tg = t0 + static_cast<double>(next_grid) * cfg.sample_interval;
      if (std::abs(tg - t_end) <= 1e-12 * std::max(1.0, std::abs(t_end))) tg = t_end;
      if (tg > t_upto || tg > t_end) break;
      traj.samples.push_back(make_sample(at(tg)));
      ++next_grid;
    }
  };
  // Locates the first time in [t_previous, t] where pred flips to true.
  auto bisect = [&](auto&& pred) {
    double lo = stepper.t_previous(), hi = stepper.t();
    while (hi - lo > cfg.event_time_tol) {
      const double mid = 0.5 * (lo + hi);
      if (pred(at(mid))) hi = mid;
      else lo = mid;
      if (mid == lo && mid == hi) break;
    }
    return hi;
  };

  for (;;) {
    if (stepper.t() >= t_end) {
      traj.termination = Termination::time_limit;
      break;
    }
    if (stepper.accepted_steps() >= cfg.max_steps ||
        stepper.step(t_end) == ode::DormandPrince45::Outcome::step_collapse) {
      traj.termination = Termination::step_collapse;
      VortexState last = unpack(stepper.y(), strengths, stepper.t());
      if (traj.samples.back().time() < last.time) traj.samples.push_back(make_sample(std::move(last)));
      break;
    }
    VortexState current = unpack(stepper.y(), strengths, stepper.t());
    const double dmin = min_pair_distance(current);
    const double dmax = max_pair_distance(current);
    if (dmin < cfg.collision_radius || dmax > cfg.blow_up_radius) {
      const bool collision = dmin < cfg.collision_radius;
      const double te = collision ? bisect([&](const VortexState& s) { return min_pair_distance(s) < cfg.collision_radius; })
                                  : bisect([&](const VortexState& s) { return max_pair_distance(s) > cfg.blow_up_radius; });
      emit_grid_until(te);
      VortexState ev = at(te);
      tracker.update(invariants(ev));
      if (traj.samples.back().time() < te) traj.samples.push_back(make_sample(std::move(ev)));
      traj.termination = collision ? Termination::collision_event : Termination::blow_up;
      break;
    }
    tracker.update(invariants(current));
    if (observer) observer(current);
    if (cfg.sample_interval > 0.0) {
      emit_grid_until(stepper.t());
      if (stepper.t() >= t_end && traj.samples.back().time() < t_end)
        traj.samples.push_back(make_sample(std::move(current)));
    } else {
      traj.samples.push_back(make_sample(std::move(current)));
    }
  }
  traj.drift = tracker.drift;
  traj.accepted_steps = stepper.accepted_steps();
  traj.rejected_steps = stepper.rejected_steps();
  return traj;
}

}  // namespace vortexlab
