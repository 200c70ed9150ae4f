#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "vortexlab/core.hpp"

namespace vortexlab {

/// dz_a/dt = (i / 2pi) sum_{b != a} Gamma_b (z_a - z_b) / |z_a - z_b|^2.
/// Throws SingularConfiguration on coincident points.
std::vector<Point> velocity_field(const VortexState& state);

/// Same field on the packed layout (x_1..x_N, y_1..y_N) used by the integrator.
/// No validation; coincident points produce non-finite output.
void packed_velocity(std::span<const double> strengths, std::span<const double> xy, std::span<double> dxy);

std::vector<double> pack(const VortexState& state);
VortexState unpack(std::span<const double> xy, const std::vector<double>& strengths, double time);

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 1.0;
  double min_step = 1e-14;
  double collision_radius = 1e-6;
  double blow_up_radius = 1e6;
  /// 0 records every accepted step; otherwise samples on a uniform grid.
  double sample_interval = 0.0;
  /// Width of the bracket left by event bisection.
  double event_time_tol = 1e-10;
  std::size_t max_steps = 200'000'000;

  void validate() const;
};

enum class Termination { time_limit, collision_event, step_collapse, blow_up };

std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view s);

struct Sample {
  VortexState state;
  InvariantSet invariants;
  double min_pair_distance = 0.0;
  double time() const { return state.time; }
};

/// Largest relative excursion of each conserved quantity from its initial
/// value, measured over every accepted step. Each excursion is divided by
/// max(|Q(0)|, s_Q) with s_Q the sum of the absolute values of the terms
/// that make up Q, so quantities that vanish by cancellation stay meaningful.
struct DriftSummary {
  double energy = 0.0;
  double angular_impulse = 0.0;
  double moment = 0.0;
  double m = 0.0;
};

struct Trajectory {
  std::vector<double> strengths;
  std::vector<Sample> samples;
  Termination termination = Termination::time_limit;
  DriftSummary drift;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  std::vector<double> times() const;
  std::vector<double> min_pair_distance_history() const;
};

/// Called after every accepted step with the current state.
using StepObserver = std::function<void(const VortexState&)>;

/// Adaptive Dormand-Prince integration of the vortex equations from
/// `state.time` to `t_end` with collision, blow-up and step-collapse
/// detection. Events are localized by bisection on the dense output.
Trajectory integrate(const VortexState& state, double t_end, const IntegratorConfig& cfg,
                     const StepObserver& observer = {});

/// Sample with invariants evaluated at `state`.
Sample sample_of(const VortexState& state);

/// Wraps externally produced states (e.g. read back from CSV) as a trajectory
/// with time_limit termination and zero drift.
Trajectory trajectory_from_states(const std::vector<VortexState>& states);

/// Translates positions so that Z = sum Gamma_a z_a vanishes. Requires Gamma != 0.
VortexState recenter(const VortexState& state);

double min_pair_distance(const VortexState& state);
double max_pair_distance(const VortexState& state);

/// Magnitude scales used to normalize drift of H, I, |Z| and M.
struct InvariantScales {
  double energy, angular_impulse, moment, m;
};
InvariantScales invariant_scales(const VortexState& state);

}  // namespace vortexlab
