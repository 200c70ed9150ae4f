#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "vortexlab/dynamics.hpp"
#include "vortexlab/reduction.hpp"

namespace vortexlab {

/// Averaged Hamiltonian H0 + eps^2 h2bar on the (i1, phi1) plane with eps and
/// i2 frozen. Derivatives use complex steps on the closed forms.
class ReducedHamiltonian {
 public:
  /// Throws InvalidArgument unless the strengths satisfy the vorticity condition.
  ReducedHamiltonian(const std::array<double, 4>& strengths, double eps, double i2, bool include_h2bar = true);

  double value(double i1, double phi1) const;
  /// (dH/di1, dH/dphi1).
  std::array<double, 2> gradient(double i1, double phi1) const;
  /// Same by central differences with step 1e-6 times the coordinate scale.
  std::array<double, 2> gradient_central(double i1, double phi1) const;
  /// (di1/dt, dphi1/dt) = (1/G)(dH/dphi1, -dH/di1), G = Gamma_3.
  std::array<double, 2> vector_field(double i1, double phi1) const;
  /// True when both radicands are non-negative and the logs are defined.
  bool in_domain(double i1, double phi1) const;

  double eps() const { return eps_; }
  double i2() const { return i2_; }
  double weight() const { return strengths_[2]; }

 private:
  std::array<double, 4> strengths_;
  double eps_;
  double i2_;
  bool include_h2bar_;
};

struct ReducedFlowConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double max_step = 0.1;
  /// Output spacing; 0 records every accepted step.
  double sample_interval = 0.0;
  bool include_h2bar = true;
};

enum class ReducedTermination { time_limit, domain_exit, step_collapse };
std::string_view to_string(ReducedTermination t);

struct ReducedTrajectory {
  double eps = 0.0;
  double i2 = 0.0;
  std::vector<double> t, i1, phi1, hbar;
  ReducedTermination termination = ReducedTermination::time_limit;
  /// Where the flow left the domain, when it did.
  std::string boundary;
  /// max |Hbar(t) - Hbar(0)| / |Hbar(0)| over accepted steps.
  double hbar_drift = 0.0;
  /// Largest relative gap between complex-step and central-difference
  /// gradients at the initial point.
  double derivative_crosscheck = 0.0;
};

/// Integrates Hamilton's equations for Hbar in (i1, phi1).
ReducedTrajectory integrate_reduced(const ReducedChartPoint& rp0, const std::array<double, 4>& strengths, double t_end,
                                    const ReducedFlowConfig& cfg = {});

struct FixedPoint {
  double i1 = 0.0;
  double phi1 = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/// Newton iteration on grad Hbar = 0 from (i1, phi1).
FixedPoint find_fixed_point(const ReducedHamiltonian& h, double i1, double phi1, int max_iter = 50);

struct ComparisonOptions {
  double window = 2.0;
  std::size_t samples = 200;
  /// Allowed |i1_full - i1_reduced| as a fraction of the i1 range of the reduced run.
  double envelope_fraction = 0.05;
  IntegratorConfig full;
  ReducedFlowConfig reduced;
};

struct ComparisonRow {
  double t, i1_reduced, phi1_reduced, hbar, i1_full, phi1_full, deviation;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  double i1_range = 0.0;
  double max_deviation = 0.0;
  /// Largest phi1 gap modulo pi.
  double max_phi1_gap = 0.0;
  double envelope = 0.0;
  bool within_envelope = false;
  Termination full_termination = Termination::time_limit;
  ReducedTermination reduced_termination = ReducedTermination::time_limit;
};

/// Integrates the four-vortex system from reduced_to_chart(rp0) and the
/// reduced flow from rp0 over the same window, and compares i1, phi1.
ComparisonReport compare_with_full(const ReducedChartPoint& rp0, const std::array<double, 4>& strengths,
                                   const ComparisonOptions& opt = {});

}  // namespace vortexlab
