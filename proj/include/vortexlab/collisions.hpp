#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vortexlab/dynamics.hpp"

namespace vortexlab {

enum class CollisionKind { n_collision, sequential, relative, relative_sequential };
std::string_view to_string(CollisionKind k);

/// Outcome of the finite-data "tends to zero" test on a scalar series.
enum class Trend { none, monotone, sequential };

struct TrendOptions {
  /// Fraction of trailing samples forming the test window.
  double window_fraction = 0.25;
};

/// A series tends to zero monotonically when, over the trailing window, it is
/// strictly decreasing, its log-linear fit against time has negative slope and
/// its final value is below eps. It tends to zero sequentially when only the
/// record lows of the window satisfy the same test.
Trend tends_to_zero(std::span<const double> t, std::span<const double> v, double eps, const TrendOptions& opt = {});

struct ClusterEvidence {
  std::vector<double> times;
  std::vector<double> values;
  double log_slope = 0.0;
};

struct Cluster {
  std::vector<std::size_t> members;  // zero based
  CollisionKind kind = CollisionKind::n_collision;
  bool proper = false;
  double t_star = std::numeric_limits<double>::infinity();
  ClusterEvidence evidence;
};

struct CollisionReport {
  std::size_t n = 0;
  double eps = 0.0;
  /// Clusters tested on distances (n_collision / sequential) followed by
  /// clusters tested on the normalized shape (relative kinds). Clusters within
  /// each family are disjoint.
  std::vector<Cluster> clusters;
  /// Distance between the two limit groups when the absolute clusters and the
  /// remaining single vortices form exactly two groups.
  std::optional<double> limit_separation;

  bool empty() const { return clusters.empty(); }
};

struct ClassifyOptions {
  TrendOptions trend;
};

/// Detects clusters whose intra-cluster distances tend to zero. Absolute
/// clusters use max l_ij; relative clusters use max sqrt(beta_ij), both
/// compared against eps. Requires at least ten samples.
CollisionReport classify(const Trajectory& traj, double eps, const ClassifyOptions& opt = {});

/// Fits b = c (T - t)^k through the last three (t, b) points and returns T,
/// or +infinity when no finite collision time is consistent with the data.
double estimate_collision_time(std::span<const double> t, std::span<const double> b);

// --- necessary conditions for ternary / double binary collapse -------------

enum class PatternKind { ternary, double_binary };

struct CollapseCondition {
  PatternKind kind = PatternKind::ternary;
  /// Ternary: {{i,j,k},{l}}; double binary: {{i,j},{k,l}}. Zero based.
  std::vector<std::vector<std::size_t>> groups;
  /// Gamma_ijk * Gamma_l or Gamma_ij * Gamma_kl.
  double strength_product = 0.0;
  /// Verdict of the sign table alone.
  bool table_admissible = false;
  /// Verdict after energy screening.
  bool admissible = false;
  /// Limit distance d between the groups; std::nullopt with d_arbitrary set
  /// when any d is possible, nullopt otherwise when inadmissible.
  std::optional<double> required_d;
  bool d_arbitrary = false;
  std::string reason;
};

/// Enumerates the four ternary and three double-binary patterns of a four
/// vortex system with angular-impulse invariant M. `m_tol` is the tolerance
/// for treating M as zero; sums of strengths are zero within 1e-12 * sum|Gamma|.
std::vector<CollapseCondition> necessary_conditions(std::span<const double> strengths, double m, double m_tol = 0.0);

// --- regular approach to the origin ----------------------------------------

struct RegularApproachOptions {
  /// Bound on the total variation of the normalized position over the tail.
  double direction_tol = 1e-6;
  /// Bound on |v_hat + direction| for the normalized finite-difference velocity.
  double velocity_tol = 1e-3;
  double tail_fraction = 0.25;
};

struct RegularApproach {
  bool regular = false;
  std::vector<double> direction;
  double tail_variation = 0.0;
  double velocity_mismatch = 0.0;
  std::string reason;
};

/// Decides whether sampled points of a curve approach the origin along a
/// limiting direction. Needs >= 20 samples with strictly decreasing norms.
RegularApproach regular_approach(std::span<const double> t, const std::vector<std::vector<double>>& points,
                                 const RegularApproachOptions& opt = {});

// --- beta_ij / rho^V bound --------------------------------------------------

struct BoundReport {
  bool applicable = false;
  std::string reason;
  std::vector<double> times;
  std::vector<double> values;  // beta_ij^{|Gamma_i Gamma_j|} / rho^V on the window
  double r_min = 0.0;
  double r_max = 0.0;
  double ratio = 0.0;
  double virial = 0.0;
  /// Sign of the log-linear slope of rho over the window (-1, 0, +1).
  int rho_trend = 0;
  /// -1 when V > 0 (rho should decrease), +1 when V < 0.
  int expected_rho_trend = 0;
  bool corollary_consistent = false;
};

/// Evaluates beta_ij^{|Gamma_i Gamma_j|} / rho^V along the trailing window.
/// Hypothesis failures make the report inapplicable rather than throwing.
BoundReport beta12_virial_bound(const Trajectory& traj, std::pair<std::size_t, std::size_t> pair,
                                double window_fraction = 0.25);

}  // namespace vortexlab
