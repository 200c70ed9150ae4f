#pragma once

#include <array>
#include <ostream>
#include <vector>

#include "vortexlab/dynamics.hpp"

namespace vortexlab {

/// f1(x) = x^{1/(1+x^2)}.
double parallelogram_f1(double x);
/// f2(x; h) = 2 f1(x) / (h (1 + x)).
double parallelogram_f2(double x, double h);

/// Parameters of the four-vortex parallelogram with Gamma_1 = Gamma_3 and
/// Gamma_2 = Gamma_4. `h` is the energy constant of the reduced system
/// f1(beta) z = h (x y)^delta.
struct ParallelogramParams {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double h = 0.0;
  double beta = 0.0;   // |Gamma_2 / Gamma_1|
  double delta = 0.0;  // 2 |Gamma_1 Gamma_2| / (Gamma_1^2 + Gamma_2^2)
  double alpha = 0.0;  // 1 / (1 - 2 delta); NaN within 1e-12 of delta = 1/2
  double A = 0.0;      // h / f1(beta)
  double gamma = 0.0;  // 1 / f2(beta; h)

  /// Throws InvalidArgument for zero strengths or h <= 0.
  static ParallelogramParams make(double gamma1, double gamma2, double h);
};

struct CurvePoint {
  double p = 0.0;
  double x = 0.0;  // b12
  double y = 0.0;  // b14
  double z = 0.0;  // b24
  /// Relative residuals of f1(beta) z = h (xy)^delta and (1+beta) z = 2(x+y).
  double residual_a = 0.0;
  double residual_b = 0.0;
};

/// Relative residuals of the two constraint equations at (x, y, z).
std::array<double, 2> constraint_residuals(double x, double y, double z, const ParallelogramParams& prm);

/// Collapse curve in the projective parameter p = y/x:
///   x = (gamma p^delta / (1+p))^alpha,  y = (gamma p^{1-delta} / (1+p))^alpha,
///   z = 2 (x + y) / (1 + beta).
/// The z component is the one fixed by the constraints; the power form
/// A (gamma p / (1+p))^alpha does not satisfy them. Requires p > 0, 0 < delta < 1
/// and delta != 1/2.
CurvePoint collapse_curve(double p, const ParallelogramParams& prm);

/// Same curve in q = x/y = 1/p.
CurvePoint collapse_curve_q(double q, const ParallelogramParams& prm);

/// Unit limiting direction of (x, y, z) on the branch that reaches the origin.
/// Only delta < 1/2 has such a branch; its p -> 0 limit is
/// normalize(1, 0, 2/(1+beta)). Throws DomainError otherwise.
std::array<double, 3> limit_direction_of_curve(const ParallelogramParams& prm);

enum class CurveBranch { p, q };

/// Samples the collapsing branch at parameters geometrically spaced from
/// `param_max` down to `param_min`, ordered towards the origin. The branch is
/// the one on which x + y + z decreases; `which` selects p or q.
std::vector<CurvePoint> sample_collapse_branch(const ParallelogramParams& prm, CurveBranch which, std::size_t count,
                                               double param_min = 1e-12, double param_max = 1e-2);

/// Writes columns p, x, y, z, residual_a, residual_b.
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& points);

/// 1 + delta and (|G1| + |G2|)^2 / (G1^2 + G2^2); equal for every pair.
std::array<double, 2> delta_identity(double gamma1, double gamma2);

struct PreservationReport {
  /// Max over samples of |b12 - b34|, |b13 - b24|, |b14 - b23|.
  std::array<double, 3> max_abs{};
  /// Same, each divided by rho at the sample.
  std::array<double, 3> max_rel{};
  /// Max of |b12 + b34 - 2(b13 + b14)| / rho (law as usually quoted).
  double law_quoted_rel = 0.0;
  /// Max of |b13 + b24 - 2(b12 + b14)| / rho (law for vertices in order 1,2,3,4).
  double law_cyclic_rel = 0.0;
};

/// Preservation residuals along a trajectory. Requires four vortices with
/// Gamma_1 = Gamma_3, Gamma_2 = Gamma_4 and an initial parallelogram with
/// vertices in cyclic order 1,2,3,4, i.e. b12 = b34 and b14 = b23 to
/// relative 1e-9; throws InvalidArgument otherwise.
PreservationReport check_preservation(const Trajectory& traj);

/// Parallelogram with vertices 1,2,3,4 in cyclic order: 1 at -u-v, 2 at u-v,
/// 3 at u+v, 4 at -u+v, u = (aspect/2, 0), v rotated by `angle` from the x axis
/// with length 1/2. Square for aspect 1, angle pi/2.
VortexState parallelogram_state(double gamma1, double gamma2, double aspect, double angle = kPi / 2);

}  // namespace vortexlab
