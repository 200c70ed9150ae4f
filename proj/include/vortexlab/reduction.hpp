#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vortexlab/core.hpp"

namespace vortexlab {

// Binary-reduction chain for four vortices. The binary is always vortices
// 1 and 2 of the chain; states with another binary pair are relabeled first
// (see relabel_binary_first). Coordinates are ordered (x-block; y-block):
//   original   (x1..x4, y1..y4)
//   after T1   (zeta, z, z3, z4) real parts then imaginary parts,
//              zeta = z2 - z1, z = center of vorticity of the binary
//   after T2   (x, q0, q1, q2, y, p0, p1, p2), DFT of (z, z3, z4)
//   after F3   (j, j0, j1, j2, theta, theta0, theta1, theta2)
//   after T4   (i, i0, i1, i2, phi, phi0, phi1, phi2)
// A stage matrix maps new coordinates to old ones (the Jacobian of the
// inverse map), so that M^t J_old M = J_new.

using Matrix8 = Eigen::Matrix<double, 8, 8>;

enum class Stage { J0, J1, J2, J3, J4 };

/// Symplectic structure [[0, D], [-D, 0]] with D = diag(weights).
struct SymplecticStructure {
  std::array<double, 4> weights{};
  Stage stage = Stage::J0;

  Matrix8 matrix() const;
};

struct StageCheck {
  std::string name;
  Matrix8 matrix;  // new -> old
  SymplecticStructure before;
  SymplecticStructure after;
  /// max |M^t J_before M - J_after| divided by max |weight|.
  double residual = 0.0;
};

struct TransformChain {
  std::array<double, 4> strengths{};
  StageCheck t1;
  StageCheck t2;
  /// Blocks of T2^t J1 T2 = [[A, B], [-B, A]] (upper-left and upper-right).
  Eigen::Matrix4d a_block;
  Eigen::Matrix4d b_block;
  /// A = 0 and B diagonal, to 1e-12 relative to the largest weight.
  bool matrix_canonical = false;
  /// |Gamma_1 + Gamma_2 - Gamma_3| + |Gamma_3 - Gamma_4| < 1e-12.
  bool condition_holds = false;
  /// Linear T4 stage; present only when the condition holds.
  std::optional<StageCheck> t4;
};

/// Builds and checks the linear stages. Throws InvalidArgument when
/// Gamma_1 + Gamma_2 = 0 or a strength is zero.
TransformChain transform_chain(const std::array<double, 4>& strengths);

Matrix8 t1_matrix(const std::array<double, 4>& strengths);
Matrix8 t2_matrix();
Matrix8 t4_matrix();

/// Complex-step Jacobian (new -> old) of the semi-polar stage at a point
/// (j0..j3, theta0..theta3); all j must be positive.
Matrix8 f3_jacobian(const std::array<double, 8>& point);
/// Residual of the semi-polar stage, J2 -> J3 = J2, at a point.
double f3_symplectic_residual(const std::array<double, 8>& point, const std::array<double, 4>& weights);

/// Weights of J1: (G1 G2 / (G1 + G2), G1 + G2, G3, G4).
std::array<double, 4> j1_weights(const std::array<double, 4>& strengths);

struct ReducedChartPoint {
  double i = 0.0, i0 = 0.0, i1 = 0.0, i2 = 0.0;
  double phi = 0.0, phi0 = 0.0, phi1 = 0.0, phi2 = 0.0;

  /// Binary radius in chart units, sqrt(2 i).
  double epsilon() const;
  std::array<double, 8> as_array() const;
  static ReducedChartPoint from_array(const std::array<double, 8>& a);
};

/// Strength vector satisfying Gamma_1 + Gamma_2 = Gamma_3 = Gamma_4 within 1e-12.
bool reduction_condition_holds(const std::array<double, 4>& strengths);

/// Reorders a four-vortex state so that the binary pair comes first, keeping
/// the spectators in increasing index order. The returned permutation lists
/// original indices in new order.
std::pair<VortexState, std::array<std::size_t, 4>> relabel_binary_first(const VortexState& state,
                                                                         std::pair<std::size_t, std::size_t> pair);

/// Maps a state (binary = vortices 1, 2) through T1, T2, F3, T4. Angles are
/// full-quadrant in (-pi, pi]. Throws InvalidArgument when the vorticity
/// condition fails.
ReducedChartPoint chart_to_reduced(const VortexState& state);
/// Relabels `pair` to (1, 2) first.
ReducedChartPoint chart_to_reduced(const VortexState& state, std::pair<std::size_t, std::size_t> pair);

/// Inverse of chart_to_reduced; requires i > 0, j1 = -(i1+i2)/2 >= 0 and
/// j2 = (i1-i2)/2 >= 0, i0 >= 0.
VortexState reduced_to_chart(const ReducedChartPoint& rp, const std::array<double, 4>& strengths, double time = 0.0);

/// Shifts the angles of `current` to the representative nearest `previous`:
/// phi, phi0 by multiples of 2 pi, (phi1, phi2) jointly by multiples of pi
/// (both pairs name the same configuration), then phi2 by multiples of 2 pi.
ReducedChartPoint unwrap_angles(const ReducedChartPoint& previous, const ReducedChartPoint& current);

// --- expansion of the Hamiltonian in epsilon -------------------------------

/// 4 pi H0 = 2 G2 (G2 - G) log eps - G^2 (log(-2(i2 + S cos 2phi1))
///           + log(S cos 2phi1 - 2(i2 + sqrt3 S cos phi1 sin phi1))
///           + log(-2 i2 + S cos 2phi1 + sqrt3 S sin 2phi1)),
/// S = sqrt(-i1 - i2) sqrt(i1 - i2), G = Gamma_3. Throws DomainError naming
/// the offending radicand or log argument.
double h0(const ReducedChartPoint& rp, const std::array<double, 4>& strengths);

/// f1 / f2 of the averaged second-order term as given in closed form.
double h2bar(const ReducedChartPoint& rp, const std::array<double, 4>& strengths);
double h2bar_numerator(const ReducedChartPoint& rp, const std::array<double, 4>& strengths);
double h2bar_denominator(const ReducedChartPoint& rp, const std::array<double, 4>& strengths);

/// H0 and h2bar with complex (i1, phi1) for complex-step differentiation.
std::complex<double> h0_complex(std::complex<double> i1, std::complex<double> phi1, double eps, double i2,
                                const std::array<double, 4>& strengths);
std::complex<double> h2bar_complex(std::complex<double> i1, std::complex<double> phi1, double i2,
                                   const std::array<double, 4>& strengths);

struct H2Fit {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  /// Root-mean-square fit residual.
  double rms = 0.0;
};

struct H2FitOptions {
  double eps_min = 1e-4;
  double eps_max = 1e-2;
  std::size_t nodes = 20;
};

/// Least-squares fit of H - H0 = c1 eps + c2 eps^2 + c3 eps^3 over a geometric
/// eps grid, with every other coordinate of `base` held fixed. Throws Error
/// on a rank-deficient fit.
H2Fit numeric_h2(const ReducedChartPoint& base, const std::array<double, 4>& strengths, const H2FitOptions& opt = {});

/// (1/2pi) int_0^{2pi} c2(phi) dphi by the trapezoid rule on `nodes` points.
double numeric_h2_average(const ReducedChartPoint& base, const std::array<double, 4>& strengths,
                          std::size_t nodes = 2048, const H2FitOptions& opt = {});

}  // namespace vortexlab
