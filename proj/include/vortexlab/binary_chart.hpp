#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "vortexlab/core.hpp"

namespace vortexlab {

/// Four-vortex state seen as a binary (i, j) plus two spectators.
/// z_i = zeta - (Gamma_j / Gamma_ij) q and z_j = zeta + (Gamma_i / Gamma_ij) q.
struct BinaryChartPoint {
  Point q;     // z_j - z_i
  Point zeta;  // center of vorticity of the binary
  std::array<Point, 2> spectators;
  std::array<double, 4> strengths{};  // in original vortex order
  std::pair<std::size_t, std::size_t> pair{0, 3};
  std::array<std::size_t, 2> spectator_index{1, 2};
  double time = 0.0;

  double binary_strength() const { return strengths[pair.first] + strengths[pair.second]; }
};

/// Throws InvalidArgument for N != 4, a bad pair or Gamma_i + Gamma_j = 0.
BinaryChartPoint to_binary_chart(const VortexState& state, std::pair<std::size_t, std::size_t> pair);
VortexState from_binary_chart(const BinaryChartPoint& p);

struct ChartVelocity {
  Point q_dot;
  Point zeta_dot;
  std::array<Point, 2> spectator_dot;
};

/// Chart vector field written with the binary terms
///   R_j^a = (z_a - z_j) / |z_a - z_j|^2 for the two binary members a,
/// so that q_dot = (i/2pi)[Gamma_ij q/|q|^2 + sum_j Gamma_j (R_j^second - R_j^first)].
ChartVelocity binary_vector_field(const BinaryChartPoint& p);

/// Chart velocity obtained by pushing the Cartesian field through the chart.
ChartVelocity pushforward_velocity(const BinaryChartPoint& p);

/// Decomposition of q_dot as (i/2pi)[(Gamma_ij/|q|^2 + f1) q + f2 w_2 + f3 w_3],
/// w_j = zeta - z_j, with
///   f1 = sum_j Gamma_j (|w_j|^2 + (G_a G_b / G_ab^2)|q|^2) / D_j,
///   f_j = Gamma_j ((G_b - G_a)/G_ab |q|^2 - 2 w_j.q) / D_j,
///   D_j = |w_j + (G_a/G_ab) q|^2 |w_j - (G_b/G_ab) q|^2,
/// where a is the first binary member, b the second.
struct PerturbationSplit {
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
  /// f1 at q = 0, sum_j Gamma_j / |w_j|^2.
  double f1_limit = 0.0;
  Point radial;        // (i/2pi)(Gamma_ij/|q|^2 + f1) q
  Point perturbation;  // (i/2pi)(f2 w_2 + f3 w_3)
};
PerturbationSplit perturbation_split(const BinaryChartPoint& p);

/// (|w_2_dot| + |w_3_dot|) / |q_dot|. Throws DomainError when q_dot = 0.
double timescale_ratio(const BinaryChartPoint& p);

/// log of h(z1..z4) / (h(zeta, spectators; Gamma_ij, ...) |q|^{2 Gamma_i Gamma_j}).
double energy_product_log_ratio(const BinaryChartPoint& p);

/// Three-vortex state (zeta, spectators) with strengths (Gamma_ij, ...).
VortexState collapsed_three_vortex(const BinaryChartPoint& p);

}  // namespace vortexlab
