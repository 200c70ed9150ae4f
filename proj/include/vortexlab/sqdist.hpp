#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vortexlab/core.hpp"

namespace vortexlab {

/// Point of the shape space of squared distances: b_ij = rho * beta_ij with
/// sum beta_ij = 1. Pairs are stored in lexicographic order (see pair_list).
struct ShapePoint {
  std::size_t n = 0;
  std::vector<double> b;
  double rho = 0.0;
  std::vector<double> beta;
};

/// Number of vortices N for a vector of C(N,2) pair values.
std::size_t vortex_count_for_pairs(std::size_t pairs);

std::vector<double> squared_distances(const VortexState& state);

ShapePoint to_shape(const VortexState& state);
/// Throws DomainError when every entry vanishes (total collision).
ShapePoint to_shape(std::span<const double> b);

/// Oriented area of the triangle (z_i, z_k, z_j): Im(conj(z_i - z_k) (z_k - z_j)) / 2.
double oriented_area(Point zi, Point zk, Point zj);

/// Time derivative of every b_ij along the vortex flow,
///   db_ij/dt = (2/pi) sum_{k != i,j} Gamma_k A_ikj (1/b_ik - 1/b_kj).
/// Areas come from the Cartesian positions, since distances alone do not fix
/// their sign.
std::vector<double> sqdist_rhs(const VortexState& state);

/// Determinant of the bordered 5x5 Cayley-Menger matrix of four points with
/// squared distances b = (b12, b13, b14, b23, b24, b34). It equals 288 times
/// the squared volume of the tetrahedron and vanishes for planar points.
double cayley_menger(std::span<const double> b);

struct ShapeValidity {
  bool valid = true;
  /// 2(ab + bc + ca) - (a^2 + b^2 + c^2) for every triple, in lexicographic triple order.
  std::vector<double> cone_residuals;
  /// Cayley-Menger determinant of every 4-subset (empty for N = 3).
  std::vector<double> cayley_menger;
  double scale = 0.0;
};

/// Checks that b is the squared-distance vector of a planar configuration:
/// every cone residual >= -tol * scale^2 and every |Cayley-Menger| <= tol * scale^4,
/// scale being the largest entry.
ShapeValidity shape_valid(std::span<const double> b, double tol);

/// |(h / rho^V) / prod beta_ij^{Gamma_i Gamma_j} - 1| with h = exp(-4 pi H).
/// The exponent convention follows from H = -(1/4pi) sum Gamma_i Gamma_j ln b_ij,
/// so exp(-4 pi H) = prod b_ij^{Gamma_i Gamma_j} = rho^V prod beta_ij^{Gamma_i Gamma_j}.
double energy_relation_residual(const VortexState& state);
/// Same, with h taken from a given energy value (e.g. the conserved initial H).
double energy_relation_residual(const VortexState& state, double h_energy);

}  // namespace vortexlab
