#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vortexlab {

/// A point of the plane, z = x + i y.
using Point = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two or more vortices coincide, or a quantity is evaluated on the collision set.
class SingularConfiguration : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Phase-space point of the planar N-vortex problem.
struct VortexState {
  std::vector<Point> positions;
  std::vector<double> strengths;
  double time = 0.0;

  std::size_t size() const { return positions.size(); }

  /// Throws InvalidArgument for N < 2, mismatched sizes or a zero strength,
  /// and SingularConfiguration when two positions coincide.
  void validate() const;
};

/// Pairs (i, j), i < j, in lexicographic order (1,2),(1,3),...,(N-1,N); zero based.
std::vector<std::pair<std::size_t, std::size_t>> pair_list(std::size_t n);
std::size_t pair_count(std::size_t n);
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);

double total_strength(std::span<const double> strengths);

/// Sum over pairs of Gamma_a Gamma_b. Depends on the strengths only.
double virial(std::span<const double> strengths);

struct InvariantSet {
  double energy = 0.0;            // H
  Point moment{0.0, 0.0};         // Z = sum Gamma_a z_a
  double angular_impulse = 0.0;   // I = sum Gamma_a |z_a|^2
  double m_pair_sum = 0.0;        // M = sum_{a<b} Gamma_a Gamma_b |z_a - z_b|^2
  double m_from_moment = 0.0;     // Gamma I - |Z|^2; NaN when Gamma == 0
  double virial = 0.0;            // V (pair sum)
  double kinematic_virial = 0.0;  // sum Gamma_a z_a x dz_a/dt
  double total_strength = 0.0;    // Gamma
};

/// Energy H = -(1/2pi) sum_{a<b} Gamma_a Gamma_b ln |z_a - z_b|.
double energy(const VortexState& state);

/// Exponentiated energy h = exp(-4 pi H) = prod_{a<b} b_ab^{Gamma_a Gamma_b},
/// returned as its logarithm to avoid overflow.
double log_exp_energy(const VortexState& state);

InvariantSet invariants(const VortexState& state);

/// sum Gamma_a (x_a ydot_a - y_a xdot_a). Equals virial / (2 pi) identically.
double kinematic_virial(const VortexState& state);

/// Cross product of planar vectors, Im(conj(a) b).
inline double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Point a, Point b) { return a.real() * b.real() + a.imag() * b.imag(); }

}  // namespace vortexlab
