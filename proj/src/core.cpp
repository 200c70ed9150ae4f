#include "vortexlab/core.hpp"

#include <cmath>
#include <limits>

#include "vortexlab/dynamics.hpp"

namespace vortexlab {

void VortexState::validate() const {
  if (positions.size() < 2) throw InvalidArgument("vortex state needs at least two vortices");
  if (positions.size() != strengths.size())
    throw InvalidArgument("positions and strengths differ in length");
  for (double g : strengths) {
    if (g == 0.0 || !std::isfinite(g)) throw InvalidArgument("vortex strengths must be finite and nonzero");
  }
  for (const Point& z : positions) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidArgument("vortex positions must be finite");
  }
  for (const auto& [i, j] : pair_list(size())) {
    if (positions[i] == positions[j])
      throw SingularConfiguration("vortices " + std::to_string(i + 1) + " and " +
                                  std::to_string(j + 1) + " coincide");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> pair_list(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(pair_count(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > j) std::swap(i, j);
  if (i == j || j >= n) throw InvalidArgument("invalid pair index");
  // Pairs preceding row i: (n-1) + (n-2) + ... + (n-i).
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

double total_strength(std::span<const double> strengths) {
  double s = 0.0;
  for (double g : strengths) s += g;
  return s;
}

double virial(std::span<const double> strengths) {
  double v = 0.0;
  for (std::size_t i = 0; i < strengths.size(); ++i)
    for (std::size_t j = i + 1; j < strengths.size(); ++j) v += strengths[i] * strengths[j];
  return v;
}

double log_exp_energy(const VortexState& state) {
  state.validate();
  double s = 0.0;
  for (const auto& [i, j] : pair_list(state.size()))
    s += state.strengths[i] * state.strengths[j] * std::log(std::norm(state.positions[i] - state.positions[j]));
  return s;
}

double energy(const VortexState& state) {
  state.validate();
  double s = 0.0;
  for (const auto& [i, j] : pair_list(state.size()))
    s += state.strengths[i] * state.strengths[j] * std::log(std::abs(state.positions[i] - state.positions[j]));
  return -s / kTwoPi;
}

double kinematic_virial(const VortexState& state) {
  const auto vel = velocity_field(state);
  double v = 0.0;
  for (std::size_t a = 0; a < state.size(); ++a) v += state.strengths[a] * cross(state.positions[a], vel[a]);
  return v;
}

InvariantSet invariants(const VortexState& state) {
  state.validate();
  InvariantSet out;
  out.energy = energy(state);
  out.total_strength = total_strength(state.strengths);
  for (std::size_t a = 0; a < state.size(); ++a) {
    out.moment += state.strengths[a] * state.positions[a];
    out.angular_impulse += state.strengths[a] * std::norm(state.positions[a]);
  }
  for (const auto& [i, j] : pair_list(state.size()))
    out.m_pair_sum += state.strengths[i] * state.strengths[j] * std::norm(state.positions[i] - state.positions[j]);
  out.m_from_moment = out.total_strength != 0.0
                          ? out.total_strength * out.angular_impulse - std::norm(out.moment)
                          : std::numeric_limits<double>::quiet_NaN();
  out.virial = virial(state.strengths);
  out.kinematic_virial = kinematic_virial(state);
  return out;
}

}  // namespace vortexlab
