#include "vortexlab/binary_chart.hpp"

#include <cmath>

#include "vortexlab/dynamics.hpp"

namespace vortexlab {

namespace {

const Point kI{0.0, 1.0};

void check_pair(std::size_t n, std::pair<std::size_t, std::size_t> pair) {
  if (n != 4) throw InvalidArgument("binary chart needs four vortices");
  if (pair.first >= 4 || pair.second >= 4 || pair.first == pair.second) throw InvalidArgument("invalid binary pair");
}

}  // namespace

BinaryChartPoint to_binary_chart(const VortexState& state, std::pair<std::size_t, std::size_t> pair) {
  check_pair(state.size(), pair);
  state.validate();
  const auto [a, b] = pair;
  const double ga = state.strengths[a], gb = state.strengths[b];
  if (ga + gb == 0.0) throw InvalidArgument("binary strengths sum to zero");
  BinaryChartPoint p;
  std::copy(state.strengths.begin(), state.strengths.end(), p.strengths.begin());
  p.pair = pair;
  p.time = state.time;
  p.q = state.positions[b] - state.positions[a];
  p.zeta = (ga * state.positions[a] + gb * state.positions[b]) / (ga + gb);
  std::size_t k = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (i == a || i == b) continue;
    p.spectator_index[k] = i;
    p.spectators[k] = state.positions[i];
    ++k;
  }
  return p;
}

VortexState from_binary_chart(const BinaryChartPoint& p) {
  const auto [a, b] = p.pair;
  const double gab = p.binary_strength();
  if (gab == 0.0) throw InvalidArgument("binary strengths sum to zero");
  VortexState s;
  s.time = p.time;
  s.strengths.assign(p.strengths.begin(), p.strengths.end());
  s.positions.resize(4);
  s.positions[a] = p.zeta - p.strengths[b] / gab * p.q;
  s.positions[b] = p.zeta + p.strengths[a] / gab * p.q;
  s.positions[p.spectator_index[0]] = p.spectators[0];
  s.positions[p.spectator_index[1]] = p.spectators[1];
  return s;
}

ChartVelocity binary_vector_field(const BinaryChartPoint& p) {
  const auto [a, b] = p.pair;
  const double ga = p.strengths[a], gb = p.strengths[b];
  const double gab = ga + gb;
  if (p.q == Point{}) throw SingularConfiguration("binary members coincide");
  const Point za = p.zeta - gb / gab * p.q;
  const Point zb = p.zeta + ga / gab * p.q;
  auto R = [](Point from, Point to) {
    const Point d = from - to;
    const double n = std::norm(d);
    if (n == 0.0) throw SingularConfiguration("spectator coincides with a binary member");
    return d / n;
  };
  const std::array<double, 2> gs{p.strengths[p.spectator_index[0]], p.strengths[p.spectator_index[1]]};
  std::array<Point, 2> ra, rb;
  for (int j = 0; j < 2; ++j) {
    ra[j] = R(za, p.spectators[j]);
    rb[j] = R(zb, p.spectators[j]);
  }
  ChartVelocity v;
  Point qs = gab * p.q / std::norm(p.q);
  Point zs{};
  for (int j = 0; j < 2; ++j) {
    qs += gs[j] * (rb[j] - ra[j]);
    zs += gs[j] * (ga * ra[j] + gb * rb[j]);
  }
  v.q_dot = kI / kTwoPi * qs;
  v.zeta_dot = kI / (kTwoPi * gab) * zs;
  const Point d23 = p.spectators[0] - p.spectators[1];
  if (std::norm(d23) == 0.0) throw SingularConfiguration("spectators coincide");
  for (int j = 0; j < 2; ++j) {
    const Point pair_term = (j == 0 ? 1.0 : -1.0) * gs[1 - j] * d23 / std::norm(d23);
    v.spectator_dot[j] = kI / kTwoPi * (pair_term - ga * ra[j] - gb * rb[j]);
  }
  return v;
}

ChartVelocity pushforward_velocity(const BinaryChartPoint& p) {
  const VortexState s = from_binary_chart(p);
  const auto vel = velocity_field(s);
  const auto [a, b] = p.pair;
  const double ga = p.strengths[a], gb = p.strengths[b];
  ChartVelocity v;
  v.q_dot = vel[b] - vel[a];
  v.zeta_dot = (ga * vel[a] + gb * vel[b]) / (ga + gb);
  v.spectator_dot = {vel[p.spectator_index[0]], vel[p.spectator_index[1]]};
  return v;
}

PerturbationSplit perturbation_split(const BinaryChartPoint& p) {
  const auto [a, b] = p.pair;
  const double ga = p.strengths[a], gb = p.strengths[b];
  const double gab = ga + gb;
  const double q2 = std::norm(p.q);
  if (q2 == 0.0) throw SingularConfiguration("binary members coincide");
  PerturbationSplit out;
  std::array<double, 2> fj{};
  for (int j = 0; j < 2; ++j) {
    const double g = p.strengths[p.spectator_index[j]];
    const Point w = p.zeta - p.spectators[j];
    const double d = std::norm(w + ga / gab * p.q) * std::norm(w - gb / gab * p.q);
    if (d == 0.0) throw SingularConfiguration("spectator coincides with a binary member");
    out.f1 += g * (std::norm(w) + ga * gb / (gab * gab) * q2) / d;
    fj[j] = g * ((gb - ga) / gab * q2 - 2.0 * dot(w, p.q)) / d;
    out.f1_limit += g / std::norm(w);
  }
  out.f2 = fj[0];
  out.f3 = fj[1];
  out.radial = kI / kTwoPi * (gab / q2 + out.f1) * p.q;
  out.perturbation =
      kI / kTwoPi * (out.f2 * (p.zeta - p.spectators[0]) + out.f3 * (p.zeta - p.spectators[1]));
  return out;
}

double timescale_ratio(const BinaryChartPoint& p) {
  const ChartVelocity v = binary_vector_field(p);
  const double qn = std::abs(v.q_dot);
  if (qn == 0.0) throw DomainError("q_dot vanishes");
  return (std::abs(v.zeta_dot - v.spectator_dot[0]) + std::abs(v.zeta_dot - v.spectator_dot[1])) / qn;
}

VortexState collapsed_three_vortex(const BinaryChartPoint& p) {
  VortexState s;
  s.time = p.time;
  s.positions = {p.zeta, p.spectators[0], p.spectators[1]};
  s.strengths = {p.binary_strength(), p.strengths[p.spectator_index[0]], p.strengths[p.spectator_index[1]]};
  return s;
}

double energy_product_log_ratio(const BinaryChartPoint& p) {
  const double ga = p.strengths[p.pair.first], gb = p.strengths[p.pair.second];
  return log_exp_energy(from_binary_chart(p)) -
         (log_exp_energy(collapsed_three_vortex(p)) + ga * gb * std::log(std::norm(p.q)));
}

}  // namespace vortexlab
