#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "vortexlab/core.hpp"

// Independent reference formulas used as oracles. Nothing here calls into the
// library beyond the plain data types.
namespace oracle {

using vortexlab::Point;
using vortexlab::VortexState;

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

/// Strength with |G| in [0.3, 2] and random sign.
inline double strength(std::mt19937_64& rng) {
  const double m = uniform(rng, 0.3, 2.0);
  return uniform(rng, 0.0, 1.0) < 0.5 ? -m : m;
}

/// Random well separated state in the unit disk (pairwise distance >= min_sep).
inline VortexState random_state(std::mt19937_64& rng, std::size_t n, double min_sep = 0.2) {
  for (;;) {
    VortexState s;
    for (std::size_t a = 0; a < n; ++a) {
      s.strengths.push_back(strength(rng));
      s.positions.emplace_back(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
    }
    bool ok = true;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) ok = ok && std::abs(s.positions[a] - s.positions[b]) >= min_sep;
    if (ok) return s;
  }
}

/// dz_a/dt = (i/2pi) sum_b G_b (z_a - z_b)/|z_a - z_b|^2, componentwise.
inline std::vector<Point> velocity(const VortexState& s) {
  std::vector<Point> v(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    double vx = 0.0, vy = 0.0;
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (a == b) continue;
      const double dx = s.positions[a].real() - s.positions[b].real();
      const double dy = s.positions[a].imag() - s.positions[b].imag();
      const double r2 = dx * dx + dy * dy;
      vx += -s.strengths[b] * dy / r2;
      vy += s.strengths[b] * dx / r2;
    }
    v[a] = {vx / (2.0 * M_PI), vy / (2.0 * M_PI)};
  }
  return v;
}

inline double energy(const VortexState& s) {
  double h = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      h -= s.strengths[a] * s.strengths[b] * std::log(std::hypot(s.positions[a].real() - s.positions[b].real(),
                                                                  s.positions[a].imag() - s.positions[b].imag()));
  return h / (2.0 * M_PI);
}

inline double sqdist(Point a, Point b) { return std::norm(a - b); }

/// Classical RK4 with a fixed step on the vortex equations.
inline VortexState rk4(VortexState s, double t_end, std::size_t steps) {
  const double h = (t_end - s.time) / static_cast<double>(steps);
  auto shifted = [](VortexState base, const std::vector<Point>& k, double c) {
    for (std::size_t a = 0; a < base.size(); ++a) base.positions[a] += c * k[a];
    return base;
  };
  for (std::size_t k = 0; k < steps; ++k) {
    const auto k1 = velocity(s);
    const auto k2 = velocity(shifted(s, k1, h / 2));
    const auto k3 = velocity(shifted(s, k2, h / 2));
    const auto k4 = velocity(shifted(s, k3, h));
    for (std::size_t a = 0; a < s.size(); ++a) s.positions[a] += h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
    s.time += h;
  }
  return s;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace oracle
