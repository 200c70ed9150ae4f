#include "vortexlab/sqdist.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace vortexlab {

std::size_t vortex_count_for_pairs(std::size_t pairs) {
  std::size_t n = 2;
  while (pair_count(n) < pairs) ++n;
  if (pair_count(n) != pairs) throw InvalidArgument("length is not a pair count C(N,2)");
  return n;
}

std::vector<double> squared_distances(const VortexState& state) {
  std::vector<double> b;
  b.reserve(pair_count(state.size()));
  for (const auto& [i, j] : pair_list(state.size())) b.push_back(std::norm(state.positions[i] - state.positions[j]));
  return b;
}

ShapePoint to_shape(std::span<const double> b) {
  ShapePoint s;
  s.n = vortex_count_for_pairs(b.size());
  s.b.assign(b.begin(), b.end());
  for (double v : s.b) {
    if (v < 0.0) throw DomainError("squared distances must be non-negative");
    s.rho += v;
  }
  if (!(s.rho > 0.0)) throw DomainError("shape undefined at total collision (all squared distances vanish)");
  s.beta.reserve(s.b.size());
  for (double v : s.b) s.beta.push_back(v / s.rho);
  return s;
}

ShapePoint to_shape(const VortexState& state) {
  const auto b = squared_distances(state);
  return to_shape(b);
}

double oriented_area(Point zi, Point zk, Point zj) { return 0.5 * cross(zi - zk, zk - zj); }

std::vector<double> sqdist_rhs(const VortexState& state) {
  state.validate();
  const std::size_t n = state.size();
  const auto b = squared_distances(state);
  std::vector<double> out;
  out.reserve(b.size());
  for (const auto& [i, j] : pair_list(n)) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      const double area = oriented_area(state.positions[i], state.positions[k], state.positions[j]);
      s += state.strengths[k] * area * (1.0 / b[pair_index(i, k, n)] - 1.0 / b[pair_index(k, j, n)]);
    }
    out.push_back(2.0 / kPi * s);
  }
  return out;
}

double cayley_menger(std::span<const double> b) {
  if (b.size() != 6) throw InvalidArgument("Cayley-Menger determinant needs six squared distances");
  Eigen::Matrix<double, 5, 5> m;
  m.setZero();
  for (int k = 1; k < 5; ++k) m(0, k) = m(k, 0) = 1.0;
  const int idx[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) m(i + 1, j + 1) = b[static_cast<std::size_t>(idx[i][j])];
  return m.determinant();
}

ShapeValidity shape_valid(std::span<const double> b, double tol) {
  const std::size_t n = vortex_count_for_pairs(b.size());
  ShapeValidity out;
  for (double v : b) {
    out.scale = std::max(out.scale, v);
    if (v < 0.0) out.valid = false;
  }
  const double s2 = out.scale * out.scale;
  auto at = [&](std::size_t i, std::size_t j) { return b[pair_index(i, j, n)]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const double x = at(i, j), y = at(j, k), z = at(i, k);
        const double r = 2.0 * (x * y + x * z + y * z) - (x * x + y * y + z * z);
        out.cone_residuals.push_back(r);
        if (r < -tol * s2) out.valid = false;
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          const double sub[6] = {at(i, j), at(i, k), at(i, l), at(j, k), at(j, l), at(k, l)};
          const double cm = cayley_menger(sub);
          out.cayley_menger.push_back(cm);
          if (std::abs(cm) > tol * s2 * s2) out.valid = false;
        }
  return out;
}

double energy_relation_residual(const VortexState& state) { return energy_relation_residual(state, energy(state)); }

double energy_relation_residual(const VortexState& state, double h_energy) {
  const ShapePoint shape = to_shape(state);
  const double log_h = -4.0 * kPi * h_energy;
  const double v = virial(state.strengths);
  double log_prod = 0.0;
  std::size_t p = 0;
  for (const auto& [i, j] : pair_list(state.size()))
    log_prod += state.strengths[i] * state.strengths[j] * std::log(shape.beta[p++]);
  return std::abs(std::expm1(log_h - v * std::log(shape.rho) - log_prod));
}

}  // namespace vortexlab
