#include <doctest.h>

#include "support.hpp"
#include "vortexlab/binary_chart.hpp"

using namespace vortexlab;

namespace {

struct Direct {
  Point q_dot, zeta_dot, s0, s1;
};

// Chart velocity straight from the Cartesian field.
Direct direct(const VortexState& s, std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  const auto v = oracle::velocity(s);
  const double ga = s.strengths[a], gb = s.strengths[b];
  return {v[b] - v[a], (ga * v[a] + gb * v[b]) / (ga + gb), v[c], v[d]};
}

VortexState near_binary(std::mt19937_64& rng, double sep) {
  auto s = oracle::random_state(rng, 4, 0.5);
  s.positions[1] = s.positions[0] + sep * std::polar(1.0, oracle::uniform(rng, 0.0, 2.0 * M_PI));
  return s;
}

}  // namespace

TEST_CASE("chart round trip") {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 20; ++k) {
    const auto s = oracle::random_state(rng, 4);
    for (auto pr : {std::pair<std::size_t, std::size_t>{0, 1}, {0, 3}, {1, 2}}) {
      if (std::abs(s.strengths[pr.first] + s.strengths[pr.second]) < 1e-3) continue;
      const auto c = to_binary_chart(s, pr);
      CHECK(std::abs(c.q - (s.positions[pr.second] - s.positions[pr.first])) < 1e-15);
      const auto back = from_binary_chart(c);
      for (std::size_t a = 0; a < 4; ++a) CHECK(std::abs(back.positions[a] - s.positions[a]) < 1e-14);
    }
  }
  VortexState s;
  s.strengths = {1.0, -1.0, 1.0, 1.0};
  s.positions = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  CHECK_THROWS_AS(to_binary_chart(s, {0, 1}), InvalidArgument);
}

TEST_CASE("displayed vector field equals the Cartesian field in the chart") {
  std::mt19937_64 rng(52);
  for (int k = 0; k < 30; ++k) {
    const auto s = oracle::random_state(rng, 4);
    if (std::abs(s.strengths[0] + s.strengths[3]) < 1e-2) continue;
    const auto c = to_binary_chart(s, {0, 3});
    const auto d = direct(s, 0, 3, 1, 2);
    for (const auto& f : {binary_vector_field(c), pushforward_velocity(c)}) {
      const double scale = 1.0 + std::abs(d.q_dot);
      CHECK(std::abs(f.q_dot - d.q_dot) < 1e-12 * scale);
      CHECK(std::abs(f.zeta_dot - d.zeta_dot) < 1e-12 * (1.0 + std::abs(d.zeta_dot)));
      CHECK(std::abs(f.spectator_dot[0] - d.s0) < 1e-12 * (1.0 + std::abs(d.s0)));
      CHECK(std::abs(f.spectator_dot[1] - d.s1) < 1e-12 * (1.0 + std::abs(d.s1)));
    }
  }
}

TEST_CASE("perturbation split recombines to q_dot") {
  std::mt19937_64 rng(53);
  for (int k = 0; k < 30; ++k) {
    const auto s = oracle::random_state(rng, 4);
    if (std::abs(s.strengths[0] + s.strengths[1]) < 1e-2) continue;
    const auto c = to_binary_chart(s, {0, 1});
    const auto sp = perturbation_split(c);
    const auto d = direct(s, 0, 1, 2, 3);
    CHECK(std::abs(sp.radial + sp.perturbation - d.q_dot) < 1e-12 * (1.0 + std::abs(d.q_dot)));
    // The radial part is parallel to i q.
    CHECK(std::abs(std::imag(sp.radial / (Point{0, 1} * c.q))) < 1e-12);
  }
}

TEST_CASE("tight binary limits") {
  std::mt19937_64 rng(54);
  auto s = near_binary(rng, 1e-2);
  s.strengths = {0.8, 0.5, -1.1, 0.7};
  double prev_ratio = 1e300, prev_log = 1e300, prev_f1 = 1e300, first_ratio = 0.0;
  for (double sep : {1e-2, 1e-3, 1e-4}) {
    auto t = s;
    t.positions[1] = t.positions[0] + sep * (s.positions[1] - s.positions[0]) / std::abs(s.positions[1] - s.positions[0]);
    const auto c = to_binary_chart(t, {0, 1});
    const auto sp = perturbation_split(c);
    double lim = 0.0;
    for (std::size_t j : {2u, 3u}) lim += t.strengths[j] / std::norm(c.zeta - t.positions[j]);
    CHECK(sp.f1_limit == doctest::Approx(lim).epsilon(1e-12));
    const double f1_gap = std::abs(sp.f1 - sp.f1_limit);
    const double ratio = timescale_ratio(c);
    const double lr = std::abs(energy_product_log_ratio(c));
    if (sep == 1e-2) first_ratio = ratio;
    CHECK(f1_gap < prev_f1);
    CHECK(ratio < prev_ratio);
    CHECK(lr < prev_log);
    prev_f1 = f1_gap;
    prev_ratio = ratio;
    prev_log = lr;
  }
  // q_dot grows like 1/|q| while spectators stay slow, so the ratio is linear in |q|.
  CHECK(prev_ratio / first_ratio == doctest::Approx(1e-2).epsilon(0.05));
  CHECK(prev_log < 1e-3);
}

TEST_CASE("collapsed three-vortex system") {
  std::mt19937_64 rng(55);
  auto s = oracle::random_state(rng, 4);
  s.strengths = {0.8, 0.5, -1.1, 0.7};
  const auto c = to_binary_chart(s, {0, 1});
  const auto t = collapsed_three_vortex(c);
  CHECK(t.strengths == std::vector<double>{1.3, -1.1, 0.7});
  CHECK(std::abs(t.positions[0] - (0.8 * s.positions[0] + 0.5 * s.positions[1]) / 1.3) < 1e-15);
}
