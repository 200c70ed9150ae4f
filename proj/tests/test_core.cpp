#include <doctest.h>

#include "support.hpp"
#include "vortexlab/core.hpp"
#include "vortexlab/dynamics.hpp"

using namespace vortexlab;

TEST_CASE("pair ordering is lexicographic") {
  const auto p = pair_list(4);
  REQUIRE(p.size() == 6);
  CHECK(p[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(p[2] == std::pair<std::size_t, std::size_t>{0, 3});
  CHECK(p[5] == std::pair<std::size_t, std::size_t>{2, 3});
  for (std::size_t k = 0; k < p.size(); ++k) CHECK(pair_index(p[k].first, p[k].second, 4) == k);
  CHECK(pair_count(7) == 21);
}

TEST_CASE("validate rejects bad states") {
  VortexState s;
  s.strengths = {1.0};
  s.positions = {{0, 0}};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.strengths = {1.0, 0.0};
  s.positions = {{0, 0}, {1, 0}};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.strengths = {1.0, 2.0};
  s.positions = {{0.5, 0.5}, {0.5, 0.5}};
  CHECK_THROWS_AS(s.validate(), SingularConfiguration);
}

TEST_CASE("energy and exponentiated energy against direct sums") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto s = oracle::random_state(rng, 3 + k % 4);
    CHECK(energy(s) == doctest::Approx(oracle::energy(s)).epsilon(1e-13));
    CHECK(log_exp_energy(s) == doctest::Approx(-4.0 * M_PI * oracle::energy(s)).epsilon(1e-12));
  }
}

TEST_CASE("M from pairs equals Gamma I - |Z|^2") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 20; ++k) {
    const auto s = oracle::random_state(rng, 4);
    const auto inv = invariants(s);
    double m = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b)
        m += s.strengths[a] * s.strengths[b] * oracle::sqdist(s.positions[a], s.positions[b]);
    CHECK(inv.m_pair_sum == doctest::Approx(m).epsilon(1e-12));
    if (std::abs(inv.total_strength) > 0.1) CHECK(inv.m_from_moment == doctest::Approx(m).epsilon(1e-10));
  }
}

TEST_CASE("kinematic virial is V / 2pi") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 20; ++k) {
    const auto s = oracle::random_state(rng, 2 + k % 5);
    const auto v = oracle::velocity(s);
    double kv = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a) kv += s.strengths[a] * cross(s.positions[a], v[a]);
    double vir = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b) vir += s.strengths[a] * s.strengths[b];
    CHECK(kinematic_virial(s) == doctest::Approx(kv).epsilon(1e-12));
    CHECK(2.0 * M_PI * kinematic_virial(s) == doctest::Approx(vir).epsilon(1e-12));
  }
}

TEST_CASE("two equal vortices rotate rigidly") {
  VortexState s;
  s.strengths = {1.0, 1.0};
  s.positions = {{-0.5, 0.0}, {0.5, 0.0}};
  const auto v = velocity_field(s);
  // Angular speed (G1+G2)/(2 pi d^2) with d = 1.
  CHECK(v[0].imag() == doctest::Approx(-1.0 / (2.0 * M_PI) * 1.0));
  CHECK(v[1].imag() == doctest::Approx(1.0 / (2.0 * M_PI)));
  CHECK(std::abs(v[0].real()) < 1e-15);
}
