#include <doctest.h>

#include <array>

#include "support.hpp"
#include "vortexlab/sqdist.hpp"

using namespace vortexlab;

namespace {

using P3 = std::array<double, 3>;

double d2(const P3& a, const P3& b) {
  return (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]);
}

// Squared distances of four space points in pair order (12, 13, 14, 23, 24, 34).
std::vector<double> tetra_b(const std::array<P3, 4>& p) {
  return {d2(p[0], p[1]), d2(p[0], p[2]), d2(p[0], p[3]), d2(p[1], p[2]), d2(p[1], p[3]), d2(p[2], p[3])};
}

double tetra_volume(const std::array<P3, 4>& p) {
  P3 u, v, w;
  for (int k = 0; k < 3; ++k) {
    u[k] = p[1][k] - p[0][k];
    v[k] = p[2][k] - p[0][k];
    w[k] = p[3][k] - p[0][k];
  }
  return std::abs(u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) +
                  u[2] * (v[0] * w[1] - v[1] * w[0])) /
         6.0;
}

}  // namespace

TEST_CASE("squared distances and shape normalization") {
  std::mt19937_64 rng(31);
  const auto s = oracle::random_state(rng, 5);
  const auto b = squared_distances(s);
  const auto pairs = pair_list(5);
  REQUIRE(b.size() == pairs.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    CHECK(b[k] == doctest::Approx(oracle::sqdist(s.positions[pairs[k].first], s.positions[pairs[k].second])));
    sum += b[k];
  }
  const auto sh = to_shape(s);
  CHECK(sh.rho == doctest::Approx(sum));
  double bs = 0.0;
  for (double x : sh.beta) bs += x;
  CHECK(bs == doctest::Approx(1.0));
  CHECK(vortex_count_for_pairs(10) == 5);
  CHECK_THROWS_AS(to_shape(std::vector<double>(6, 0.0)), DomainError);
}

TEST_CASE("oriented area sign and magnitude") {
  // Unit right triangle; area 1/2 with sign fixed by the documented formula.
  const double a = oriented_area({0, 0}, {1, 0}, {0, 1});
  CHECK(std::abs(a) == doctest::Approx(0.5));
  CHECK(oriented_area({0, 0}, {0, 1}, {1, 0}) == doctest::Approx(-a));
  // Im(conj(zi - zk)(zk - zj)) / 2 by hand.
  const Point zi{0.3, -0.2}, zk{1.1, 0.4}, zj{-0.5, 0.9};
  CHECK(oriented_area(zi, zk, zj) == doctest::Approx(std::imag(std::conj(zi - zk) * (zk - zj)) / 2.0));
}

TEST_CASE("squared-distance rhs equals 2 Re(conj(z_i - z_j)(v_i - v_j))") {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 20; ++k) {
    const auto s = oracle::random_state(rng, 3 + k % 3);
    const auto v = oracle::velocity(s);
    const auto rhs = sqdist_rhs(s);
    const auto pairs = pair_list(s.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto [i, j] = pairs[p];
      const double expect = 2.0 * std::real(std::conj(s.positions[i] - s.positions[j]) * (v[i] - v[j]));
      CHECK(rhs[p] == doctest::Approx(expect).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("Cayley-Menger determinant is 288 V^2") {
  std::mt19937_64 rng(33);
  for (int k = 0; k < 20; ++k) {
    std::array<P3, 4> p;
    for (auto& q : p)
      for (auto& c : q) c = oracle::uniform(rng, -1.0, 1.0);
    const double vol = tetra_volume(p);
    CHECK(cayley_menger(tetra_b(p)) == doctest::Approx(288.0 * vol * vol).epsilon(1e-10).scale(1e-12));
    for (auto& q : p) q[2] = 0.0;
    CHECK(std::abs(cayley_menger(tetra_b(p))) < 1e-12);
  }
}

TEST_CASE("shape validity") {
  std::mt19937_64 rng(34);
  const auto s = oracle::random_state(rng, 4);
  CHECK(shape_valid(squared_distances(s), 1e-10).valid);

  const std::array<P3, 4> tet{P3{0, 0, 0}, P3{1, 0, 0}, P3{0, 1, 0}, P3{0, 0, 1}};
  const auto v = shape_valid(tetra_b(tet), 1e-10);
  CHECK_FALSE(v.valid);
  REQUIRE(v.cayley_menger.size() == 1);
  CHECK(v.cayley_menger[0] == doctest::Approx(288.0 / 36.0));

  // Triangle inequality violated: sides 1, 1, 3.
  const auto bad = shape_valid(std::vector<double>{1.0, 1.0, 9.0}, 1e-10);
  CHECK_FALSE(bad.valid);
  CHECK(bad.cone_residuals[0] < 0.0);
}

TEST_CASE("exponentiated energy factorizes through rho and beta") {
  std::mt19937_64 rng(35);
  for (int k = 0; k < 20; ++k) {
    const auto s = oracle::random_state(rng, 4);
    CHECK(energy_relation_residual(s) < 1e-12);
    // A wrong energy makes the residual large.
    CHECK(energy_relation_residual(s, oracle::energy(s) + 0.1) > 1e-3);
  }
}
