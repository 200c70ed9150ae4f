#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "vortexlab/csv.hpp"
#include "vortexlab/dynamics.hpp"
#include "vortexlab/parallelogram.hpp"
#include "vortexlab/sqdist.hpp"

using namespace vortexlab;

namespace {

// Residuals of f1(beta) z = h (xy)^delta and (1 + beta) z = 2 (x + y) from scratch.
std::array<double, 2> residuals(double x, double y, double z, double g1, double g2, double h) {
  const double beta = std::abs(g2 / g1);
  const double delta = 2.0 * std::abs(g1 * g2) / (g1 * g1 + g2 * g2);
  const double f1 = std::pow(beta, 1.0 / (1.0 + beta * beta));
  const double l = f1 * z, r = h * std::pow(x * y, delta);
  return {std::abs(l - r) / std::max(std::abs(l), std::abs(r)), std::abs((1 + beta) * z - 2 * (x + y)) / (2 * (x + y))};
}

// Angle that makes b13 = beta b24, hence M = 0, for a given aspect.
double m_zero_angle(double g1, double g2, double aspect) {
  const double beta = std::abs(g2 / g1);
  return std::acos((beta - 1.0) * (aspect * aspect + 1.0) / (2.0 * aspect * (1.0 + beta)));
}

}  // namespace

TEST_CASE("parameters") {
  const auto p = ParallelogramParams::make(2.0, -0.5, 3.0);
  CHECK(p.beta == doctest::Approx(0.25));
  CHECK(p.delta == doctest::Approx(2.0 / 4.25));
  CHECK(p.alpha == doctest::Approx(1.0 / (1.0 - 4.0 / 4.25)));
  const double f1 = std::pow(0.25, 1.0 / (1.0 + 0.0625));
  CHECK(p.A == doctest::Approx(3.0 / f1));
  CHECK(p.gamma == doctest::Approx(3.0 * 1.25 / (2.0 * f1)));
  CHECK(std::isnan(ParallelogramParams::make(1.0, 2.0 - std::sqrt(3.0), 1.0).alpha));
  CHECK_THROWS_AS(ParallelogramParams::make(1.0, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(ParallelogramParams::make(1.0, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("delta identity") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 50; ++k) {
    const double g1 = oracle::strength(rng), g2 = oracle::strength(rng);
    const auto [l, r] = delta_identity(g1, g2);
    CHECK(l == doctest::Approx(r).epsilon(1e-14));
    CHECK(l == doctest::Approx(std::pow(std::abs(g1) + std::abs(g2), 2) / (g1 * g1 + g2 * g2)));
  }
}

TEST_CASE("collapse curve satisfies both constraints") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 200; ++k) {
    const double g1 = oracle::strength(rng), g2 = oracle::strength(rng), h = oracle::uniform(rng, 0.1, 5.0);
    const auto prm = ParallelogramParams::make(g1, g2, h);
    if (std::abs(prm.delta - 0.5) < 1e-3) continue;
    const double p = std::exp(oracle::uniform(rng, -8.0, 8.0));
    const auto c = collapse_curve(p, prm);
    const auto r = residuals(c.x, c.y, c.z, g1, g2, h);
    CHECK(r[0] < 1e-12);
    CHECK(r[1] < 1e-12);
    CHECK(c.y / c.x == doctest::Approx(p).epsilon(1e-12));
    const auto q = collapse_curve_q(1.0 / p, prm);
    CHECK(q.x == doctest::Approx(c.x).epsilon(1e-11));
    CHECK(q.z == doctest::Approx(c.z).epsilon(1e-11));
  }
  const auto prm = ParallelogramParams::make(1.0, 0.2, 1.0);
  CHECK_THROWS_AS(collapse_curve(0.0, prm), DomainError);
  CHECK_THROWS_AS(collapse_curve(1.0, ParallelogramParams::make(1.0, 2.0 - std::sqrt(3.0), 1.0)), DomainError);
}

TEST_CASE("limit direction of the collapsing branch") {
  for (double g2 : {0.05, -0.1, 0.2, -0.25}) {
    const auto prm = ParallelogramParams::make(1.0, g2, 1.0);
    REQUIRE(prm.delta < 0.5);
    const auto c = collapse_curve(1e-12, prm);
    const double n = std::sqrt(c.x * c.x + c.y * c.y + c.z * c.z);
    const auto d = limit_direction_of_curve(prm);
    const double zz = 2.0 / (1.0 + prm.beta), m = std::sqrt(1.0 + zz * zz);
    CHECK(d[0] == doctest::Approx(1.0 / m));
    CHECK(std::abs(d[1]) < 1e-15);
    CHECK(d[2] == doctest::Approx(zz / m));
    CHECK(c.x / n == doctest::Approx(d[0]).epsilon(1e-9));
    CHECK(c.z / n == doctest::Approx(d[2]).epsilon(1e-9));

    const auto pts = sample_collapse_branch(prm, CurveBranch::p, 50);
    REQUIRE(pts.size() == 50);
    for (std::size_t k = 1; k < pts.size(); ++k) CHECK(pts[k].x + pts[k].y + pts[k].z < pts[k - 1].x + pts[k - 1].y + pts[k - 1].z);
  }
  CHECK_THROWS_AS(limit_direction_of_curve(ParallelogramParams::make(1.0, 0.8, 1.0)), DomainError);
  CHECK_THROWS_AS(sample_collapse_branch(ParallelogramParams::make(1.0, 0.8, 1.0), CurveBranch::p, 10), DomainError);
}

TEST_CASE("curve csv") {
  const auto prm = ParallelogramParams::make(1.0, 0.1, 2.0);
  std::ostringstream os;
  write_curve_csv(os, sample_collapse_branch(prm, CurveBranch::q, 5));
  std::istringstream in(os.str());
  const auto table = read_csv(in);
  CHECK(table.header == std::vector<std::string>{"p", "x", "y", "z", "residual_a", "residual_b"});
  CHECK(table.rows.size() == 5);
}

TEST_CASE("parallelogram state geometry") {
  const auto s = parallelogram_state(1.0, -0.4, 1.7, 1.1);
  const auto b = squared_distances(s);  // 12 13 14 23 24 34
  CHECK(b[0] == doctest::Approx(b[5]));
  CHECK(b[2] == doctest::Approx(b[3]));
  CHECK(b[1] + b[4] == doctest::Approx(2.0 * (b[0] + b[2])));
  CHECK(s.strengths == std::vector<double>{1.0, -0.4, 1.0, -0.4});
}

TEST_CASE("flow preserves opposite sides") {
  const auto s = parallelogram_state(1.0, -0.4, 1.5, 1.2);
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  cfg.sample_interval = 0.1;
  const auto rep = check_preservation(integrate(s, 10.0, cfg));
  CHECK(rep.max_rel[0] < 1e-9);
  CHECK(rep.max_rel[2] < 1e-9);
  CHECK(rep.law_cyclic_rel < 1e-9);
  // Diagonals are not equal for a non-rectangular start.
  CHECK(rep.max_rel[1] > 1e-3);
  auto bad = s;
  bad.positions[0] += Point{0.1, 0.0};
  CHECK_THROWS_AS(check_preservation(integrate(bad, 1.0, cfg)), InvalidArgument);
}

TEST_CASE("M = 0 parallelogram moves on the constraint surface") {
  const double g1 = 1.0, g2 = -0.4, aspect = 1.5;
  const auto s = parallelogram_state(g1, g2, aspect, m_zero_angle(g1, g2, aspect));
  REQUIRE(std::abs(invariants(s).m_pair_sum) < 1e-12);
  const double h = std::exp(log_exp_energy(s) / (g1 * g1 + g2 * g2));
  const auto prm = ParallelogramParams::make(g1, g2, h);
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  cfg.sample_interval = 0.2;
  for (const auto& smp : integrate(s, 20.0, cfg).samples) {
    const auto b = squared_distances(smp.state);
    const auto r = residuals(b[0], b[2], b[4], g1, g2, h);
    CHECK(r[0] < 1e-9);
    CHECK(r[1] < 1e-9);
    const auto lib = constraint_residuals(b[0], b[2], b[4], prm);
    CHECK(lib[0] == doctest::Approx(r[0]).epsilon(1e-6).scale(1e-12));
  }
}
