#include <doctest.h>

#include <algorithm>
#include <set>

#include "support.hpp"
#include "vortexlab/collisions.hpp"
#include "vortexlab/scenario.hpp"

using namespace vortexlab;

namespace {

Trajectory synthetic(const std::vector<double>& g, std::size_t count, double t_end,
                     const std::function<std::vector<Point>(double)>& pos) {
  std::vector<VortexState> states;
  for (std::size_t k = 0; k < count; ++k) {
    VortexState s;
    s.strengths = g;
    s.time = t_end * k / (count - 1.0);
    s.positions = pos(s.time);
    states.push_back(s);
  }
  return trajectory_from_states(states);
}

std::set<std::size_t> members(const Cluster& c) { return {c.members.begin(), c.members.end()}; }

}  // namespace

TEST_CASE("trend detection") {
  std::vector<double> t, dec, osc, flat, rise;
  for (int k = 0; k < 400; ++k) {
    const double x = 0.05 * k;
    t.push_back(x);
    dec.push_back(std::exp(-x));
    osc.push_back(std::exp(-x) * (1.5 + std::sin(7.0 * x)));
    flat.push_back(0.5);
    rise.push_back(1e-4 * std::exp(0.1 * x));
  }
  CHECK(tends_to_zero(t, dec, 1e-3) == Trend::monotone);
  CHECK(tends_to_zero(t, osc, 1e-3) == Trend::sequential);
  CHECK(tends_to_zero(t, flat, 1e-3) == Trend::none);
  CHECK(tends_to_zero(t, rise, 1e-3) == Trend::none);
  // Decreasing but never below eps.
  CHECK(tends_to_zero(t, dec, 1e-12) == Trend::none);
}

TEST_CASE("collision time from a power law") {
  for (double k : {0.5, 1.0, 1.7}) {
    const double T = 2.0;
    std::vector<double> t{1.90, 1.95, 1.99}, b;
    for (double x : t) b.push_back(3.0 * std::pow(T - x, k));
    CHECK(estimate_collision_time(t, b) == doctest::Approx(T).epsilon(1e-8));
  }
  std::vector<double> t{0.0, 1.0, 2.0}, b{1.0, 2.0, 3.0};
  CHECK(std::isinf(estimate_collision_time(t, b)));
}

TEST_CASE("binary collision among four vortices") {
  const auto traj = synthetic({1.0, -0.5, 0.8, 1.2}, 400, 1.999, [](double t) {
    const double d = std::sqrt(2.0 - t);
    return std::vector<Point>{{-d / 2, 0.0}, {d / 2, 0.0}, {0.0, 3.0}, {3.0, 0.5}};
  });
  const auto rep = classify(traj, 0.05);
  REQUIRE_FALSE(rep.empty());
  const auto& c = rep.clusters.front();
  CHECK(members(c) == std::set<std::size_t>{0, 1});
  CHECK(c.kind == CollisionKind::n_collision);
  CHECK(c.proper);
  CHECK(c.t_star == doctest::Approx(2.0).epsilon(1e-6));
  // No other absolute cluster.
  for (const auto& o : rep.clusters)
    if (o.kind == CollisionKind::n_collision || o.kind == CollisionKind::sequential) CHECK(members(o) == members(c));
}

TEST_CASE("total collapse is not proper and leaves the shape fixed") {
  const auto traj = synthetic({1.0, 1.0, 1.0, 1.0}, 300, 0.999, [](double t) {
    const double s = 1.0 - t;
    return std::vector<Point>{{-s, -0.5 * s}, {s, -s}, {0.3 * s, s}, {-s, 0.7 * s}};
  });
  const auto rep = classify(traj, 1e-2);
  REQUIRE(rep.clusters.size() == 1);
  CHECK(rep.clusters[0].members.size() == 4);
  CHECK_FALSE(rep.clusters[0].proper);
  CHECK(rep.clusters[0].t_star == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("relative collision with expanding configuration") {
  // Pair (3,4) keeps unit separation while the whole system grows.
  const auto traj = synthetic({1.0, 2.0, -1.0, 0.5}, 400, 20.0, [](double t) {
    const double R = std::exp(0.5 * t);
    return std::vector<Point>{{-R, 0.0}, {R, 0.2 * R}, {0.0, R}, {1.0, R}};
  });
  const auto rep = classify(traj, 1e-3);
  bool relative = false;
  for (const auto& c : rep.clusters)
    if (c.kind == CollisionKind::relative || c.kind == CollisionKind::relative_sequential) {
      CHECK(members(c) == std::set<std::size_t>{2, 3});
      relative = true;
    } else {
      FAIL("unexpected absolute cluster");
    }
  CHECK(relative);
}

TEST_CASE("square relative equilibrium has no clusters") {
  VortexState s;
  s.strengths = {1, 1, 1, 1};
  s.positions = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
  IntegratorConfig cfg;
  cfg.sample_interval = 0.1;
  const auto rep = classify(integrate(s, 10.0, cfg), 1e-3);
  CHECK(rep.empty());
}

TEST_CASE("classify needs enough samples") {
  const auto traj = synthetic({1, 1}, 5, 1.0, [](double) { return std::vector<Point>{{0, 0}, {1, 0}}; });
  CHECK_THROWS_AS(classify(traj, 1e-3), InvalidArgument);
}

TEST_CASE("necessary conditions on a hand-worked vector") {
  // G = (1, 1, 1, -1): ternary {1,2,3}|{4} has product 3*(-1) = -3.
  const std::vector<double> g{1, 1, 1, -1};
  const auto cs = necessary_conditions(g, -6.0);
  REQUIRE(cs.size() == 7);
  const auto& t = cs[3];
  CHECK(t.kind == PatternKind::ternary);
  CHECK(t.groups[0] == std::vector<std::size_t>{0, 1, 2});
  CHECK(t.strength_product == doctest::Approx(-3.0));
  CHECK(t.table_admissible);
  CHECK(t.admissible);
  CHECK(*t.required_d == doctest::Approx(std::sqrt(2.0)));
  // Double binary {1,2}|{3,4}: product 2*0 = 0, inadmissible when M != 0.
  const auto& d = cs[4];
  CHECK(d.kind == PatternKind::double_binary);
  CHECK_FALSE(d.table_admissible);
  // M = 0 admits only patterns with a vanishing cluster sum, with any d.
  for (const auto& c : necessary_conditions(g, 0.0)) {
    const bool vanishing = std::abs(c.strength_product) < 1e-12;
    CHECK(c.table_admissible == vanishing);
    if (vanishing) CHECK(c.d_arbitrary);
  }
  CHECK_THROWS_AS(necessary_conditions(std::vector<double>{1, 0, 1, 1}, 1.0), InvalidArgument);
}

TEST_CASE("regular approach on rays and spirals") {
  std::vector<double> t;
  std::vector<std::vector<double>> ray, bent, spiral;
  const std::vector<double> dir{0.6, 0.0, 0.8};
  for (int k = 0; k < 200; ++k) {
    const double tau = 1.0 - k / 200.0;
    t.push_back(1.0 - tau);
    const double r = tau * tau;
    ray.push_back({r * dir[0], r * dir[1], r * dir[2]});
    bent.push_back({r * dir[0] + 1e-3 * r * r, r * dir[1], r * dir[2]});
    spiral.push_back({r * std::cos(30.0 * std::log(tau)), r * std::sin(30.0 * std::log(tau)), r});
  }
  const auto a = regular_approach(t, ray);
  CHECK(a.regular);
  REQUIRE(a.direction.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(a.direction[k] - dir[k]) < 1e-12);
  // A curved approach still has a limit direction once the tolerance admits its bend.
  RegularApproachOptions loose;
  loose.direction_tol = 1e-3;
  const auto c = regular_approach(t, bent, loose);
  CHECK(c.regular);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(c.direction[k] - dir[k]) < 1e-6);
  CHECK_FALSE(regular_approach(t, spiral).regular);
}

TEST_CASE("beta bound hypotheses") {
  const std::vector<double> g{1.0, -0.6, 0.9, 0.4};
  auto s = random_state(g, 7, 0.0);
  IntegratorConfig cfg;
  cfg.sample_interval = 0.05;
  const auto traj = integrate(s, 5.0, cfg);
  const auto b = beta12_virial_bound(traj, {0, 1});
  CHECK(b.applicable);
  CHECK(b.virial == doctest::Approx(virial(g)));
  CHECK(b.r_min > 0.0);
  CHECK(b.ratio >= 1.0);
  CHECK(std::isfinite(b.ratio));
  CHECK_FALSE(beta12_virial_bound(traj, {0, 2}).applicable);

  auto s2 = random_state(g, 7, 1.0);
  const auto b2 = beta12_virial_bound(integrate(s2, 1.0, cfg), {0, 1});
  CHECK_FALSE(b2.applicable);
  CHECK(b2.reason.find("M is not zero") != std::string::npos);
}
