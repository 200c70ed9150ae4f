#include "vortexlab/collisions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vortexlab/sqdist.hpp"

namespace vortexlab {

std::string_view to_string(CollisionKind k) {
  switch (k) {
    case CollisionKind::n_collision: return "n_collision";
    case CollisionKind::sequential: return "sequential";
    case CollisionKind::relative: return "relative";
    case CollisionKind::relative_sequential: return "relative_sequential";
  }
  return "unknown";
}

namespace {

double safe_log(double v) { return std::log(std::max(v, std::numeric_limits<double>::min())); }

// Least-squares slope of log(v) against t.
double log_linear_slope(std::span<const double> t, std::span<const double> v) {
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  double mt = 0.0, my = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mt += t[k];
    my += safe_log(v[k]);
  }
  mt /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxy += (t[k] - mt) * (safe_log(v[k]) - my);
    sxx += (t[k] - mt) * (t[k] - mt);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

std::size_t window_start(std::size_t n, double fraction) {
  const auto m = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
  return n > m ? n - m : 0;
}

struct TrendResult {
  Trend trend = Trend::none;
  ClusterEvidence evidence;
};

TrendResult trend_with_evidence(std::span<const double> t, std::span<const double> v, double eps,
                                const TrendOptions& opt) {
  TrendResult out;
  const std::size_t n = t.size();
  if (n < 3) return out;
  const std::size_t w0 = window_start(n, opt.window_fraction);
  const auto tw = t.subspan(w0);
  const auto vw = v.subspan(w0);

  bool strictly = true;
  for (std::size_t k = 1; k < vw.size(); ++k) strictly = strictly && vw[k] < vw[k - 1];
  const double slope = log_linear_slope(tw, vw);
  if (strictly && vw.back() < eps && slope < 0.0) {
    out.trend = Trend::monotone;
    out.evidence = {{tw.begin(), tw.end()}, {vw.begin(), vw.end()}, slope};
    return out;
  }

  std::vector<double> rt{tw[0]}, rv{vw[0]};
  for (std::size_t k = 1; k < vw.size(); ++k) {
    if (vw[k] < rv.back()) {
      rt.push_back(tw[k]);
      rv.push_back(vw[k]);
    }
  }
  const double rslope = log_linear_slope(rt, rv);
  if (rv.size() >= 3 && rv.back() < eps && rslope < 0.0) {
    out.trend = Trend::sequential;
    out.evidence = {std::move(rt), std::move(rv), rslope};
  }
  return out;
}

// Series of max intra-cluster value; `pair_value` maps (sample, pair index) to a distance.
template <class F>
std::vector<double> cluster_series(const std::vector<std::size_t>& members, std::size_t n, std::size_t samples,
                                   F&& pair_value) {
  std::vector<double> out(samples, 0.0);
  for (std::size_t s = 0; s < samples; ++s)
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        out[s] = std::max(out[s], pair_value(s, pair_index(members[a], members[b], n)));
  return out;
}

std::vector<std::vector<std::size_t>> subsets_of_size_at_least_two(std::size_t n, std::size_t max_size) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(i);
    if (s.size() >= 2 && s.size() <= max_size) out.push_back(std::move(s));
  }
  return out;
}

bool is_strict_subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  for (auto x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) return true;
  return false;
}

struct Candidate {
  std::vector<std::size_t> members;
  TrendResult result;
  double final_value;
};

// Runs the trend test on every subset and keeps maximal, pairwise disjoint
// clusters. A cluster is proper when no strict superset reaches below eps,
// certified or not.
template <class F>
std::vector<Cluster> detect_family(std::span<const double> times, std::size_t n, std::size_t max_size, double eps,
                                   const TrendOptions& opt, bool relative, F&& pair_value) {
  std::vector<Candidate> all;
  for (auto& s : subsets_of_size_at_least_two(n, max_size)) {
    auto series = cluster_series(s, n, times.size(), pair_value);
    Candidate c{std::move(s), trend_with_evidence(times, series, eps, opt), series.back()};
    all.push_back(std::move(c));
  }
  std::vector<const Candidate*> hits;
  for (const auto& c : all)
    if (c.result.trend != Trend::none) hits.push_back(&c);
  // Largest first; certified monotone before sequential.
  std::stable_sort(hits.begin(), hits.end(), [](const Candidate* a, const Candidate* b) {
    if (a->members.size() != b->members.size()) return a->members.size() > b->members.size();
    return a->result.trend == Trend::monotone && b->result.trend != Trend::monotone;
  });

  std::vector<Cluster> out;
  for (const Candidate* c : hits) {
    bool overlaps = false;
    for (const auto& taken : out) overlaps = overlaps || intersects(taken.members, c->members);
    if (overlaps) continue;
    Cluster cl;
    cl.members = c->members;
    const bool monotone = c->result.trend == Trend::monotone;
    cl.kind = relative ? (monotone ? CollisionKind::relative : CollisionKind::relative_sequential)
                       : (monotone ? CollisionKind::n_collision : CollisionKind::sequential);
    bool proper = cl.members.size() < n;
    for (const auto& other : all)
      if (is_strict_subset(cl.members, other.members) && (other.result.trend != Trend::none || other.final_value < eps))
        proper = false;
    cl.proper = proper;
    cl.evidence = c->result.evidence;
    std::vector<double> sq(cl.evidence.values.size());
    std::transform(cl.evidence.values.begin(), cl.evidence.values.end(), sq.begin(), [](double v) { return v * v; });
    cl.t_star = estimate_collision_time(cl.evidence.times, sq);
    out.push_back(std::move(cl));
  }
  return out;
}

}  // namespace

Trend tends_to_zero(std::span<const double> t, std::span<const double> v, double eps, const TrendOptions& opt) {
  if (t.size() != v.size()) throw InvalidArgument("time and value series differ in length");
  return trend_with_evidence(t, v, eps, opt).trend;
}

double estimate_collision_time(std::span<const double> t, std::span<const double> b) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (t.size() < 3 || b.size() != t.size()) return inf;
  const std::size_t n = t.size();
  const double t1 = t[n - 3], t2 = t[n - 2], t3 = t[n - 1];
  const double b1 = b[n - 3], b2 = b[n - 2], b3 = b[n - 1];
  if (!(b1 > b2 && b2 > b3 && b3 > 0.0) || !(t1 < t2 && t2 < t3)) return inf;
  const double target = std::log(b1 / b2) / std::log(b2 / b3);
  // g(T) increases from 0 (T -> t3) to (t2 - t1)/(t3 - t2) (T -> infinity).
  auto g = [&](double log_gap) {
    const double T = t3 + std::exp(log_gap);
    return std::log((T - t1) / (T - t2)) / std::log((T - t2) / (T - t3));
  };
  const double span = t3 - t1;
  double lo = std::log(1e-14 * span), hi = std::log(1e14 * span);
  if (!(g(lo) < target) || !(g(hi) > target)) return inf;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < target) lo = mid;
    else hi = mid;
  }
  return t3 + std::exp(0.5 * (lo + hi));
}

CollisionReport classify(const Trajectory& traj, double eps, const ClassifyOptions& opt) {
  if (traj.samples.size() < 10) throw InvalidArgument("classification needs at least 10 samples");
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  const std::size_t n = traj.samples.front().state.size();
  const std::size_t m = traj.samples.size();
  std::vector<double> times(m);
  std::vector<std::vector<double>> dist(m), rel(m);
  for (std::size_t s = 0; s < m; ++s) {
    const auto& st = traj.samples[s].state;
    times[s] = st.time;
    const auto b = squared_distances(st);
    double rho = 0.0;
    for (double v : b) rho += v;
    dist[s].resize(b.size());
    rel[s].resize(b.size());
    for (std::size_t p = 0; p < b.size(); ++p) {
      dist[s][p] = std::sqrt(b[p]);
      rel[s][p] = rho > 0.0 ? std::sqrt(b[p] / rho) : 0.0;
    }
  }

  CollisionReport report;
  report.n = n;
  report.eps = eps;
  auto absolute = detect_family(times, n, n, eps, opt.trend, false,
                                [&](std::size_t s, std::size_t p) { return dist[s][p]; });
  auto relative = detect_family(times, n, n - 1, eps, opt.trend, true,
                                [&](std::size_t s, std::size_t p) { return rel[s][p]; });

  // Two limit groups: absolute clusters plus untouched vortices.
  std::vector<std::vector<std::size_t>> groups;
  std::vector<bool> used(n, false);
  for (const auto& c : absolute) {
    groups.push_back(c.members);
    for (auto i : c.members) used[i] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!used[i]) groups.push_back({i});
  if (!absolute.empty() && groups.size() == 2) {
    const auto& last = traj.samples.back().state;
    auto centroid = [&](const std::vector<std::size_t>& g) {
      Point c{0.0, 0.0};
      for (auto i : g) c += last.positions[i];
      return c / static_cast<double>(g.size());
    };
    report.limit_separation = std::abs(centroid(groups[0]) - centroid(groups[1]));
  }

  report.clusters = std::move(absolute);
  for (auto& c : relative) report.clusters.push_back(std::move(c));
  return report;
}

std::vector<CollapseCondition> necessary_conditions(std::span<const double> g, double m, double m_tol) {
  if (g.size() != 4) throw InvalidArgument("necessary conditions are defined for four vortices");
  double gabs = 0.0;
  for (double v : g) {
    if (v == 0.0) throw InvalidArgument("all strengths must be nonzero");
    gabs += std::abs(v);
  }
  const double zero_tol = 1e-12 * gabs;
  const bool m_zero = std::abs(m) <= m_tol;
  const bool same_sign = std::all_of(g.begin(), g.end(), [&](double v) { return (v > 0) == (g[0] > 0); });

  std::vector<CollapseCondition> out;
  auto finish = [&](CollapseCondition c, double cluster_sum, double factor_product) {
    c.strength_product = factor_product;
    if (m_zero) {
      c.table_admissible = std::abs(cluster_sum) <= zero_tol;
      c.d_arbitrary = c.table_admissible;
      c.reason = c.table_admissible ? "M = 0 and the colliding strengths sum to zero"
                                    : "M = 0 requires the colliding strengths to sum to zero";
    } else if (std::abs(cluster_sum) <= zero_tol) {
      c.reason = "M != 0 requires a nonzero strength sum";
    } else if (m * factor_product > 0.0) {
      c.table_admissible = true;
      c.required_d = std::sqrt(m / factor_product);
      c.reason = "M has the sign of the strength product";
    } else {
      c.reason = "M and the strength product have opposite signs";
    }
    c.admissible = c.table_admissible;
    if (same_sign) {
      c.admissible = false;
      c.reason = "bounded collision requires mixed signs";
    }
    out.push_back(std::move(c));
  };

  for (std::size_t lone = 0; lone < 4; ++lone) {
    CollapseCondition c;
    c.kind = PatternKind::ternary;
    std::vector<std::size_t> trio;
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      if (i != lone) {
        trio.push_back(i);
        sum += g[i];
      }
    c.groups = {trio, {lone}};
    finish(std::move(c), sum, sum * g[lone]);
  }
  const std::size_t pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  for (const auto& p : pairings) {
    CollapseCondition c;
    c.kind = PatternKind::double_binary;
    c.groups = {{p[0], p[1]}, {p[2], p[3]}};
    const double s1 = g[p[0]] + g[p[1]], s2 = g[p[2]] + g[p[3]];
    // For M = 0 the table asks for Gamma_ij Gamma_kl = 0, i.e. either sum vanishing.
    const double governing = std::abs(s1) <= zero_tol || std::abs(s2) <= zero_tol ? 0.0 : s1 * s2;
    finish(std::move(c), governing, s1 * s2);
  }
  return out;
}

RegularApproach regular_approach(std::span<const double> t, const std::vector<std::vector<double>>& points,
                                 const RegularApproachOptions& opt) {
  const std::size_t n = points.size();
  if (n < 20 || t.size() != n) throw InvalidArgument("regular approach needs at least 20 samples");
  const std::size_t dim = points.front().size();
  std::vector<double> norms(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (points[k].size() != dim) throw InvalidArgument("sample dimensions differ");
    double s = 0.0;
    for (double v : points[k]) s += v * v;
    norms[k] = std::sqrt(s);
    if (k > 0 && !(norms[k] < norms[k - 1])) throw InvalidArgument("sample norms must be strictly decreasing");
    if (k > 0 && !(t[k] > t[k - 1])) throw InvalidArgument("sample times must be increasing");
  }
  if (!(norms.back() > 0.0)) throw InvalidArgument("curve must not reach the origin");

  auto unit = [&](std::size_t k) {
    std::vector<double> u(dim);
    for (std::size_t d = 0; d < dim; ++d) u[d] = points[k][d] / norms[k];
    return u;
  };
  auto distance = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return std::sqrt(s);
  };

  const auto tail = std::max<std::size_t>(5, static_cast<std::size_t>(std::ceil(opt.tail_fraction * static_cast<double>(n))));
  const std::size_t start = n - tail;
  const std::size_t prev_start = start >= tail ? start - tail : 0;
  double tv_tail = 0.0, tv_prev = 0.0;
  for (std::size_t k = start; k + 1 < n; ++k) tv_tail += distance(unit(k), unit(k + 1));
  for (std::size_t k = prev_start; k + 1 <= start; ++k) tv_prev += distance(unit(k), unit(k + 1));

  RegularApproach out;
  out.direction = unit(n - 1);
  out.tail_variation = tv_tail;

  std::vector<double> vel(dim);
  double vn = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    vel[d] = (points[n - 1][d] - points[n - 2][d]) / (t[n - 1] - t[n - 2]);
    vn += vel[d] * vel[d];
  }
  vn = std::sqrt(vn);
  double mismatch = 0.0;
  for (std::size_t d = 0; d < dim; ++d) mismatch += std::pow(vel[d] / vn + out.direction[d], 2);
  out.velocity_mismatch = std::sqrt(mismatch);

  if (!(tv_tail <= opt.direction_tol)) {
    out.reason = "normalized position still varies over the tail";
  } else if (!(tv_tail <= tv_prev || tv_tail <= 1e-14)) {
    out.reason = "normalized position variation is not decreasing";
  } else if (!(out.velocity_mismatch <= opt.velocity_tol)) {
    out.reason = "normalized velocity does not converge to minus the position direction";
  } else {
    out.regular = true;
    out.reason = "normalized position and velocity converge";
  }
  return out;
}

BoundReport beta12_virial_bound(const Trajectory& traj, std::pair<std::size_t, std::size_t> pair,
                                double window_fraction) {
  BoundReport out;
  if (traj.samples.size() < 3) throw InvalidArgument("bound report needs at least 3 samples");
  const auto& s0 = traj.samples.front().state;
  const std::size_t n = s0.size();
  const auto& g = s0.strengths;
  auto [i, j] = pair;
  if (i > j) std::swap(i, j);
  if (n != 4 || j >= n || i == j) {
    out.reason = "defined for a pair of a four-vortex system";
    return out;
  }
  out.virial = virial(g);
  const double gij = g[i] * g[j];
  if (!(gij < 0.0)) {
    out.reason = "pair strengths must have opposite signs";
    return out;
  }
  std::vector<std::size_t> others;
  for (std::size_t k = 0; k < n; ++k)
    if (k != i && k != j) others.push_back(k);
  const double s = g[i] + g[j];
  const double generic = s * (s + g[others[0]]) * (s + g[others[1]]);
  double gabs = 0.0;
  for (double v : g) gabs += std::abs(v);
  if (std::abs(generic) <= 1e-12 * gabs * gabs * gabs) {
    out.reason = "strength sums (Gi+Gj)(Gi+Gj+Gk)(Gi+Gj+Gl) vanish";
    return out;
  }
  const auto b0 = squared_distances(s0);
  double m_scale = 0.0;
  std::size_t p = 0;
  for (const auto& [a, b] : pair_list(n)) m_scale += std::abs(g[a] * g[b]) * b0[p++];
  const double m0 = traj.samples.front().invariants.m_pair_sum;
  if (std::abs(m0) > 1e-9 * m_scale) {
    out.reason = "M is not zero within 1e-9 of sum |Gi Gj| b_ij";
    return out;
  }
  out.applicable = true;
  out.reason = "hypotheses hold";

  const std::size_t m = traj.samples.size();
  const std::size_t w0 = window_start(m, window_fraction);
  const std::size_t pij = pair_index(i, j, n);
  std::vector<double> rho;
  for (std::size_t k = w0; k < m; ++k) {
    const auto shape = to_shape(traj.samples[k].state);
    out.times.push_back(traj.samples[k].time());
    out.values.push_back(std::exp(std::abs(gij) * std::log(shape.beta[pij]) - out.virial * std::log(shape.rho)));
    rho.push_back(shape.rho);
  }
  out.r_min = *std::min_element(out.values.begin(), out.values.end());
  out.r_max = *std::max_element(out.values.begin(), out.values.end());
  out.ratio = out.r_max / out.r_min;
  const double slope = log_linear_slope(out.times, rho);
  const double rel = std::abs(slope) * (out.times.back() - out.times.front());
  out.rho_trend = rel < 1e-12 ? 0 : (slope < 0.0 ? -1 : 1);
  out.expected_rho_trend = out.virial > 0.0 ? -1 : (out.virial < 0.0 ? 1 : 0);
  out.corollary_consistent = out.expected_rho_trend != 0 && out.rho_trend == out.expected_rho_trend;
  return out;
}

}  // namespace vortexlab
