#include "vortexlab/reduction.hpp"

#include <algorithm>
#include <cmath>

namespace vortexlab {

namespace {

using cd = std::complex<double>;
const double kSqrt3 = std::sqrt(3.0);

Matrix8 real_form(const Eigen::Matrix4cd& c) {
  Matrix8 m;
  m.block<4, 4>(0, 0) = c.real();
  m.block<4, 4>(0, 4) = -c.imag();
  m.block<4, 4>(4, 0) = c.imag();
  m.block<4, 4>(4, 4) = c.real();
  return m;
}

double max_abs_weight(const std::array<double, 4>& w) {
  double m = 0.0;
  for (double v : w) m = std::max(m, std::abs(v));
  return m;
}

double symplectic_residual(const Matrix8& m, const SymplecticStructure& before, const SymplecticStructure& after) {
  const Matrix8 d = m.transpose() * before.matrix() * m - after.matrix();
  return d.cwiseAbs().maxCoeff() / std::max(max_abs_weight(before.weights), max_abs_weight(after.weights));
}

void check_strengths(const std::array<double, 4>& g) {
  for (double v : g)
    if (v == 0.0 || !std::isfinite(v)) throw InvalidArgument("strengths must be finite and nonzero");
  if (g[0] + g[1] == 0.0) throw InvalidArgument("binary strengths sum to zero");
}

// DFT of three points, F_{n a} = w^{n a} / sqrt3, w = exp(2 pi i / 3).
Eigen::Matrix3cd dft3() {
  const cd w = std::polar(1.0, kTwoPi / 3.0);
  Eigen::Matrix3cd f;
  for (int n = 0; n < 3; ++n)
    for (int a = 0; a < 3; ++a) f(n, a) = std::pow(w, n * a) / kSqrt3;
  return f;
}

template <class T>
T radical_product(T i1, T i2) {
  return std::sqrt(-i1 - i2) * std::sqrt(i1 - i2);
}

template <class T>
std::array<T, 3> h0_log_args(T i1, T phi1, T i2) {
  const T s = radical_product(i1, i2);
  const T c2 = std::cos(2.0 * phi1);
  return {-2.0 * (i2 + s * c2), s * c2 - 2.0 * (i2 + kSqrt3 * s * std::cos(phi1) * std::sin(phi1)),
          -2.0 * i2 + s * c2 + kSqrt3 * s * std::sin(2.0 * phi1)};
}

template <class T>
T h0_impl(T i1, T phi1, double eps, T i2, double g2, double g) {
  const auto a = h0_log_args(i1, phi1, i2);
  const T logs = std::log(a[0]) + std::log(a[1]) + std::log(a[2]);
  return (2.0 * g2 * (-g + g2) * std::log(eps) - g * g * logs) / (4.0 * kPi);
}

template <class T>
T f1_impl(T i1, T phi1, T i2, double g2, double g) {
  const T s = radical_product(i1, i2);
  const T poly = 8.0 * i2 * i2 * i2 - 12.0 * s * i2 * i2 * std::cos(2.0 * phi1) +
                 6.0 * i2 * (-i1 * i1 + i2 * i2) * std::cos(4.0 * phi1) + i1 * i1 * s * std::cos(6.0 * phi1) -
                 s * i2 * i2 * std::cos(6.0 * phi1);
  return (-1.0 + kTwoPi) * g2 * g2 * (-g + g2) * poly;
}

template <class T>
T f2_impl(T i1, T phi1, T i2, double g) {
  const T s = radical_product(i1, i2);
  const T inner = i1 * i1 + 3.0 * i2 * i2 - 4.0 * s * i2 * std::cos(2.0 * phi1) -
                  2.0 * (i1 * i1 - i2 * i2) * std::cos(4.0 * phi1);
  return kTwoPi * g * inner * inner;
}

void check_radicands(double i1, double i2) {
  if (-i1 - i2 < 0.0) throw DomainError("radicand -i1 - i2 = " + std::to_string(-i1 - i2) + " is negative");
  if (i1 - i2 < 0.0) throw DomainError("radicand i1 - i2 = " + std::to_string(i1 - i2) + " is negative");
}

double wrap_near(double angle, double reference, double period) {
  return angle - period * std::round((angle - reference) / period);
}

}  // namespace

Matrix8 SymplecticStructure::matrix() const {
  Matrix8 m = Matrix8::Zero();
  for (int k = 0; k < 4; ++k) {
    m(k, k + 4) = weights[static_cast<std::size_t>(k)];
    m(k + 4, k) = -weights[static_cast<std::size_t>(k)];
  }
  return m;
}

std::array<double, 4> j1_weights(const std::array<double, 4>& g) {
  const double g12 = g[0] + g[1];
  return {g[0] * g[1] / g12, g12, g[2], g[3]};
}

Matrix8 t1_matrix(const std::array<double, 4>& g) {
  const double g12 = g[0] + g[1];
  Eigen::Matrix4cd c = Eigen::Matrix4cd::Zero();
  c(0, 0) = -g[1] / g12;
  c(0, 1) = 1.0;
  c(1, 0) = g[0] / g12;
  c(1, 1) = 1.0;
  c(2, 2) = 1.0;
  c(3, 3) = 1.0;
  return real_form(c);
}

Matrix8 t2_matrix() {
  Eigen::Matrix4cd c = Eigen::Matrix4cd::Zero();
  c(0, 0) = 1.0;
  // Old = F^{-1} new and F^{-1} = conj(F) for the symmetric unitary DFT.
  c.block<3, 3>(1, 1) = dft3().conjugate();
  return real_form(c);
}

Matrix8 t4_matrix() {
  Matrix8 m = Matrix8::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 2) = -0.5;  // j1 = -(i1 + i2)/2
  m(2, 3) = -0.5;
  m(3, 2) = 0.5;  // j2 = (i1 - i2)/2
  m(3, 3) = -0.5;
  m(4, 4) = 1.0;
  m(5, 5) = 1.0;
  m(6, 6) = -1.0;  // theta1 = -(phi1 + phi2)
  m(6, 7) = -1.0;
  m(7, 6) = 1.0;  // theta2 = phi1 - phi2
  m(7, 7) = -1.0;
  return m;
}

bool reduction_condition_holds(const std::array<double, 4>& g) {
  return std::abs(g[0] + g[1] - g[2]) + std::abs(g[2] - g[3]) < 1e-12;
}

TransformChain transform_chain(const std::array<double, 4>& g) {
  check_strengths(g);
  TransformChain out;
  out.strengths = g;
  const SymplecticStructure j0{{g[0], g[1], g[2], g[3]}, Stage::J0};
  const SymplecticStructure j1{j1_weights(g), Stage::J1};

  out.t1.name = "T1";
  out.t1.matrix = t1_matrix(g);
  out.t1.before = j0;
  out.t1.after = j1;
  out.t1.residual = symplectic_residual(out.t1.matrix, j0, j1);

  const Matrix8 t2 = t2_matrix();
  const Matrix8 j2m = t2.transpose() * j1.matrix() * t2;
  out.a_block = j2m.block<4, 4>(0, 0);
  out.b_block = j2m.block<4, 4>(0, 4);
  const double scale = max_abs_weight(j1.weights);
  Eigen::Matrix4d off = out.b_block;
  off.diagonal().setZero();
  out.matrix_canonical =
      out.a_block.cwiseAbs().maxCoeff() <= 1e-12 * scale && off.cwiseAbs().maxCoeff() <= 1e-12 * scale;
  out.condition_holds = reduction_condition_holds(g);

  out.t2.name = "T2";
  out.t2.matrix = t2;
  out.t2.before = j1;
  out.t2.after = {j1.weights, Stage::J2};
  out.t2.residual = symplectic_residual(t2, j1, out.t2.after);

  if (out.condition_holds) {
    const double gm = g[2];
    StageCheck t4;
    t4.name = "T4";
    t4.matrix = t4_matrix();
    t4.before = {j1.weights, Stage::J3};
    t4.after = {{g[0] * g[1] / gm, gm, gm, gm}, Stage::J4};
    t4.residual = symplectic_residual(t4.matrix, t4.before, t4.after);
    out.t4 = t4;
  }
  return out;
}

Matrix8 f3_jacobian(const std::array<double, 8>& p) {
  for (int k = 0; k < 4; ++k)
    if (!(p[static_cast<std::size_t>(k)] > 0.0)) throw DomainError("semi-polar Jacobian needs positive actions");
  constexpr double h = 1e-30;
  Matrix8 jac = Matrix8::Zero();
  for (int col = 0; col < 8; ++col) {
    std::array<cd, 8> z;
    for (std::size_t k = 0; k < 8; ++k) z[k] = p[k];
    z[static_cast<std::size_t>(col)] += cd(0.0, h);
    for (std::size_t k = 0; k < 4; ++k) {
      const cd r = std::sqrt(2.0 * z[k]);
      jac(static_cast<int>(k), col) = (r * std::cos(z[k + 4])).imag() / h;
      jac(static_cast<int>(k) + 4, col) = (r * std::sin(z[k + 4])).imag() / h;
    }
  }
  return jac;
}

double f3_symplectic_residual(const std::array<double, 8>& point, const std::array<double, 4>& weights) {
  const SymplecticStructure s{weights, Stage::J2};
  return symplectic_residual(f3_jacobian(point), s, {weights, Stage::J3});
}

double ReducedChartPoint::epsilon() const { return std::sqrt(2.0 * i); }

std::array<double, 8> ReducedChartPoint::as_array() const { return {i, i0, i1, i2, phi, phi0, phi1, phi2}; }

ReducedChartPoint ReducedChartPoint::from_array(const std::array<double, 8>& a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
}

std::pair<VortexState, std::array<std::size_t, 4>> relabel_binary_first(const VortexState& state,
                                                                         std::pair<std::size_t, std::size_t> pair) {
  if (state.size() != 4) throw InvalidArgument("reduction needs four vortices");
  const auto [a, b] = pair;
  if (a >= 4 || b >= 4 || a == b) throw InvalidArgument("invalid binary pair");
  std::array<std::size_t, 4> perm{a, b, 0, 0};
  std::size_t k = 2;
  for (std::size_t i = 0; i < 4; ++i)
    if (i != a && i != b) perm[k++] = i;
  VortexState out;
  out.time = state.time;
  for (auto i : perm) {
    out.positions.push_back(state.positions[i]);
    out.strengths.push_back(state.strengths[i]);
  }
  return {out, perm};
}

ReducedChartPoint chart_to_reduced(const VortexState& state) {
  state.validate();
  if (state.size() != 4) throw InvalidArgument("reduction needs four vortices");
  std::array<double, 4> g;
  std::copy(state.strengths.begin(), state.strengths.end(), g.begin());
  check_strengths(g);
  if (!reduction_condition_holds(g)) throw InvalidArgument("strengths violate Gamma_1 + Gamma_2 = Gamma_3 = Gamma_4");
  const auto& z = state.positions;
  const cd zeta = z[1] - z[0];
  const cd center = (g[0] * z[0] + g[1] * z[1]) / (g[0] + g[1]);
  const Eigen::Vector3cd w(center, z[2], z[3]);
  const Eigen::Vector3cd m = dft3() * w;
  const std::array<cd, 4> modes{zeta, m(0), m(1), m(2)};
  std::array<double, 4> j, th;
  for (std::size_t k = 0; k < 4; ++k) {
    j[k] = std::norm(modes[k]) / 2.0;
    th[k] = std::arg(modes[k]);
  }
  ReducedChartPoint rp;
  rp.i = j[0];
  rp.i0 = j[1];
  rp.i1 = j[3] - j[2];
  rp.i2 = -(j[2] + j[3]);
  rp.phi = th[0];
  rp.phi0 = th[1];
  rp.phi1 = 0.5 * (th[3] - th[2]);
  rp.phi2 = -0.5 * (th[2] + th[3]);
  return rp;
}

ReducedChartPoint chart_to_reduced(const VortexState& state, std::pair<std::size_t, std::size_t> pair) {
  return chart_to_reduced(relabel_binary_first(state, pair).first);
}

VortexState reduced_to_chart(const ReducedChartPoint& rp, const std::array<double, 4>& g, double time) {
  check_strengths(g);
  if (!reduction_condition_holds(g)) throw InvalidArgument("strengths violate Gamma_1 + Gamma_2 = Gamma_3 = Gamma_4");
  const double j1 = -(rp.i1 + rp.i2) / 2.0;
  const double j2 = (rp.i1 - rp.i2) / 2.0;
  if (!(rp.i > 0.0)) throw DomainError("binary action i must be positive");
  if (rp.i0 < 0.0 || j1 < 0.0 || j2 < 0.0) throw DomainError("actions outside the chart domain");
  auto mode = [](double action, double angle) { return std::polar(std::sqrt(2.0 * action), angle); };
  const cd zeta = mode(rp.i, rp.phi);
  const Eigen::Vector3cd m(mode(rp.i0, rp.phi0), mode(j1, -(rp.phi1 + rp.phi2)), mode(j2, rp.phi1 - rp.phi2));
  const Eigen::Vector3cd w = dft3().conjugate() * m;
  const double g12 = g[0] + g[1];
  VortexState s;
  s.time = time;
  s.strengths.assign(g.begin(), g.end());
  s.positions = {w(0) - g[1] / g12 * zeta, w(0) + g[0] / g12 * zeta, w(1), w(2)};
  return s;
}

ReducedChartPoint unwrap_angles(const ReducedChartPoint& previous, const ReducedChartPoint& current) {
  ReducedChartPoint out = current;
  out.phi = wrap_near(current.phi, previous.phi, kTwoPi);
  out.phi0 = wrap_near(current.phi0, previous.phi0, kTwoPi);
  // (phi1, phi2) and (phi1 + pi, phi2 + pi) name the same point.
  const double k = std::round((current.phi1 - previous.phi1) / kPi);
  out.phi1 = current.phi1 - k * kPi;
  out.phi2 = wrap_near(current.phi2 - k * kPi, previous.phi2, kTwoPi);
  return out;
}

double h0(const ReducedChartPoint& rp, const std::array<double, 4>& g) {
  check_radicands(rp.i1, rp.i2);
  if (!(rp.i > 0.0)) throw DomainError("binary action i must be positive");
  const auto a = h0_log_args(rp.i1, rp.phi1, rp.i2);
  const char* names[3] = {"-2(i2 + S cos 2phi1)", "S cos 2phi1 - 2(i2 + sqrt3 S cos phi1 sin phi1)",
                          "-2 i2 + S cos 2phi1 + sqrt3 S sin 2phi1"};
  for (int k = 0; k < 3; ++k)
    if (!(a[static_cast<std::size_t>(k)] > 0.0))
      throw DomainError(std::string("log argument ") + names[k] + " = " + std::to_string(a[static_cast<std::size_t>(k)]) +
                        " is not positive");
  return h0_impl(rp.i1, rp.phi1, rp.epsilon(), rp.i2, g[1], g[2]);
}

double h2bar_numerator(const ReducedChartPoint& rp, const std::array<double, 4>& g) {
  check_radicands(rp.i1, rp.i2);
  return f1_impl(rp.i1, rp.phi1, rp.i2, g[1], g[2]);
}

double h2bar_denominator(const ReducedChartPoint& rp, const std::array<double, 4>& g) {
  check_radicands(rp.i1, rp.i2);
  return f2_impl(rp.i1, rp.phi1, rp.i2, g[2]);
}

double h2bar(const ReducedChartPoint& rp, const std::array<double, 4>& g) {
  const double den = h2bar_denominator(rp, g);
  if (den == 0.0)
    throw DomainError("f2 vanishes at i1 = " + std::to_string(rp.i1) + ", i2 = " + std::to_string(rp.i2) +
                      ", phi1 = " + std::to_string(rp.phi1));
  return h2bar_numerator(rp, g) / den;
}

std::complex<double> h0_complex(cd i1, cd phi1, double eps, double i2, const std::array<double, 4>& g) {
  return h0_impl<cd>(i1, phi1, eps, cd(i2), g[1], g[2]);
}

std::complex<double> h2bar_complex(cd i1, cd phi1, double i2, const std::array<double, 4>& g) {
  return f1_impl<cd>(i1, phi1, cd(i2), g[1], g[2]) / f2_impl<cd>(i1, phi1, cd(i2), g[2]);
}

H2Fit numeric_h2(const ReducedChartPoint& base, const std::array<double, 4>& g, const H2FitOptions& opt) {
  if (opt.nodes < 4 || !(opt.eps_min > 0.0 && opt.eps_min < opt.eps_max))
    throw InvalidArgument("fit needs at least four nodes on 0 < eps_min < eps_max");
  const std::size_t n = opt.nodes;
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  const double lmin = std::log(opt.eps_min), lmax = std::log(opt.eps_max);
  for (std::size_t k = 0; k < n; ++k) {
    const double eps = std::exp(lmin + (lmax - lmin) * static_cast<double>(k) / static_cast<double>(n - 1));
    ReducedChartPoint rp = base;
    rp.i = eps * eps / 2.0;
    const double full = energy(reduced_to_chart(rp, g));
    const auto r = static_cast<Eigen::Index>(k);
    y(r) = full - h0(rp, g);
    // Columns scaled by eps_max powers to keep the system well conditioned.
    const double u = eps / opt.eps_max;
    a(r, 0) = u;
    a(r, 1) = u * u;
    a(r, 2) = u * u * u;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(2) > 1e-12 * sv(0))) throw Error("epsilon fit is rank deficient");
  const Eigen::Vector3d c = svd.solve(y);
  H2Fit fit;
  fit.c1 = c(0) / opt.eps_max;
  fit.c2 = c(1) / (opt.eps_max * opt.eps_max);
  fit.c3 = c(2) / (opt.eps_max * opt.eps_max * opt.eps_max);
  fit.rms = std::sqrt((a * c - y).squaredNorm() / static_cast<double>(n));
  return fit;
}

double numeric_h2_average(const ReducedChartPoint& base, const std::array<double, 4>& g, std::size_t nodes,
                          const H2FitOptions& opt) {
  if (nodes < 2) throw InvalidArgument("quadrature needs at least two nodes");
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) {
    ReducedChartPoint rp = base;
    rp.phi = kTwoPi * static_cast<double>(k) / static_cast<double>(nodes);
    sum += numeric_h2(rp, g, opt).c2;
  }
  return sum / static_cast<double>(nodes);
}

}  // namespace vortexlab
