#include "vortexlab/ode.hpp"

#include <algorithm>
#include <cmath>

#include "vortexlab/core.hpp"

namespace vortexlab::ode {
namespace {

// Dormand & Prince (1980) coefficients; dense output after Hairer, Norsett & Wanner.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

DormandPrince45::DormandPrince45(Rhs f, StepControl control) : f_(std::move(f)), control_(control) {
  if (!(control_.rel_tol > 0.0) || !(control_.abs_tol > 0.0))
    throw InvalidArgument("integrator tolerances must be positive");
  if (!(control_.min_step > 0.0) || !(control_.min_step < control_.max_step))
    throw InvalidArgument("integrator requires 0 < min_step < max_step");
}

void DormandPrince45::reset(double t, const Vector& y) {
  const std::size_t n = y.size();
  t_ = t_prev_ = t;
  y_ = y_prev_ = y;
  k_.assign(7, Vector(n, 0.0));
  rcont_.assign(5, Vector(n, 0.0));
  tmp_.assign(n, 0.0);
  y_new_.assign(n, 0.0);
  err_.assign(n, 0.0);
  f_(t_, y_, k_[0]);
  h_ = 0.0;
  accepted_ = rejected_ = 0;
}

double DormandPrince45::error_norm(const Vector& y0, const Vector& y1, const Vector& err) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < y0.size(); ++i) {
    const double sc = control_.abs_tol + control_.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(y0.size()));
}

double DormandPrince45::initial_step(double direction) const {
  const std::size_t n = y_.size();
  double dnf = 0.0, dny = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = control_.abs_tol + control_.rel_tol * std::abs(y_[i]);
    dnf += (k_[0][i] / sk) * (k_[0][i] / sk);
    dny += (y_[i] / sk) * (y_[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, control_.max_step);
  Vector y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y_[i] + direction * h * k_[0][i];
  f_(t_ + direction * h, y1, f1);
  double der2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = control_.abs_tol + control_.rel_tol * std::abs(y_[i]);
    const double d = (f1[i] - k_[0][i]) / sk;
    der2 += d * d;
  }
  der2 = std::sqrt(der2) / h;
  const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 1.0 / 5.0);
  return std::min({100.0 * h, h1, control_.max_step});
}

DormandPrince45::Outcome DormandPrince45::step(double t_limit) {
  const double direction = t_limit >= t_ ? 1.0 : -1.0;
  if (h_ == 0.0) h_ = std::max(initial_step(direction), control_.min_step);
  const std::size_t n = y_.size();
  auto& k1 = k_[0];
  auto& k2 = k_[1];
  auto& k3 = k_[2];
  auto& k4 = k_[3];
  auto& k5 = k_[4];
  auto& k6 = k_[5];
  auto& k7 = k_[6];

  for (;;) {
    double h = std::min(h_, control_.max_step);
    bool last = false;
    if (h >= std::abs(t_limit - t_)) {
      h = std::abs(t_limit - t_);
      last = true;
    }
    if (h < control_.min_step && !last) return Outcome::step_collapse;
    const double hs = direction * h;

    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y_[i] + hs * a21 * k1[i];
    f_(t_ + c2 * hs, tmp_, k2);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y_[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    f_(t_ + c3 * hs, tmp_, k3);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y_[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f_(t_ + c4 * hs, tmp_, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y_[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f_(t_ + c5 * hs, tmp_, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y_[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f_(t_ + hs, tmp_, k6);
    for (std::size_t i = 0; i < n; ++i)
      y_new_[i] = y_[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    f_(t_ + hs, y_new_, k7);
    for (std::size_t i = 0; i < n; ++i)
      err_[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);

    const double err = error_norm(y_, y_new_, err_);
    if (!std::isfinite(err) || err > 1.0) {
      ++rejected_;
      const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.1;
      h_ = h * fac;
      if (h_ < control_.min_step) return Outcome::step_collapse;
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double dy = y_new_[i] - y_[i];
      const double bspl = hs * k1[i] - dy;
      rcont_[0][i] = y_[i];
      rcont_[1][i] = dy;
      rcont_[2][i] = bspl;
      rcont_[3][i] = dy - hs * k7[i] - bspl;
      rcont_[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    y_prev_ = y_;
    t_prev_ = t_;
    y_.swap(y_new_);
    t_ = last ? t_limit : t_ + hs;
    k1.swap(k7);
    ++accepted_;

    const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    // Keep the previous step size suggestion when the step was clipped at t_limit.
    if (!last || h_ <= h) h_ = h * fac;
    return Outcome::accepted;
  }
}

Vector DormandPrince45::dense(double t) const {
  const double h = t_ - t_prev_;
  Vector out(y_.size());
  if (h == 0.0) return y_;
  const double s = (t - t_prev_) / h;
  const double s1 = 1.0 - s;
  for (std::size_t i = 0; i < y_.size(); ++i)
    out[i] = rcont_[0][i] + s * (rcont_[1][i] + s1 * (rcont_[2][i] + s * (rcont_[3][i] + s1 * rcont_[4][i])));
  return out;
}

}  // namespace vortexlab::ode
