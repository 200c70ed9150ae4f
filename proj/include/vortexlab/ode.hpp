#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace vortexlab::ode {

using Vector = std::vector<double>;

/// dy/dt = f(t, y). Implementations write into `dy`, which is presized.
using Rhs = std::function<void(double t, const Vector& y, Vector& dy)>;

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 1.0;
  double min_step = 1e-14;
};

/// Dormand-Prince 5(4) embedded pair with the standard fourth order
/// continuous extension. One call to step() produces one accepted step.
class DormandPrince45 {
 public:
  enum class Outcome { accepted, step_collapse };

  DormandPrince45(Rhs f, StepControl control);

  void reset(double t, const Vector& y);

  /// Advances by one accepted step, never past `t_limit` (which may lie on
  /// either side of t()). Returns step_collapse when the controller asks for a
  /// step below min_step.
  Outcome step(double t_limit);

  double t() const { return t_; }
  double t_previous() const { return t_prev_; }
  const Vector& y() const { return y_; }
  /// Derivative at the current point (first same as last).
  const Vector& dydt() const { return k_[0]; }
  double suggested_step() const { return h_; }
  std::size_t accepted_steps() const { return accepted_; }
  std::size_t rejected_steps() const { return rejected_; }

  /// Dense output on [t_previous(), t()].
  Vector dense(double t) const;

 private:
  double initial_step(double direction) const;
  double error_norm(const Vector& y0, const Vector& y1, const Vector& err) const;

  Rhs f_;
  StepControl control_;
  double t_ = 0.0;
  double t_prev_ = 0.0;
  double h_ = 0.0;
  Vector y_;
  Vector y_prev_;
  std::vector<Vector> k_;  // k_[0] holds f(t_, y_)
  std::vector<Vector> rcont_;
  Vector tmp_, y_new_, err_;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
};

}  // namespace vortexlab::ode
