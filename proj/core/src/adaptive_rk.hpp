// Adaptive Runge-Kutta-Fehlberg 7(8) stepping for fixed-size states, on top
// of Boost.Odeint's controlled stepper.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include <boost/numeric/odeint/stepper/controlled_runge_kutta.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "gcm/ode.hpp"

namespace gcm {

template <std::size_t N>
class AdaptiveRk78 {
 public:
  using State = std::array<double, N>;

  explicit AdaptiveRk78(OdeTolerances tol = {})
      : tol_(tol), stepper_(Checker(tol.atol, tol.rtol)) {}

  /// Advances y from t to t_end (t_end > t). The last unclipped step size is
  /// kept and reused as the first trial of the next call.
  /// f(t, y, dydt) evaluates the right-hand side.
  template <class Rhs>
  OdeStatus advance(Rhs&& f, double& t, State& y, double t_end) {
    if (!(t_end > t)) return OdeStatus::Ok;
    const auto sys = [&f](const State& x, State& dxdt, double tt) { f(tt, x, dxdt); };
    if (h_ <= 0.0) h_ = std::min(1e-3, t_end - t);
    double h = h_;
    while (t < t_end) {
      if (steps_ >= tol_.max_steps) return OdeStatus::TooManySteps;
      if (h <= std::abs(t) * 1e-15) return OdeStatus::StepUnderflow;
      const bool last = t + h >= t_end;
      if (last) h = t_end - t;
      ++steps_;
      State trial = y;
      double tt = t, hh = h;
      if (stepper_.try_step(sys, trial, tt, hh) == boost::numeric::odeint::success) {
        for (const double v : trial)
          if (!std::isfinite(v)) return OdeStatus::NonFinite;
        ++accepted_;
        y = trial;
        t = last ? t_end : tt;
        if (!last) h_ = hh;
        h = hh;
      } else {
        ++rejected_;
        h = hh;
      }
    }
    return OdeStatus::Ok;
  }

  std::size_t steps() const { return steps_; }
  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }
  double step_size() const { return h_; }

 private:
  using Checker = boost::numeric::odeint::default_error_checker<
      double, boost::numeric::odeint::array_algebra, boost::numeric::odeint::default_operations>;
  using Stepper = boost::numeric::odeint::controlled_runge_kutta<
      boost::numeric::odeint::runge_kutta_fehlberg78<State>, Checker>;

  OdeTolerances tol_;
  Stepper stepper_;
  double h_ = 0.0;
  std::size_t steps_ = 0, accepted_ = 0, rejected_ = 0;
};

}  // namespace gcm
