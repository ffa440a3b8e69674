#pragma once

// Test-only reference integration: classical fixed-step RK4, written directly
// over Eigen vectors and independent of the library's stepper.

#include <Eigen/Dense>

#include <functional>

namespace oracle {

using State = Eigen::VectorXd;
using Rhs = std::function<State(double, const State&)>;

inline State rk4_integrate(const Rhs& f, State y, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  double t = t0;
  for (int i = 0; i < steps; ++i) {
    const State k1 = f(t, y);
    const State k2 = f(t + h / 2, y + (h / 2) * k1);
    const State k3 = f(t + h / 2, y + (h / 2) * k2);
    const State k4 = f(t + h, y + h * k3);
    y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
  }
  return y;
}

}  // namespace oracle
