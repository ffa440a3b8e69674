#include "projdyn/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace projdyn {

namespace {

// Dormand–Prince 5(4) pair.
constexpr Real kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr Real kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr Real kB5[7] = {35.0 / 384,    0.0,           500.0 / 1113, 125.0 / 192,
                         -2187.0 / 6784, 11.0 / 84,    0.0};
constexpr Real kB4[7] = {5179.0 / 57600,     0.0,          7571.0 / 16695,
                         393.0 / 640,        -92097.0 / 339200,
                         187.0 / 2100,       1.0 / 40};

struct OdeCallbacks {
  // dy = F(t, y); throws DomainError when the state leaves the domain.
  std::function<void(Real, const Vec&, Vec&)> rhs;
  // In-place correction after an accepted step (constraint stabilization).
  std::function<void(Real, Vec&)> post_accept;
  // Record an accepted sample (also called for the initial state).
  std::function<void(Real, const Vec&)> record;
  // After recording: true stops the integration early.
  std::function<bool(Real, const Vec&)> stop_after;
};

// Attach the step time to a domain error escaping the RHS, preserving the
// error's type. Must be called from inside a catch block.
[[noreturn]] void rethrow_with_time(Real t) {
  try {
    throw;
  } catch (const TransversalityError& e) {
    if (e.time().has_value()) throw;
    throw TransversalityError(
        std::string(e.what()) + " (t = " + std::to_string(t) + ")", t);
  } catch (const DomainError& e) {
    if (e.time().has_value()) throw;
    throw DomainError(std::string(e.what()) + " (t = " + std::to_string(t) + ")",
                      t);
  }
}

IntegrationStats run_adaptive_rk54(const OdeCallbacks& cb, Vec y, Real t0,
                                   Real t_end, const IntegratorOptions& opts) {
  IntegrationStats stats;
  const Index n = y.size();
  std::array<Vec, 7> k;
  Vec y_stage(n), y_next(n), err(n);

  Real t = t0;
  Real h = std::min({opts.initial_step, opts.max_step, t_end - t0});

  cb.record(t, y);
  if (cb.stop_after && cb.stop_after(t, y)) return stats;

  bool last_rejected = false;
  while (t < t_end) {
    if (stats.accepted + stats.rejected >= opts.max_steps) {
      throw IntegrationError("integration exceeded the step budget at t = " +
                             std::to_string(t));
    }
    if (!(h > 1e-14 * std::max<Real>(1.0, std::abs(t)))) {
      throw IntegrationError("step size underflow at t = " + std::to_string(t));
    }
    h = std::min(h, t_end - t);

    try {
      k[0].resize(n);
      cb.rhs(t, y, k[0]);
      ++stats.rhs_evals;
      for (int s = 1; s < 7; ++s) {
        y_stage = y;
        for (int j = 0; j < s; ++j) {
          if (kA[s][j] != 0.0) y_stage += (h * kA[s][j]) * k[j];
        }
        k[s].resize(n);
        cb.rhs(t + kC[s] * h, y_stage, k[s]);
        ++stats.rhs_evals;
      }
    } catch (const DomainError&) {
      rethrow_with_time(t);
    }

    y_next = y;
    err.setZero();
    for (int s = 0; s < 7; ++s) {
      if (kB5[s] != 0.0) y_next += (h * kB5[s]) * k[s];
      err += (h * (kB5[s] - kB4[s])) * k[s];
    }

    Real err_norm = 0;
    for (Index i = 0; i < n; ++i) {
      const Real sc =
          opts.atol + opts.rtol * std::max(std::abs(y(i)), std::abs(y_next(i)));
      const Real e = err(i) / sc;
      err_norm += e * e;
    }
    err_norm = std::sqrt(err_norm / static_cast<Real>(n));

    if (!std::isfinite(err_norm)) {
      ++stats.rejected;
      h *= 0.2;
      last_rejected = true;
      continue;
    }

    if (err_norm <= 1.0) {
      t += h;
      y = y_next;
      if (cb.post_accept) cb.post_accept(t, y);
      ++stats.accepted;
      cb.record(t, y);
      if (cb.stop_after && cb.stop_after(t, y)) break;

      Real fac = err_norm == 0.0
                     ? 5.0
                     : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      last_rejected = false;
      h = std::min(h * fac, opts.max_step);
    } else {
      ++stats.rejected;
      last_rejected = true;
      h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0);
    }
  }
  return stats;
}

IntegrationStats run_fixed_rk4(const OdeCallbacks& cb, Vec y, Real t0, Real t_end,
                               const IntegratorOptions& opts) {
  IntegrationStats stats;
  const Index n = y.size();
  Vec k1(n), k2(n), k3(n), k4(n), y_stage(n);

  Real t = t0;
  cb.record(t, y);
  if (cb.stop_after && cb.stop_after(t, y)) return stats;

  const Real dt = std::min(opts.fixed_step, opts.max_step);
  while (t < t_end) {
    if (stats.accepted >= opts.max_steps) {
      throw IntegrationError("integration exceeded the step budget at t = " +
                             std::to_string(t));
    }
    const Real h = std::min(dt, t_end - t);
    try {
      cb.rhs(t, y, k1);
      y_stage = y + (h / 2) * k1;
      cb.rhs(t + h / 2, y_stage, k2);
      y_stage = y + (h / 2) * k2;
      cb.rhs(t + h / 2, y_stage, k3);
      y_stage = y + h * k3;
      cb.rhs(t + h, y_stage, k4);
      stats.rhs_evals += 4;
    } catch (const DomainError&) {
      rethrow_with_time(t);
    }
    y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
    if (cb.post_accept) cb.post_accept(t, y);
    ++stats.accepted;
    cb.record(t, y);
    if (cb.stop_after && cb.stop_after(t, y)) break;
  }
  return stats;
}

IntegrationStats run_integrator(const OdeCallbacks& cb, const Vec& y0, Real t0,
                                Real t_end, const IntegratorOptions& opts) {
  if (!(t_end > t0)) {
    throw std::invalid_argument("integrate: t_end must exceed the start time");
  }
  if (!(opts.rtol > 0) || !(opts.atol > 0) || !(opts.initial_step > 0) ||
      !(opts.fixed_step > 0) || !(opts.max_step > 0) || opts.max_steps <= 0) {
    throw std::invalid_argument(
        "integrate: steps and tolerances must be positive");
  }
  if (opts.method == IntegratorOptions::Method::fixed_rk4) {
    return run_fixed_rk4(cb, y0, t0, t_end, opts);
  }
  return run_adaptive_rk54(cb, y0, t0, t_end, opts);
}

// Multiplier without the on-screen preconditions; used inside the RHS where
// intermediate stages sit slightly off the screen.
Real multiplier_unchecked(const ConstrainedSystem& system, const Vec& q,
                          const Vec& p, const Vec& fq) {
  const Screen& screen = *system.screen;
  const Covec dhq = screen.dh(q);
  const Vec dq = system.reaction.direction(q);
  const Real denom = pair(dhq, dq);
  if (std::abs(denom) <= kTransversalityTol) {
    throw TransversalityError(
        "reaction direction is tangent to the screen (|Dh[d]| = " +
        std::to_string(std::abs(denom)) + ")");
  }
  const Real curvature = p.dot(screen.d2h(q) * p);
  return -(curvature + pair(dhq, fq)) / denom;
}

}  // namespace

ReactionField ReactionField::central() {
  return {[](const Vec& q) -> Vec { return q; }, "central"};
}

ReactionField ReactionField::along(VectorMap d, std::string label) {
  return {std::move(d), std::move(label)};
}

const std::vector<Real>& Trajectory::channel(const std::string& name) const {
  auto it = channels.find(name);
  if (it == channels.end()) {
    throw std::out_of_range("Trajectory: no channel named '" + name + "'");
  }
  return it->second;
}

Real multiplier(const ConstrainedSystem& system, const Vec& q, const Vec& p) {
  const Screen& screen = *system.screen;
  const Real hq = screen.h(q);
  if (std::abs(hq - 1.0) > 1e-8) {
    throw DomainError("multiplier: state is off the screen (h = " +
                      std::to_string(hq) + ")");
  }
  if (std::abs(pair(screen.dh(q), p)) > 1e-8) {
    throw DomainError("multiplier: velocity is not tangent to the screen");
  }
  return multiplier_unchecked(system, q, p, evaluate(system.field, q));
}

Vec constrained_accel(const ConstrainedSystem& system, const Vec& q, const Vec& p) {
  const Vec fq = evaluate(system.field, q);
  const Real hq = system.screen->h(q);
  if (std::abs(hq - 1.0) > 1e-8) {
    throw DomainError("constrained_accel: state is off the screen");
  }
  if (std::abs(pair(system.screen->dh(q), p)) > 1e-8) {
    throw DomainError("constrained_accel: velocity is not tangent to the screen");
  }
  return fq + multiplier_unchecked(system, q, p, fq) * system.reaction.direction(q);
}

Trajectory integrate_free(const ForceField& field, const PhaseState& start,
                          Real t_end, const IntegratorOptions& opts,
                          const Screen* tau_screen) {
  const Index n = field.dim;
  require_dim(n, start.q.size(), "integrate_free(q)");
  require_dim(n, start.p.size(), "integrate_free(p)");
  if (tau_screen) require_dim(n, tau_screen->dim(), "integrate_free(screen)");
  if (opts.tau_stop > 0 && !tau_screen) {
    throw std::invalid_argument("integrate_free: tau_stop requires a screen");
  }

  const bool with_tau = tau_screen != nullptr;
  const Index state_size = with_tau ? 2 * n + 1 : 2 * n;

  Vec y0(state_size);
  y0.head(n) = start.q;
  y0.segment(n, n) = start.p;
  if (with_tau) y0(2 * n) = 0;

  Trajectory traj;
  traj.description = "free(" + field.label + ")";
  if (with_tau) {
    traj.tau_screen_label = tau_screen->label();
    traj.channels["tau"] = {};
    traj.channels["h"] = {};
  }

  OdeCallbacks cb;
  cb.rhs = [&](Real, const Vec& y, Vec& dy) {
    const Vec q = y.head(n);
    const Vec p = y.segment(n, n);
    dy.head(n) = p;
    dy.segment(n, n) = evaluate(field, q);
    if (with_tau) {
      const Real hq = tau_screen->h(q);  // throws off the cone
      dy(2 * n) = 1.0 / (hq * hq);
    }
  };
  cb.record = [&](Real t, const Vec& y) {
    PhaseState s{y.head(n), y.segment(n, n), t};
    if (with_tau) {
      traj.channels["tau"].push_back(y(2 * n));
      traj.channels["h"].push_back(tau_screen->h(s.q));
    }
    traj.samples.push_back(std::move(s));
  };
  if (opts.tau_stop > 0) {
    cb.stop_after = [&, target = opts.tau_stop](Real, const Vec& y) {
      return y(2 * n) >= target;
    };
  }

  traj.options = opts;
  traj.stats = run_integrator(cb, y0, start.t, t_end, opts);
  return traj;
}

Trajectory integrate_constrained(const ConstrainedSystem& system,
                                 const PhaseState& start, Real t_end,
                                 const IntegratorOptions& opts) {
  const Screen& screen = *system.screen;
  const Index n = system.field.dim;
  require_dim(n, screen.dim(), "integrate_constrained(screen)");
  require_dim(n, start.q.size(), "integrate_constrained(q)");
  require_dim(n, start.p.size(), "integrate_constrained(p)");

  if (std::abs(screen.h(start.q) - 1.0) > 1e-10) {
    throw DomainError("integrate_constrained: initial point is off the screen");
  }
  if (std::abs(pair(screen.dh(start.q), start.p)) > 1e-10) {
    throw DomainError(
        "integrate_constrained: initial velocity is not tangent to the screen");
  }

  Trajectory traj;
  traj.description = "constrained(" + system.label + ")";
  traj.channels["lambda"] = {};
  traj.channels["h"] = {};
  for (const Monitor& m : system.monitors) traj.channels[m.name] = {};

  OdeCallbacks cb;
  cb.rhs = [&](Real, const Vec& y, Vec& dy) {
    const Vec q = y.head(n);
    const Vec p = y.segment(n, n);
    const Vec fq = evaluate(system.field, q);
    const Real lam = multiplier_unchecked(system, q, p, fq);
    dy.head(n) = p;
    dy.segment(n, n) = fq + lam * system.reaction.direction(q);
  };
  if (opts.stabilize) {
    cb.post_accept = [&](Real, Vec& y) {
      const Vec q = project_point(screen, y.head(n));
      y.head(n) = q;
      y.segment(n, n) = tangent_project(screen, q, y.segment(n, n));
    };
  }
  cb.record = [&](Real t, const Vec& y) {
    PhaseState s{y.head(n), y.segment(n, n), t};
    const Vec fq = evaluate(system.field, s.q);
    traj.channels["lambda"].push_back(
        multiplier_unchecked(system, s.q, s.p, fq));
    traj.channels["h"].push_back(screen.h(s.q));
    for (const Monitor& m : system.monitors) {
      traj.channels[m.name].push_back(m.value(s.q, s.p));
    }
    traj.samples.push_back(std::move(s));
  };

  Vec y0(2 * n);
  y0.head(n) = start.q;
  y0.segment(n, n) = start.p;
  traj.options = opts;
  traj.stats = run_integrator(cb, y0, start.t, t_end, opts);
  return traj;
}

Real energy(const SymForm& metric, const std::function<Real(const Vec&)>& U,
            const PhaseState& state) {
  return 0.5 * metric.apply(state.p, state.p) - U(state.q);
}

Real energy(const SymForm& metric, const Potential& U, const PhaseState& state) {
  return energy(metric, U.value, state);
}

}  // namespace projdyn
