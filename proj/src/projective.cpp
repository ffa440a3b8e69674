#include "projdyn/projective.hpp"

#include <algorithm>
#include <cmath>

namespace projdyn {

namespace {

void require_samples(const std::vector<PhaseState>& samples, const char* where) {
  if (samples.empty()) {
    throw std::invalid_argument(std::string(where) + ": empty trajectory");
  }
}

PhaseState hermite_eval(const PhaseState& a, const PhaseState& b, Real t) {
  const Real dt = b.t - a.t;
  const Real u = (t - a.t) / dt;
  const Real u2 = u * u;
  const Real u3 = u2 * u;

  const Real h00 = 2 * u3 - 3 * u2 + 1;
  const Real h10 = u3 - 2 * u2 + u;
  const Real h01 = -2 * u3 + 3 * u2;
  const Real h11 = u3 - u2;

  const Real g00 = (6 * u2 - 6 * u) / dt;
  const Real g10 = 3 * u2 - 4 * u + 1;
  const Real g01 = (-6 * u2 + 6 * u) / dt;
  const Real g11 = 3 * u2 - 2 * u;

  PhaseState out;
  out.t = t;
  out.q = h00 * a.q + (h10 * dt) * a.p + h01 * b.q + (h11 * dt) * b.p;
  out.p = g00 * a.q + g10 * a.p + g01 * b.q + g11 * b.p;
  return out;
}

PhaseState linear_eval(const PhaseState& a, const PhaseState& b, Real t) {
  const Real u = (t - a.t) / (b.t - a.t);
  return PhaseState{(1 - u) * a.q + u * b.q, (1 - u) * a.p + u * b.p, t};
}

}  // namespace

PhaseState interpolate_state(const std::vector<PhaseState>& samples, Real t,
                             ResampleRule rule) {
  require_samples(samples, "interpolate_state");
  if (t < samples.front().t || t > samples.back().t) {
    throw std::invalid_argument("interpolate_state: parameter out of range");
  }
  auto it = std::upper_bound(
      samples.begin(), samples.end(), t,
      [](Real value, const PhaseState& s) { return value < s.t; });
  if (it == samples.begin()) return samples.front();
  if (it == samples.end()) return samples.back();
  const PhaseState& b = *it;
  const PhaseState& a = *(it - 1);
  return rule == ResampleRule::hermite_cubic ? hermite_eval(a, b, t)
                                             : linear_eval(a, b, t);
}

std::vector<Real> appell_time(const Trajectory& traj, const Screen& screen) {
  require_samples(traj.samples, "appell_time");

  if (traj.has_channel("tau") && traj.tau_screen_label == screen.label()) {
    return traj.channel("tau");
  }

  std::vector<Real> tau(traj.samples.size());
  tau[0] = 0;
  auto rate = [&screen](const Vec& q) {
    const Real hq = screen.h(q);  // throws for h ≤ 0
    return 1.0 / (hq * hq);
  };
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const PhaseState& a = traj.samples[i - 1];
    const PhaseState& b = traj.samples[i];
    const Real dt = b.t - a.t;
    const PhaseState mid = hermite_eval(a, b, a.t + dt / 2);
    tau[i] = tau[i - 1] +
             dt / 6.0 * (rate(a.q) + 4.0 * rate(mid.q) + rate(b.q));
  }
  return tau;
}

ReparamTrajectory project_trajectory(const Trajectory& traj, const Screen& screen) {
  const std::vector<Real> tau = appell_time(traj, screen);

  ReparamTrajectory out;
  out.screen_label = screen.label();
  out.samples.reserve(traj.samples.size());
  out.origin_times.reserve(traj.samples.size());
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const PhaseState& s = traj.samples[i];
    const Real hq = screen.h(s.q);
    const Real h_dot = pair(screen.dh(s.q), s.p);
    out.samples.push_back(
        PhaseState{s.q / hq, hq * s.p - h_dot * s.q, tau[i]});
    out.origin_times.push_back(s.t);
  }
  return out;
}

std::vector<Real> lambda_from_h(const Trajectory& traj, const ForceField& field,
                                const Screen& screen) {
  require_samples(traj.samples, "lambda_from_h");
  std::vector<Real> lambda;
  lambda.reserve(traj.samples.size());
  for (const PhaseState& s : traj.samples) {
    const Real hq = screen.h(s.q);
    const Real h_ddot = s.p.dot(screen.d2h(s.q) * s.p) +
                        pair(screen.dh(s.q), evaluate(field, s.q));
    lambda.push_back(-hq * hq * hq * h_ddot);
  }
  return lambda;
}

namespace {

TrajectoryDeviation compare_impl(const std::vector<PhaseState>& a,
                                 const std::vector<PhaseState>& b,
                                 ResampleRule rule) {
  require_samples(a, "compare_trajectories");
  require_samples(b, "compare_trajectories");

  const Real lo = std::max(a.front().t, b.front().t);
  const Real hi = std::min(a.back().t, b.back().t);
  if (!(lo <= hi)) {
    throw std::invalid_argument(
        "compare_trajectories: parameter ranges do not overlap");
  }
  if ((a.front().q - b.front().q).norm() > 1e-10 ||
      (a.front().p - b.front().p).norm() > 1e-10) {
    throw std::invalid_argument(
        "compare_trajectories: initial states do not match");
  }

  TrajectoryDeviation dev;
  for (const PhaseState& s : a) {
    if (s.t < lo || s.t > hi) continue;
    const PhaseState r = interpolate_state(b, s.t, rule);
    dev.position = std::max(dev.position, (s.q - r.q).norm());
    dev.velocity = std::max(dev.velocity, (s.p - r.p).norm());
  }
  return dev;
}

}  // namespace

TrajectoryDeviation compare_trajectories(const ReparamTrajectory& a,
                                         const Trajectory& b, ResampleRule rule) {
  return compare_impl(a.samples, b.samples, rule);
}

TrajectoryDeviation compare_trajectories(const Trajectory& a, const Trajectory& b,
                                         ResampleRule rule) {
  return compare_impl(a.samples, b.samples, rule);
}

}  // namespace projdyn
