#pragma once

#include "projdyn/dynamics.hpp"

namespace projdyn {

/// A centrally projected trajectory in the reparametrized time τ, where
/// dτ/dt = h(q(t))⁻². Sample states use τ as their parameter; origin_times
/// keeps the source time of each sample.
struct ReparamTrajectory {
  std::vector<PhaseState> samples;  // .t holds τ
  std::vector<Real> origin_times;
  std::string screen_label;
};

/// τ per sample, with τ(t₀) = 0. Uses the trajectory's integrated "tau"
/// channel when it was computed against this screen; otherwise falls back to
/// quadrature of h⁻² over the sample grid (Simpson with a cubic-interpolated
/// midpoint, fourth order in the sample spacing).
std::vector<Real> appell_time(const Trajectory& traj, const Screen& screen);

/// Central projection of a whole trajectory: positions q/h(q), velocities
/// h·q̇ − (Dh(q)[q̇])·q, parameter τ from appell_time. Projected positions
/// satisfy h=1 and projected velocities are tangent, both to roundoff.
ReparamTrajectory project_trajectory(const Trajectory& traj, const Screen& screen);

/// λ = −h³ḧ along a free trajectory of `field`, with
/// ḧ = D2h(q)(q̇,q̇) + Dh(q)[f(q)]. Agrees with the constrained-system
/// multiplier at the projected states.
std::vector<Real> lambda_from_h(const Trajectory& traj, const ForceField& field,
                                const Screen& screen);

enum class ResampleRule { hermite_cubic, linear };

struct TrajectoryDeviation {
  Real position = 0;
  Real velocity = 0;
};

/// Piecewise interpolation of trajectory samples at parameter t. The cubic
/// rule is Hermite interpolation using the stored velocities.
PhaseState interpolate_state(const std::vector<PhaseState>& samples, Real t,
                             ResampleRule rule = ResampleRule::hermite_cubic);

/// Max deviations between a projected trajectory and a second run, after
/// resampling `b` onto `a`'s τ grid. Requires matching initial states
/// (within 1e-10) and overlapping parameter ranges.
TrajectoryDeviation compare_trajectories(const ReparamTrajectory& a,
                                         const Trajectory& b,
                                         ResampleRule rule = ResampleRule::hermite_cubic);

/// Same comparison between two plain trajectories sharing a time parameter.
TrajectoryDeviation compare_trajectories(const Trajectory& a, const Trajectory& b,
                                         ResampleRule rule = ResampleRule::hermite_cubic);

}  // namespace projdyn
