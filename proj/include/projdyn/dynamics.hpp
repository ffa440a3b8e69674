#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "projdyn/forces.hpp"
#include "projdyn/screens.hpp"

namespace projdyn {

/// |Dh(q)[d(q)]| below this aborts a constrained evaluation: a near-tangent
/// reaction direction no longer determines the multiplier.
inline constexpr Real kTransversalityTol = 1e-10;

/// Reaction direction field d(q); the constraint force is λ·d(q).
struct ReactionField {
  VectorMap direction;
  std::string label;

  /// Central (radial) reaction, d(q) = q.
  static ReactionField central();
  static ReactionField along(VectorMap d, std::string label);
};

/// Named scalar observable recorded along a trajectory.
struct Monitor {
  std::string name;
  std::function<Real(const Vec& q, const Vec& p)> value;
};

/// Second-order dynamics q̈ = f(q) + λ·d(q) restricted to a screen, with λ
/// chosen at every state so the constraint h(q)=1 is stationary to second
/// order.
struct ConstrainedSystem {
  ForceField field;
  std::shared_ptr<const Screen> screen;
  ReactionField reaction;
  std::vector<Monitor> monitors;
  std::string label;
};

struct PhaseState {
  Vec q;
  Vec p;  // velocity with respect to the trajectory's parameter
  Real t = 0;
};

struct IntegratorOptions {
  enum class Method { adaptive_rk54, fixed_rk4 };

  Method method = Method::adaptive_rk54;
  Real rtol = 1e-10;
  Real atol = 1e-10;
  Real initial_step = 1e-3;
  Real fixed_step = 1e-3;
  // Also caps the sample spacing, which keeps cubic resampling of the
  // output well below the comparison tolerances.
  Real max_step = 5e-3;
  long max_steps = 10000000;
  // Re-project (q,p) onto the screen after each accepted step. The
  // multiplier only holds the constraint to second order; the projection
  // removes secular drift, and Euler's identity makes both maps exact
  // retractions for homogeneous h.
  bool stabilize = true;
  // Free runs with a τ channel: stop once τ reaches this value (0 = off).
  Real tau_stop = 0;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

/// Time-ordered phase samples plus named auxiliary channels of the same
/// length ("lambda", "tau", "h", "energy", "eta").
struct Trajectory {
  std::vector<PhaseState> samples;
  std::map<std::string, std::vector<Real>> channels;
  std::string description;
  std::string tau_screen_label;  // screen the τ channel was integrated against
  IntegratorOptions options;
  std::uint64_t seed = 0;
  IntegrationStats stats;

  Index dim() const { return samples.empty() ? 0 : samples.front().q.size(); }
  bool has_channel(const std::string& name) const {
    return channels.count(name) > 0;
  }
  const std::vector<Real>& channel(const std::string& name) const;
};

/// The unique λ making d²/dt² h(q(t)) vanish at (q,p) for q̈ = f + λd:
/// λ = −(D2h(q)(p,p) + Dh(q)[f(q)]) / Dh(q)[d(q)].
/// Requires h(q)=1 within 1e-8 and Dh(q)[p]=0 within 1e-8.
Real multiplier(const ConstrainedSystem& system, const Vec& q, const Vec& p);

/// f(q) + multiplier·d(q).
Vec constrained_accel(const ConstrainedSystem& system, const Vec& q, const Vec& p);

/// Integrate q̈ = f(q). When `tau_screen` is given, the Appell time
/// dτ/dt = h(q)⁻² rides the same adaptive step as an extra channel
/// ("tau", together with "h").
Trajectory integrate_free(const ForceField& field, const PhaseState& start,
                          Real t_end, const IntegratorOptions& opts = {},
                          const Screen* tau_screen = nullptr);

/// Integrate the constrained system from an on-screen, tangent initial state
/// (h(q0)=1 and Dh(q0)[p0]=0, both within 1e-10; project_point and
/// tangent_project produce such states). Channels: "lambda", "h", and one
/// per system monitor.
Trajectory integrate_constrained(const ConstrainedSystem& system,
                                 const PhaseState& start, Real t_end,
                                 const IntegratorOptions& opts = {});

/// E = ½⟨p,p⟩_metric − U(q), the convention under which the central-reaction
/// multiplier on the metric's unit sphere equals −2E for degree −2 potentials.
Real energy(const SymForm& metric, const std::function<Real(const Vec&)>& U,
            const PhaseState& state);
Real energy(const SymForm& metric, const Potential& U, const PhaseState& state);

}  // namespace projdyn
