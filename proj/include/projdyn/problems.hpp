#pragma once

#include "projdyn/dynamics.hpp"
#include "projdyn/projective.hpp"

namespace projdyn {

/// The (G, A) pair with the derived operators shared by the Neumann,
/// intermediate, and Jacobi problems: M = G⁻¹A (symmetric with respect to G)
/// and B = GA⁻¹G. Construction rejects non-SPD inputs and A with condition
/// number above 1e8, where the multiplier denominators ⟨AQ,MQ⟩ degrade.
struct EllipsoidData {
  SymForm G;
  SymForm A;
  SymForm B;
  Mat M;

  static EllipsoidData make(const SymForm& G, const SymForm& A);
  Index dim() const { return G.dim(); }
};

struct JacobiParams {
  EllipsoidData base;
  Real nu = 0;  // strength of the quadratic potential ν⟨GQ,Q⟩/2
};

/// ½⟨Aq,q⟩/⟨Gq,q⟩², the degree −2 extension of the Neumann potential.
Potential neumann_potential(const EllipsoidData& data);

/// −½η⟨Gq,q⟩⁻¹, the intermediate problem's inverse-quadratic potential.
Potential braden_potential(const EllipsoidData& data, Real eta);

/// Braden field constrained to the G-sphere with central reaction; monitors
/// the energy in the metric G.
ConstrainedSystem neumann_system(const EllipsoidData& data);

/// Braden field scaled by η, constrained to the B-sphere with central
/// reaction; monitors the energy in the metric B.
ConstrainedSystem braden_system(const EllipsoidData& data, Real eta_scale);

/// Motion on the ellipsoid ⟨AQ,Q⟩=1 in the metric G under ν⟨GQ,Q⟩/2:
/// Q̈ = μMQ + νQ with reaction direction MQ. Monitors the energy
/// ½⟨GQ̇,Q̇⟩ − ν⟨GQ,Q⟩/2 and the Joachimsthal constant.
ConstrainedSystem jacobi_system(const JacobiParams& params);

/// η = μ⟨AQ,MQ⟩² for an on-ellipsoid tangent state.
Real joachimsthal(const JacobiParams& params, const PhaseState& state);

/// Q ↦ MQ/‖MQ‖_G; the composition of the two correspondence steps.
Vec gauss_map(const EllipsoidData& data, const Vec& Q);

/// First correspondence step: q = MQ, q̇ = MQ̇, same time parameter. The
/// image lies on the B-sphere and satisfies the intermediate equation
/// q̈ = η·Mq/⟨Gq,q⟩² + νq with η the Joachimsthal constant of the source.
Trajectory knorrer_step1(const JacobiParams& params, const Trajectory& jacobi_run);

/// Second step: central projection of a B-sphere trajectory onto the
/// G-sphere with the Appell time change; the image follows the Neumann
/// system.
ReparamTrajectory knorrer_step2(const EllipsoidData& data,
                                const Trajectory& intermediate_run);

/// Parameter/multiplier exchange between the Jacobi and intermediate
/// problems: the Jacobi run's conserved η becomes the intermediate field
/// scale, and the intermediate multiplier channel reproduces the Jacobi
/// parameter ν.
struct OrbitExchangeReport {
  Real eta0 = 0;                  // Joachimsthal constant at t = 0
  Real multiplier_vs_nu = 0;      // max_t |λ_B(t) − ν|
  Real multiplier_drift = 0;      // max_t |λ_B(t) − λ_B(0)|
  TrajectoryDeviation deviation;  // step-1 image vs direct intermediate run
};

OrbitExchangeReport orbit_exchange_report(const JacobiParams& params,
                                          const PhaseState& start, Real t_end,
                                          const IntegratorOptions& opts = {});

}  // namespace projdyn
