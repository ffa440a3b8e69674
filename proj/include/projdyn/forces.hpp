#pragma once

#include <functional>
#include <string>
#include <vector>

#include "projdyn/geometry.hpp"

namespace projdyn {

using DomainPredicate = std::function<bool(const Vec&)>;

/// Force field on an open semi-cone Ω ⊂ V with a declared homogeneity degree:
/// f(sq) = s^degree f(q) for s > 0. The degree is declared, not inferred; it
/// feeds the Euler identity and the scaling-bracket relation, and is
/// certified by homogeneity_residual / euler_residual.
struct ForceField {
  Index dim = 0;
  Real degree = 0;
  DomainPredicate in_domain;                      // Ω
  VectorMap force;                                // unchecked evaluation
  std::function<Mat(const Vec&)> force_jacobian;  // analytic; empty → use FD
  std::string label;

  bool has_analytic_jacobian() const { return static_cast<bool>(force_jacobian); }
};

/// Ω-checked evaluation.
Vec evaluate(const ForceField& field, const Vec& q);

/// Analytic Jacobian when present, central differences otherwise.
Mat field_jacobian(const ForceField& field, const Vec& q);

/// ‖s^(−degree) f(sq) − f(q)‖ / max(1, ‖f(q)‖).
Real homogeneity_residual(const ForceField& field, const Vec& q, Real s);

/// ‖J_f(q)·q − degree·f(q)‖; the pointwise Euler identity.
Real euler_residual(const ForceField& field, const Vec& q);

/// f(q) = scale · Mq/⟨Gq,q⟩² with M = G⁻¹A, symmetric with respect to G.
/// Degree −3 with Ω = {⟨Gq,q⟩ > 0}; carries an analytic Jacobian.
struct BradenField {
  SymForm G;
  SymForm A;
  SymForm B;  // GA⁻¹G, the other reading of the G-symmetry of M
  Mat M;      // G⁻¹A
  Real scale = 1;

  static BradenField make(const SymForm& G, const SymForm& A, Real scale);
  ForceField field() const;
};

ForceField braden_field(const SymForm& G, const SymForm& A, Real scale);

/// Scalar potential, positively homogeneous of `degree` on its cone.
/// `derivative` is the analytic DU when available.
struct Potential {
  Real degree = 0;
  DomainPredicate in_domain;
  std::function<Real(const Vec&)> value;
  std::function<Covec(const Vec&)> derivative;
  std::string label;
};

enum class GradientMode { analytic, finite_difference };

/// f(q) = metric⁻¹ DU(q); field degree = potential degree − 1.
/// Probes the Euler identity of U at a few unit-scale points; residuals
/// above 1e-6 are reported through `warnings` when provided.
ForceField gradient_field(const SymForm& metric, const Potential& U, GradientMode mode,
                          std::vector<std::string>* warnings = nullptr);

/// U(q) = coeff·⟨Fq,q⟩^exponent, homogeneous of degree 2·exponent, with
/// analytic derivative. Domain is {⟨Fq,q⟩ > 0}.
Potential quadratic_power_potential(const SymForm& F, Real coeff, Real exponent);

/// Force field on an affine space of dimension n (the pre-embedding system).
struct AffineField {
  Index dim = 0;
  DomainPredicate in_domain;
  VectorMap force;
  std::string label;
};

/// Affine chart {ℓ(q)=1} ⊂ V with the transverse axis chosen as the largest
/// component of ℓ. Chart coordinates are the remaining Euclidean coordinates;
/// lifted vectors land in ker ℓ, so central constraint reactions vanish on
/// the chart hyperplane.
struct AffineChart {
  Covec ell;
  Index transverse = 0;

  static AffineChart make(const Covec& ell);

  Index affine_dim() const { return ell.size() - 1; }
  Vec embed_point(const Vec& x) const;   // ℓ(result) = 1
  Vec embed_vector(const Vec& v) const;  // ℓ(result) = 0
  Vec chart_point(const Vec& q) const;   // inverse of embed_point on {ℓ=1}
  Vec chart_vector(const Vec& w) const;
};

/// Extension of `base` to V = ℝ^{n+1} by homogeneity of degree −3:
/// f(q) = ℓ(q)⁻³ · lift(base(chart(q/ℓ(q)))) on Ω = {ℓ(q) > 0}.
ForceField projective_extension(const Covec& ell, const AffineField& base);

/// Attractive inverse-square force −strength·x/‖x‖³ on ℝⁿ∖{0}.
AffineField kepler_affine(Index dim, Real strength = 1);

/// The same formula read as a homogeneous field on Vⁿ∖{0}: degree −2.
ForceField kepler_field(Index dim, Real strength = 1);

ForceField linear_field(const Mat& M);  // f(q) = Mq, degree 1
ForceField zero_field(Index dim, Real declared_degree = -3);

}  // namespace projdyn
