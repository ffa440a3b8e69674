#pragma once

#include <vector>

#include "projdyn/forces.hpp"

namespace projdyn {

/// An element of phase space, or of its tangent space: a (q-part, p-part)
/// pair.
struct PhaseVec {
  Vec q;
  Vec p;

  Real norm() const { return std::sqrt(q.squaredNorm() + p.squaredNorm()); }
};

/// Vector field on phase space, (q,p) ↦ (q̇-part, ṗ-part).
struct PhaseVectorField {
  Index dim = 0;
  std::function<PhaseVec(const Vec& q, const Vec& p)> eval;
  std::string label;
};

struct XYZFields {
  PhaseVectorField X;  // dynamics: (p, f(q))
  PhaseVectorField Y;  // scaling: (q, −p)
  PhaseVectorField Z;  // vertical: (0, q)
};

XYZFields make_xyz(const ForceField& field);

/// The degree-adapted scaling field Y_β: (q, βp). Y_{−1} is Y.
PhaseVectorField make_y_beta(Index dim, Real beta);

/// [F,H](x) = J_H(x)·F(x) − J_F(x)·H(x) by central differences of the
/// directional derivatives; error O(step²). The sign convention is the one
/// under which [Z,X] = Y for every force field.
PhaseVec lie_bracket(const PhaseVectorField& F, const PhaseVectorField& H,
                     const Vec& q, const Vec& p, Real fd_step);

/// Max residual norms of the bracket relations over the probe points.
struct Sl2Report {
  Real xy = 0;  // ‖[X,Y] − 2X‖
  Real yz = 0;  // ‖[Y,Z] − 2Z‖
  Real zx = 0;  // ‖[Z,X] − Y‖
};

Sl2Report verify_sl2(const ForceField& field, const std::vector<PhaseVec>& points,
                     Real fd_step);

/// Max residual of [X,Y_β] − (1−β)X with 2β = degree + 1.
Real verify_beta(const ForceField& field, const std::vector<PhaseVec>& points,
                 Real fd_step);

}  // namespace projdyn
