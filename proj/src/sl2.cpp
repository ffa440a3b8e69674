#include "projdyn/sl2.hpp"

#include <cmath>

namespace projdyn {

XYZFields make_xyz(const ForceField& field) {
  const Index n = field.dim;
  XYZFields out;
  out.X = {n,
           [field](const Vec& q, const Vec& p) {
             return PhaseVec{p, evaluate(field, q)};
           },
           "X"};
  out.Y = {n, [](const Vec& q, const Vec& p) { return PhaseVec{q, -p}; }, "Y"};
  out.Z = {n,
           [n](const Vec& q, const Vec& p) {
             (void)p;
             return PhaseVec{Vec::Zero(n), q};
           },
           "Z"};
  return out;
}

PhaseVectorField make_y_beta(Index dim, Real beta) {
  return {dim,
          [beta](const Vec& q, const Vec& p) { return PhaseVec{q, beta * p}; },
          "Y_beta"};
}

namespace {

// Directional derivative J_H(x)·u by central differences along the unit
// direction of u, with displacement 1e-5-scaled by the phase norm.
PhaseVec directional_derivative(const PhaseVectorField& H, const Vec& q,
                                const Vec& p, const PhaseVec& u, Real step) {
  const Real unorm = u.norm();
  const Index n = q.size();
  if (unorm == 0) return PhaseVec{Vec::Zero(n), Vec::Zero(n)};

  const Real phase_norm = std::sqrt(q.squaredNorm() + p.squaredNorm());
  const Real eps = step * std::max<Real>(1.0, phase_norm);

  const Vec dq = (eps / unorm) * u.q;
  const Vec dp = (eps / unorm) * u.p;
  const PhaseVec plus = H.eval(q + dq, p + dp);
  const PhaseVec minus = H.eval(q - dq, p - dp);
  const Real scale = unorm / (2 * eps);
  return PhaseVec{scale * (plus.q - minus.q), scale * (plus.p - minus.p)};
}

}  // namespace

PhaseVec lie_bracket(const PhaseVectorField& F, const PhaseVectorField& H,
                     const Vec& q, const Vec& p, Real fd_step) {
  require_dim(F.dim, q.size(), "lie_bracket(q)");
  require_dim(F.dim, p.size(), "lie_bracket(p)");
  require_dim(F.dim, H.dim, "lie_bracket(fields)");
  const PhaseVec fx = F.eval(q, p);
  const PhaseVec hx = H.eval(q, p);
  const PhaseVec dh_f = directional_derivative(H, q, p, fx, fd_step);
  const PhaseVec df_h = directional_derivative(F, q, p, hx, fd_step);
  return PhaseVec{dh_f.q - df_h.q, dh_f.p - df_h.p};
}

Sl2Report verify_sl2(const ForceField& field, const std::vector<PhaseVec>& points,
                     Real fd_step) {
  const XYZFields v = make_xyz(field);
  Sl2Report report;
  for (const PhaseVec& x : points) {
    const PhaseVec xy = lie_bracket(v.X, v.Y, x.q, x.p, fd_step);
    const PhaseVec yz = lie_bracket(v.Y, v.Z, x.q, x.p, fd_step);
    const PhaseVec zx = lie_bracket(v.Z, v.X, x.q, x.p, fd_step);
    const PhaseVec X = v.X.eval(x.q, x.p);
    const PhaseVec Y = v.Y.eval(x.q, x.p);
    const PhaseVec Z = v.Z.eval(x.q, x.p);

    report.xy = std::max(report.xy, PhaseVec{xy.q - 2 * X.q, xy.p - 2 * X.p}.norm());
    report.yz = std::max(report.yz, PhaseVec{yz.q - 2 * Z.q, yz.p - 2 * Z.p}.norm());
    report.zx = std::max(report.zx, PhaseVec{zx.q - Y.q, zx.p - Y.p}.norm());
  }
  return report;
}

Real verify_beta(const ForceField& field, const std::vector<PhaseVec>& points,
                 Real fd_step) {
  const Real beta = (field.degree + 1) / 2;
  const XYZFields v = make_xyz(field);
  const PhaseVectorField y_beta = make_y_beta(field.dim, beta);

  Real worst = 0;
  for (const PhaseVec& x : points) {
    const PhaseVec br = lie_bracket(v.X, y_beta, x.q, x.p, fd_step);
    const PhaseVec X = v.X.eval(x.q, x.p);
    const Real c = 1 - beta;
    worst = std::max(worst, PhaseVec{br.q - c * X.q, br.p - c * X.p}.norm());
  }
  return worst;
}

}  // namespace projdyn
