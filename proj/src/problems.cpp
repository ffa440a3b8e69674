#include "projdyn/problems.hpp"

#include <cmath>

namespace projdyn {

namespace {

Real norm1(const Mat& m) {
  Real worst = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    worst = std::max(worst, m.col(j).cwiseAbs().sum());
  }
  return worst;
}

std::shared_ptr<const Screen> quadric(const SymForm& C) {
  return std::make_shared<QuadricScreen>(C);
}

}  // namespace

EllipsoidData EllipsoidData::make(const SymForm& G, const SymForm& A) {
  if (!G.is_spd()) throw NotSpdError("EllipsoidData: G must be positive definite");
  if (!A.is_spd()) throw NotSpdError("EllipsoidData: A must be positive definite");
  require_dim(G.dim(), A.dim(), "EllipsoidData");

  const Mat a_inv = A.inverse();
  if (norm1(A.matrix()) * norm1(a_inv) > 1e8) {
    throw DomainError("EllipsoidData: A is too ill-conditioned (cond > 1e8)");
  }
  EllipsoidData out{G, A, SymForm(G.matrix() * a_inv * G.matrix()),
                    G.inverse() * A.matrix()};
  if (!out.B.is_spd()) {
    throw NotSpdError("EllipsoidData: derived B = GA⁻¹G is not positive definite");
  }
  return out;
}

Potential neumann_potential(const EllipsoidData& data) {
  const Mat g = data.G.matrix();
  const Mat a = data.A.matrix();
  Potential U;
  U.degree = -2;
  U.label = "neumann";
  U.in_domain = [g](const Vec& q) {
    return q.size() == g.rows() && q.dot(g * q) > 0;
  };
  U.value = [g, a](const Vec& q) -> Real {
    const Real s = q.dot(g * q);
    return 0.5 * q.dot(a * q) / (s * s);
  };
  U.derivative = [g, a](const Vec& q) -> Covec {
    const Real s = q.dot(g * q);
    return ((a * q) / (s * s) - (2.0 * q.dot(a * q) / (s * s * s)) * (g * q))
        .transpose();
  };
  return U;
}

Potential braden_potential(const EllipsoidData& data, Real eta) {
  Potential U = quadratic_power_potential(data.G, -0.5 * eta, -1.0);
  U.label = "braden";
  return U;
}

ConstrainedSystem neumann_system(const EllipsoidData& data) {
  ConstrainedSystem sys;
  sys.label = "neumann";
  sys.field = braden_field(data.G, data.A, 1.0);
  sys.screen = quadric(data.G);
  sys.reaction = ReactionField::central();

  const SymForm metric = data.G;
  const Potential U = neumann_potential(data);
  sys.monitors.push_back(
      {"energy", [metric, U](const Vec& q, const Vec& p) {
         return energy(metric, U, PhaseState{q, p, 0});
       }});
  return sys;
}

ConstrainedSystem braden_system(const EllipsoidData& data, Real eta_scale) {
  ConstrainedSystem sys;
  sys.label = "braden";
  sys.field = braden_field(data.G, data.A, eta_scale);
  sys.screen = quadric(data.B);
  sys.reaction = ReactionField::central();

  const SymForm metric = data.B;
  const Potential U = braden_potential(data, eta_scale);
  sys.monitors.push_back(
      {"energy", [metric, U](const Vec& q, const Vec& p) {
         return energy(metric, U, PhaseState{q, p, 0});
       }});
  return sys;
}

ConstrainedSystem jacobi_system(const JacobiParams& params) {
  const EllipsoidData& data = params.base;
  const Index n = data.dim();
  const Real nu = params.nu;

  ConstrainedSystem sys;
  sys.label = "jacobi";
  sys.field = linear_field(nu * Mat::Identity(n, n));
  sys.field.label = "central_linear";
  sys.screen = quadric(data.A);
  sys.reaction = ReactionField::along(
      [m = data.M](const Vec& q) -> Vec { return m * q; }, "gauss");

  const Mat g = data.G.matrix();
  sys.monitors.push_back({"energy", [g, nu](const Vec& q, const Vec& p) {
                            return 0.5 * p.dot(g * p) - 0.5 * nu * q.dot(g * q);
                          }});
  sys.monitors.push_back({"eta", [params](const Vec& q, const Vec& p) {
                            return joachimsthal(params, PhaseState{q, p, 0});
                          }});
  return sys;
}

Real joachimsthal(const JacobiParams& params, const PhaseState& state) {
  const Real mu = multiplier(jacobi_system(params), state.q, state.p);
  const Vec aq = params.base.A.matrix() * state.q;
  const Real denom = aq.dot(params.base.M * state.q);
  return mu * denom * denom;
}

Vec gauss_map(const EllipsoidData& data, const Vec& Q) {
  return project_point(QuadricScreen(data.G), data.M * Q);
}

Trajectory knorrer_step1(const JacobiParams& params, const Trajectory& jacobi_run) {
  const Mat& m = params.base.M;
  const QuadricScreen b_screen(params.base.B);

  Trajectory out;
  out.description = "knorrer_step1(" + jacobi_run.description + ")";
  out.stats = jacobi_run.stats;
  out.channels["h"] = {};
  out.samples.reserve(jacobi_run.samples.size());
  for (const PhaseState& s : jacobi_run.samples) {
    PhaseState image{m * s.q, m * s.p, s.t};
    out.channels["h"].push_back(b_screen.h(image.q));
    out.samples.push_back(std::move(image));
  }
  return out;
}

ReparamTrajectory knorrer_step2(const EllipsoidData& data,
                                const Trajectory& intermediate_run) {
  return project_trajectory(intermediate_run, QuadricScreen(data.G));
}

OrbitExchangeReport orbit_exchange_report(const JacobiParams& params,
                                          const PhaseState& start, Real t_end,
                                          const IntegratorOptions& opts) {
  OrbitExchangeReport report;

  const Trajectory jacobi_run =
      integrate_constrained(jacobi_system(params), start, t_end, opts);
  report.eta0 = joachimsthal(params, start);

  const Trajectory image = knorrer_step1(params, jacobi_run);

  // The intermediate problem with field scale η, from the mapped initial
  // data. Its multiplier channel should reproduce the Jacobi parameter ν.
  const ConstrainedSystem intermediate = braden_system(params.base, report.eta0);
  PhaseState b_start{project_point(*intermediate.screen, image.samples.front().q),
                     Vec(), start.t};
  b_start.p = tangent_project(*intermediate.screen, b_start.q,
                              image.samples.front().p);
  const Trajectory direct =
      integrate_constrained(intermediate, b_start, t_end, opts);

  const std::vector<Real>& lam = direct.channel("lambda");
  for (Real value : lam) {
    report.multiplier_vs_nu =
        std::max(report.multiplier_vs_nu, std::abs(value - params.nu));
    report.multiplier_drift =
        std::max(report.multiplier_drift, std::abs(value - lam.front()));
  }
  report.deviation = compare_trajectories(image, direct);
  return report;
}

}  // namespace projdyn
