#include "projdyn/forces.hpp"

#include <cmath>

#include "projdyn/random.hpp"

namespace projdyn {

Vec evaluate(const ForceField& field, const Vec& q) {
  require_dim(field.dim, q.size(), "evaluate");
  if (!field.in_domain(q)) {
    throw DomainError("evaluate: point is outside the field's domain (" +
                      field.label + ")");
  }
  return field.force(q);
}

Mat field_jacobian(const ForceField& field, const Vec& q) {
  require_dim(field.dim, q.size(), "field_jacobian");
  if (!field.in_domain(q)) {
    throw DomainError("field_jacobian: point is outside the field's domain");
  }
  if (field.has_analytic_jacobian()) {
    return field.force_jacobian(q);
  }
  return fd_jacobian(field.force, q, default_fd_step(q));
}

Real homogeneity_residual(const ForceField& field, const Vec& q, Real s) {
  if (!(s > 0)) {
    throw std::invalid_argument("homogeneity_residual: s must be positive");
  }
  const Vec fq = evaluate(field, q);
  const Vec fsq = evaluate(field, s * q);
  const Real scale = std::pow(s, -field.degree);
  return (scale * fsq - fq).norm() / std::max<Real>(1.0, fq.norm());
}

Real euler_residual(const ForceField& field, const Vec& q) {
  const Vec fq = evaluate(field, q);
  const Mat jac = field_jacobian(field, q);
  return (jac * q - field.degree * fq).norm();
}

BradenField BradenField::make(const SymForm& G, const SymForm& A, Real scale) {
  if (!G.is_spd()) throw NotSpdError("BradenField: G must be positive definite");
  if (!A.is_spd()) throw NotSpdError("BradenField: A must be positive definite");
  require_dim(G.dim(), A.dim(), "BradenField");

  BradenField out{G, A, SymForm(G.matrix() * A.inverse() * G.matrix()),
                  G.inverse() * A.matrix(), scale};
  if (!out.B.is_spd()) {
    throw NotSpdError("BradenField: derived B = GA⁻¹G is not positive definite");
  }
  return out;
}

ForceField BradenField::field() const {
  const Mat g = G.matrix();
  const Mat m = M;
  const Real eta = scale;
  const Index n = G.dim();

  ForceField f;
  f.dim = n;
  f.degree = -3;
  f.label = "braden";
  f.in_domain = [g](const Vec& q) {
    return q.size() == g.rows() && q.dot(g * q) > 0;
  };
  f.force = [g, m, eta](const Vec& q) -> Vec {
    const Real s = q.dot(g * q);
    return eta * (m * q) / (s * s);
  };
  f.force_jacobian = [g, m, eta](const Vec& q) -> Mat {
    const Real s = q.dot(g * q);
    const Vec mq = m * q;
    const Vec gq = g * q;
    return eta * (m / (s * s) - 4.0 * mq * gq.transpose() / (s * s * s));
  };
  return f;
}

ForceField braden_field(const SymForm& G, const SymForm& A, Real scale) {
  return BradenField::make(G, A, scale).field();
}

ForceField gradient_field(const SymForm& metric, const Potential& U, GradientMode mode,
                          std::vector<std::string>* warnings) {
  if (!metric.is_spd()) {
    throw NotSpdError("gradient_field: metric must be positive definite");
  }
  if (mode == GradientMode::analytic && !U.derivative) {
    throw std::invalid_argument(
        "gradient_field: analytic mode requires a potential derivative");
  }
  const Index n = metric.dim();

  auto du = [U, mode](const Vec& q) -> Covec {
    if (mode == GradientMode::analytic) return U.derivative(q);
    Covec g(q.size());
    const Real step = default_fd_step(q);
    Vec probe = q;
    for (Index i = 0; i < q.size(); ++i) {
      probe(i) = q(i) + step;
      const Real plus = U.value(probe);
      probe(i) = q(i) - step;
      const Real minus = U.value(probe);
      probe(i) = q(i);
      g(i) = (plus - minus) / (2 * step);
    }
    return g;
  };

  if (warnings) {
    // Euler-identity probe of the declared potential degree at a few
    // unit-scale points of the domain.
    Rng rng(0x9e3779b97f4a7c15ull);
    int probed = 0;
    Real worst = 0;
    for (int attempt = 0; attempt < 64 && probed < 5; ++attempt) {
      Vec q = rng.vector(n, -1.0, 1.0);
      if (q.norm() < 0.3) continue;
      q /= q.norm();
      if (!U.in_domain(q)) continue;
      ++probed;
      const Real res = std::abs(pair(du(q), q) - U.degree * U.value(q)) /
                       std::max<Real>(1.0, std::abs(U.value(q)));
      worst = std::max(worst, res);
    }
    if (probed > 0 && worst > 1e-6) {
      warnings->push_back("gradient_field(" + U.label +
                          "): potential fails the Euler identity for degree " +
                          std::to_string(U.degree) + " (residual " +
                          std::to_string(worst) + ")");
    }
  }

  ForceField f;
  f.dim = n;
  f.degree = U.degree - 1;
  f.label = "grad(" + U.label + ")";
  f.in_domain = U.in_domain;
  f.force = [metric, du](const Vec& q) -> Vec {
    return metric.solve(du(q).transpose());
  };
  return f;
}

Potential quadratic_power_potential(const SymForm& F, Real coeff, Real exponent) {
  const Mat m = F.matrix();
  Potential U;
  U.degree = 2 * exponent;
  U.label = "quadratic_power";
  U.in_domain = [m](const Vec& q) {
    return q.size() == m.rows() && q.dot(m * q) > 0;
  };
  U.value = [m, coeff, exponent](const Vec& q) -> Real {
    return coeff * std::pow(q.dot(m * q), exponent);
  };
  U.derivative = [m, coeff, exponent](const Vec& q) -> Covec {
    const Real s = q.dot(m * q);
    return (2 * coeff * exponent * std::pow(s, exponent - 1)) *
           (m * q).transpose();
  };
  return U;
}

AffineChart AffineChart::make(const Covec& ell) {
  if (ell.size() < 2 || ell.cwiseAbs().maxCoeff() == 0) {
    throw std::invalid_argument("AffineChart: ell must be nonzero, dim ≥ 2");
  }
  AffineChart chart;
  chart.ell = ell;
  ell.cwiseAbs().maxCoeff(&chart.transverse);
  return chart;
}

Vec AffineChart::embed_point(const Vec& x) const {
  require_dim(affine_dim(), x.size(), "AffineChart::embed_point");
  Vec q(ell.size());
  Real rest = 0;
  Index j = 0;
  for (Index i = 0; i < ell.size(); ++i) {
    if (i == transverse) continue;
    q(i) = x(j++);
    rest += ell(i) * q(i);
  }
  q(transverse) = (1.0 - rest) / ell(transverse);
  return q;
}

Vec AffineChart::embed_vector(const Vec& v) const {
  require_dim(affine_dim(), v.size(), "AffineChart::embed_vector");
  Vec w(ell.size());
  Real rest = 0;
  Index j = 0;
  for (Index i = 0; i < ell.size(); ++i) {
    if (i == transverse) continue;
    w(i) = v(j++);
    rest += ell(i) * w(i);
  }
  w(transverse) = -rest / ell(transverse);
  return w;
}

Vec AffineChart::chart_point(const Vec& q) const {
  require_dim(ell.size(), q.size(), "AffineChart::chart_point");
  Vec x(affine_dim());
  Index j = 0;
  for (Index i = 0; i < ell.size(); ++i) {
    if (i == transverse) continue;
    x(j++) = q(i);
  }
  return x;
}

Vec AffineChart::chart_vector(const Vec& w) const { return chart_point(w); }

ForceField projective_extension(const Covec& ell, const AffineField& base) {
  require_dim(ell.size(), base.dim + 1, "projective_extension");
  const AffineChart chart = AffineChart::make(ell);

  ForceField f;
  f.dim = ell.size();
  f.degree = -3;
  f.label = "extension(" + base.label + ")";
  f.in_domain = [chart, base](const Vec& q) {
    if (q.size() != chart.ell.size()) return false;
    const Real hq = chart.ell.dot(q);
    if (!(hq > 0)) return false;
    return base.in_domain(chart.chart_point(q / hq));
  };
  f.force = [chart, base](const Vec& q) -> Vec {
    const Real hq = chart.ell.dot(q);
    if (!(hq > 0)) {
      throw DomainError("projective_extension: ℓ(q) ≤ 0");
    }
    const Vec x = chart.chart_point(q / hq);
    return chart.embed_vector(base.force(x)) / (hq * hq * hq);
  };
  return f;
}

AffineField kepler_affine(Index dim, Real strength) {
  AffineField f;
  f.dim = dim;
  f.label = "kepler_affine";
  f.in_domain = [dim](const Vec& x) { return x.size() == dim && x.norm() > 0; };
  f.force = [strength](const Vec& x) -> Vec {
    const Real r = x.norm();
    return -strength * x / (r * r * r);
  };
  return f;
}

ForceField kepler_field(Index dim, Real strength) {
  ForceField f;
  f.dim = dim;
  f.degree = -2;
  f.label = "kepler";
  f.in_domain = [dim](const Vec& q) { return q.size() == dim && q.norm() > 0; };
  f.force = [strength](const Vec& q) -> Vec {
    const Real r = q.norm();
    return -strength * q / (r * r * r);
  };
  f.force_jacobian = [strength, dim](const Vec& q) -> Mat {
    const Real r = q.norm();
    const Real r3 = r * r * r;
    return -strength * (Mat::Identity(dim, dim) / r3 -
                        3.0 * q * q.transpose() / (r3 * r * r));
  };
  return f;
}

ForceField linear_field(const Mat& M) {
  if (M.rows() != M.cols()) {
    throw std::invalid_argument("linear_field: matrix must be square");
  }
  ForceField f;
  f.dim = M.rows();
  f.degree = 1;
  f.label = "linear";
  f.in_domain = [n = M.rows()](const Vec& q) { return q.size() == n; };
  f.force = [M](const Vec& q) -> Vec { return M * q; };
  f.force_jacobian = [M](const Vec&) -> Mat { return M; };
  return f;
}

ForceField zero_field(Index dim, Real declared_degree) {
  ForceField f;
  f.dim = dim;
  f.degree = declared_degree;
  f.label = "zero";
  f.in_domain = [dim](const Vec& q) { return q.size() == dim; };
  f.force = [dim](const Vec&) -> Vec { return Vec::Zero(dim); };
  f.force_jacobian = [dim](const Vec&) -> Mat { return Mat::Zero(dim, dim); };
  return f;
}

}  // namespace projdyn
