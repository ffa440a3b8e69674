#include "projdyn/screens.hpp"

#include <cmath>
#include <cstdio>

namespace projdyn {

namespace {

std::string format_coeffs(const Mat& m) {
  std::string out;
  char buf[40];
  for (Index i = 0; i < m.rows(); ++i) {
    if (i > 0) out += ';';
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out += buf;
    }
  }
  return out;
}

}  // namespace

void Screen::check_domain(const Vec& q) const {
  require_dim(dim(), q.size(), "Screen");
  if (!in_domain(q)) {
    throw DomainError("Screen: point is outside the screen's cone");
  }
}

LinearScreen::LinearScreen(const Covec& ell) : ell_(ell) {
  if (ell_.size() == 0 || ell_.norm() == 0) {
    throw std::invalid_argument("LinearScreen: ell must be nonzero");
  }
}

bool LinearScreen::in_domain(const Vec& q) const {
  return q.size() == dim() && ell_.dot(q) > 0;
}

Real LinearScreen::h(const Vec& q) const {
  check_domain(q);
  return ell_.dot(q);
}

Covec LinearScreen::dh(const Vec& q) const {
  check_domain(q);
  return ell_;
}

Mat LinearScreen::d2h(const Vec& q) const {
  check_domain(q);
  return Mat::Zero(dim(), dim());
}

std::string LinearScreen::label() const {
  return "linear[" + format_coeffs(ell_) + "]";
}

QuadricScreen::QuadricScreen(const SymForm& C) : C_(C) {
  if (!C_.is_spd()) {
    throw NotSpdError("QuadricScreen: form must be positive definite");
  }
}

bool QuadricScreen::in_domain(const Vec& q) const {
  return q.size() == dim() && C_.apply(q, q) > 0;
}

Real QuadricScreen::h(const Vec& q) const {
  check_domain(q);
  return std::sqrt(C_.apply(q, q));
}

Covec QuadricScreen::dh(const Vec& q) const {
  check_domain(q);
  const Real hq = std::sqrt(C_.apply(q, q));
  return (C_.matrix() * q).transpose() / hq;
}

Mat QuadricScreen::d2h(const Vec& q) const {
  check_domain(q);
  const Real hq = std::sqrt(C_.apply(q, q));
  const Vec cq = C_.matrix() * q;
  return C_.matrix() / hq - cq * cq.transpose() / (hq * hq * hq);
}

std::string QuadricScreen::label() const {
  return "quadric[" + format_coeffs(C_.matrix()) + "]";
}

Vec project_point(const Screen& screen, const Vec& q) {
  return q / screen.h(q);
}

Vec tangent_project(const Screen& screen, const Vec& q, const Vec& v) {
  require_dim(screen.dim(), v.size(), "tangent_project");
  const Real hq = screen.h(q);
  if (std::abs(hq - 1.0) > 1e-6) {
    throw DomainError("tangent_project: point is not on the screen");
  }
  return v - pair(screen.dh(q), v) * q;
}

ScreenResiduals screen_residuals(const Screen& screen, const Vec& q, const Vec& v,
                                 Real fd_step) {
  const Real hq = screen.h(q);
  const Covec dhq = screen.dh(q);

  ScreenResiduals res{};
  res.euler = std::abs(pair(dhq, q) - hq);

  Vec probe = q;
  Covec dh_fd(q.size());
  for (Index i = 0; i < q.size(); ++i) {
    probe(i) = q(i) + fd_step;
    const Real plus = screen.h(probe);
    probe(i) = q(i) - fd_step;
    const Real minus = screen.h(probe);
    probe(i) = q(i);
    dh_fd(i) = (plus - minus) / (2 * fd_step);
  }
  res.dh = (dhq - dh_fd).cwiseAbs().maxCoeff();

  // Second differences lose half the working precision to rounding, so the
  // probe step is widened to eps^(1/4) scale regardless of fd_step.
  const Real vnorm = std::max<Real>(1.0, v.norm());
  const Real step2 = std::max(fd_step, 1.2e-4) * std::max<Real>(1.0, q.norm()) / vnorm;
  const Real second_diff =
      (screen.h(q + step2 * v) - 2 * hq + screen.h(q - step2 * v)) / (step2 * step2);
  const Real analytic = v.dot(screen.d2h(q) * v);
  res.d2h = std::abs(analytic - second_diff);
  return res;
}

}  // namespace projdyn
