#include "projdyn/geometry.hpp"

#include <cmath>

namespace projdyn {

namespace {
constexpr Real kPivotThreshold = 1e-12;
}

SymForm::SymForm(const Mat& entries) {
  if (entries.rows() != entries.cols()) {
    throw std::invalid_argument("SymForm: matrix must be square");
  }
  const Real scale = std::max<Real>(1.0, entries.cwiseAbs().maxCoeff());
  const Real asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    throw std::invalid_argument("SymForm: matrix is not symmetric");
  }
  // (a+b)/2 == (b+a)/2 in IEEE arithmetic, so this is exactly symmetric.
  entries_ = 0.5 * (entries + entries.transpose());

  llt_.compute(entries_);
  spd_ = (llt_.info() == Eigen::Success);
  if (spd_) {
    const Real max_diag = entries_.diagonal().maxCoeff();
    const Mat& l = llt_.matrixLLT();
    for (Index i = 0; i < dim(); ++i) {
      if (!(l(i, i) * l(i, i) > kPivotThreshold * max_diag)) {
        spd_ = false;
        break;
      }
    }
  }
}

SymForm SymForm::identity(Index dim) { return SymForm(Mat::Identity(dim, dim)); }

SymForm SymForm::diagonal(const Vec& d) {
  return SymForm(Mat(d.asDiagonal()));
}

Real SymForm::apply(const Vec& u, const Vec& v) const {
  require_dim(dim(), u.size(), "SymForm::apply(u)");
  require_dim(dim(), v.size(), "SymForm::apply(v)");
  // Grouped so the result is bit-identical under swapping u and v.
  Real acc = 0;
  for (Index i = 0; i < dim(); ++i) {
    acc += entries_(i, i) * (u(i) * v(i));
    for (Index j = i + 1; j < dim(); ++j) {
      acc += entries_(i, j) * (u(i) * v(j) + u(j) * v(i));
    }
  }
  return acc;
}

Vec SymForm::solve(const Vec& rhs) const {
  require_dim(dim(), rhs.size(), "SymForm::solve");
  if (!spd_) {
    throw NotSpdError("SymForm::solve: form is not positive definite");
  }
  return llt_.solve(rhs);
}

Mat SymForm::inverse() const {
  if (!spd_) {
    throw NotSpdError("SymForm::inverse: form is not positive definite");
  }
  return llt_.solve(Mat::Identity(dim(), dim()));
}

Real pair(const Covec& w, const Vec& v) {
  require_dim(w.size(), v.size(), "pair");
  return w.dot(v);
}

Real default_fd_step(const Vec& q) { return 1e-5 * std::max<Real>(1.0, q.norm()); }

Mat fd_jacobian(const VectorMap& map, const Vec& q, Real step) {
  if (!(step > 0)) {
    throw std::invalid_argument("fd_jacobian: step must be positive");
  }
  const Index n = q.size();
  Vec probe = q;

  probe(0) += step;
  Vec plus = map(probe);
  probe(0) = q(0) - step;
  Vec minus = map(probe);
  probe(0) = q(0);

  Mat jac(plus.size(), n);
  jac.col(0) = (plus - minus) / (2 * step);
  for (Index j = 1; j < n; ++j) {
    probe(j) += step;
    plus = map(probe);
    probe(j) = q(j) - step;
    minus = map(probe);
    probe(j) = q(j);
    jac.col(j) = (plus - minus) / (2 * step);
  }
  return jac;
}

}  // namespace projdyn
