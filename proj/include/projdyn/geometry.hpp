#pragma once

#include <functional>

#include "projdyn/types.hpp"

namespace projdyn {

/// Symmetric bilinear form on V.
///
/// Entries are stored exactly symmetric (the constructor symmetrizes its
/// input). A Cholesky factorization is attempted once, on construction, and
/// cached, so values are immutable afterwards and safe to share across
/// threads. Positive definiteness is decided by the factorization with a
/// pivot threshold of 1e-12 times the largest diagonal entry.
class SymForm {
public:
  explicit SymForm(const Mat& entries);

  static SymForm identity(Index dim);
  static SymForm diagonal(const Vec& d);

  Index dim() const { return entries_.rows(); }
  const Mat& matrix() const { return entries_; }

  /// ⟨Fu,v⟩. Accumulated so the result is bit-identical under swapping u,v.
  Real apply(const Vec& u, const Vec& v) const;

  bool is_spd() const { return spd_; }

  /// F⁻¹ rhs. Throws NotSpdError unless the form is positive definite.
  Vec solve(const Vec& rhs) const;

  /// Dense inverse; requires SPD.
  Mat inverse() const;

private:
  Mat entries_;
  Eigen::LLT<Mat> llt_;
  bool spd_ = false;
};

/// Pairing of a covector with a vector (coordinate dot product).
Real pair(const Covec& w, const Vec& v);

inline Real form_apply(const SymForm& F, const Vec& u, const Vec& v) {
  return F.apply(u, v);
}

inline Vec solve(const SymForm& F, const Vec& rhs) { return F.solve(rhs); }

using VectorMap = std::function<Vec(const Vec&)>;

/// Default derivative probe step, 1e-5 · max(1, ‖q‖).
Real default_fd_step(const Vec& q);

/// Central-difference Jacobian of `map` at q; entry error O(step²).
Mat fd_jacobian(const VectorMap& map, const Vec& q, Real step);

}  // namespace projdyn
