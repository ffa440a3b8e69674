#include "projdyn/random.hpp"

namespace projdyn {

Mat random_matrix(Rng& rng, Index rows, Index cols, Real a, Real b) {
  Mat m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(a, b);
  }
  return m;
}

SymForm random_spd(Rng& rng, Index dim, Real eig_min, Real eig_max) {
  const Mat r = random_matrix(rng, dim, dim, -1.0, 1.0);
  const Mat q = Eigen::HouseholderQR<Mat>(r).householderQ();
  Vec eigs(dim);
  for (Index i = 0; i < dim; ++i) eigs(i) = rng.uniform(eig_min, eig_max);
  const Mat s = q * eigs.asDiagonal() * q.transpose();
  return SymForm(0.5 * (s + s.transpose()));
}

}  // namespace projdyn
