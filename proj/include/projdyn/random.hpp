#pragma once

#include <cstdint>
#include <random>

#include "projdyn/geometry.hpp"

namespace projdyn {

/// Deterministic uniform variates built directly from mt19937_64 output,
/// so seeded fixtures do not depend on the standard library's distribution
/// internals.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0,1), 53-bit resolution.
  Real uniform() { return static_cast<Real>(eng_() >> 11) * 0x1.0p-53; }

  Real uniform(Real a, Real b) { return a + (b - a) * uniform(); }

  Vec vector(Index dim, Real a, Real b) {
    Vec v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = uniform(a, b);
    return v;
  }

private:
  std::mt19937_64 eng_;
};

Mat random_matrix(Rng& rng, Index rows, Index cols, Real a, Real b);

/// Random SPD form with eigenvalues drawn uniformly from [eig_min, eig_max];
/// the eigenbasis comes from a QR factorization of a random matrix.
SymForm random_spd(Rng& rng, Index dim, Real eig_min, Real eig_max);

}  // namespace projdyn
