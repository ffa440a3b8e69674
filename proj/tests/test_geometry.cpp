#include <doctest.h>

#include "projdyn/geometry.hpp"
#include "projdyn/random.hpp"

using namespace projdyn;

namespace {

Vec vec2(Real a, Real b) {
  Vec v(2);
  v << a, b;
  return v;
}

Covec covec2(Real a, Real b) {
  Covec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("pair is the coordinate dot product") {
  CHECK(pair(covec2(1, 0), vec2(0, 1)) == 0.0);
  CHECK(pair(covec2(1, 2), vec2(3, 4)) == 11.0);
  CHECK(pair(covec2(0, 0), vec2(5, 7)) == 0.0);

  Covec w(3);
  w << 1, 2, 3;
  CHECK_THROWS_AS(pair(w, vec2(1, 2)), std::invalid_argument);
}

TEST_CASE("form_apply evaluates the bilinear form") {
  const SymForm id = SymForm::identity(2);
  CHECK(form_apply(id, vec2(3, 4), vec2(3, 4)) == 25.0);

  const SymForm diag = SymForm::diagonal(vec2(1, 4));
  CHECK(form_apply(diag, vec2(1, 0), vec2(0, 1)) == 0.0);

  CHECK_THROWS_AS(form_apply(id, Vec::Ones(3), vec2(1, 2)), std::invalid_argument);
}

TEST_CASE("form_apply is bitwise symmetric in its arguments") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const SymForm F = random_spd(rng, 3, 0.2, 5.0);
    const Vec u = rng.vector(3, -10.0, 10.0);
    const Vec v = rng.vector(3, -10.0, 10.0);
    CHECK(form_apply(F, u, v) == form_apply(F, v, u));
  }
}

TEST_CASE("solve inverts SPD forms") {
  const SymForm id = SymForm::identity(2);
  const Vec v = vec2(3.5, -2.0);
  CHECK((solve(id, v) - v).norm() == 0.0);

  CHECK((solve(SymForm::diagonal(vec2(2, 8)), vec2(2, 8)) - vec2(1, 1)).norm() ==
        doctest::Approx(0.0));
  CHECK((solve(SymForm::diagonal(vec2(4, 1)), vec2(1, 0)) - vec2(0.25, 0)).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("solve rejects non-SPD forms") {
  const SymForm indefinite = SymForm::diagonal(vec2(1, -1));
  CHECK_FALSE(indefinite.is_spd());
  CHECK_THROWS_AS(solve(indefinite, vec2(1, 1)), NotSpdError);

  const SymForm singular = SymForm::diagonal(vec2(1, 0));
  CHECK_FALSE(singular.is_spd());
}

TEST_CASE("solve round-trips within 1e-12 up to condition 1e6") {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const SymForm F = random_spd(rng, 4, 1e-3, 1e3);  // condition ≤ 1e6
    const Vec rhs = rng.vector(4, -1.0, 1.0);
    const Vec x = solve(F, rhs);
    const Real rel = (F.matrix() * x - rhs).norm() / std::max<Real>(1.0, rhs.norm());
    CHECK(rel <= 1e-12);
  }
}

TEST_CASE("SymForm validates and stores exactly symmetric entries") {
  Mat skew(2, 2);
  skew << 1, 2, 3, 1;
  CHECK_THROWS_AS(SymForm{skew}, std::invalid_argument);
  CHECK_THROWS_AS(SymForm{Mat::Ones(2, 3)}, std::invalid_argument);

  Rng rng(13);
  const SymForm F = random_spd(rng, 4, 0.5, 2.0);
  CHECK((F.matrix() - F.matrix().transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fd_jacobian matches analytic derivatives") {
  const VectorMap identity = [](const Vec& q) { return q; };
  const Mat j_id = fd_jacobian(identity, vec2(0.3, -0.7), 1e-5);
  CHECK((j_id - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-10);

  const VectorMap square_first = [](const Vec& q) {
    return vec2(q(0) * q(0), 0.0);
  };
  Mat expect(2, 2);
  expect << 2, 0, 0, 0;
  const Mat j_sq = fd_jacobian(square_first, vec2(1, 0), 1e-5);
  CHECK((j_sq - expect).cwiseAbs().maxCoeff() <= 1e-9);

  const VectorMap constant = [](const Vec&) { return vec2(4, 2); };
  CHECK(fd_jacobian(constant, vec2(9, 9), 1e-5).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(fd_jacobian(identity, vec2(0, 0), 0.0), std::invalid_argument);
}

TEST_CASE("fd_jacobian of linear maps is exact to 1e-9") {
  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat m = random_matrix(rng, 3, 3, -2.0, 2.0);
    const Vec q = rng.vector(3, -1.0, 1.0);
    const Mat j = fd_jacobian([m](const Vec& x) -> Vec { return m * x; }, q, 1e-5);
    CHECK((j - m).cwiseAbs().maxCoeff() <= 1e-9);
  }
}
