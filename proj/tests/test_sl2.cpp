#include <doctest.h>

#include "projdyn/random.hpp"
#include "projdyn/sl2.hpp"

using namespace projdyn;

namespace {

Vec vec2(Real a, Real b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::vector<PhaseVec> seeded_points(Rng& rng, Index dim, int count) {
  std::vector<PhaseVec> points;
  while (static_cast<int>(points.size()) < count) {
    Vec q = rng.vector(dim, -1.0, 1.0);
    if (q.norm() < 0.4) continue;
    q *= rng.uniform(0.7, 1.3) / q.norm();
    points.push_back({q, rng.vector(dim, -1.0, 1.0)});
  }
  return points;
}

}  // namespace

TEST_CASE("make_xyz evaluates the three phase fields") {
  const XYZFields v = make_xyz(zero_field(2));

  const PhaseVec x = v.X.eval(vec2(1, 0), vec2(0, 1));
  CHECK((x.q - vec2(0, 1)).norm() == 0.0);
  CHECK(x.p.norm() == 0.0);

  const PhaseVec y = v.Y.eval(vec2(1, 2), vec2(3, 4));
  CHECK((y.q - vec2(1, 2)).norm() == 0.0);
  CHECK((y.p - vec2(-3, -4)).norm() == 0.0);

  const PhaseVec z = v.Z.eval(vec2(1, 2), vec2(3, 4));
  CHECK(z.q.norm() == 0.0);
  CHECK((z.p - vec2(1, 2)).norm() == 0.0);
}

TEST_CASE("field-independent brackets: [Z,X] = Y and [Y,Z] = 2Z") {
  Rng rng(61);
  const ForceField fields[] = {
      kepler_field(2), zero_field(2),
      braden_field(SymForm::identity(2), SymForm::diagonal(vec2(1, 4)), 1.0)};
  for (const ForceField& field : fields) {
    const XYZFields v = make_xyz(field);
    const Vec q = vec2(1, 0);
    const Vec p = vec2(0, 1);

    const PhaseVec zx = lie_bracket(v.Z, v.X, q, p, 1e-5);
    const PhaseVec y = v.Y.eval(q, p);
    CHECK(PhaseVec{zx.q - y.q, zx.p - y.p}.norm() <= 1e-9);

    const Vec q2 = rng.vector(2, -1.0, 1.0);
    const Vec p2 = rng.vector(2, -1.0, 1.0);
    const PhaseVec yz = lie_bracket(v.Y, v.Z, q2, p2, 1e-5);
    const PhaseVec z = v.Z.eval(q2, p2);
    CHECK(PhaseVec{yz.q - 2 * z.q, yz.p - 2 * z.p}.norm() <= 1e-9);
  }
}

TEST_CASE("[X,Y] - 2X measures the Euler defect of the degree") {
  // Degree −2 field labeled as itself: the defect is ‖f(q)‖ = 1 at q=(1,0).
  const ForceField kepler = kepler_field(2);
  const XYZFields v = make_xyz(kepler);
  const Vec q = vec2(1, 0);
  const Vec p = vec2(0, 0);
  const PhaseVec br = lie_bracket(v.X, v.Y, q, p, 1e-5);
  const PhaseVec x = v.X.eval(q, p);
  const Real defect = PhaseVec{br.q - 2 * x.q, br.p - 2 * x.p}.norm();
  CHECK(defect == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("the bracket defect equals the Euler residual pointwise") {
  Rng rng(62);
  const ForceField kepler = kepler_field(3);
  const XYZFields v = make_xyz(kepler);
  for (const PhaseVec& pt : seeded_points(rng, 3, 10)) {
    const PhaseVec br = lie_bracket(v.X, v.Y, pt.q, pt.p, 1e-5);
    const PhaseVec x = v.X.eval(pt.q, pt.p);
    const Real defect = PhaseVec{br.q - 2 * x.q, br.p - 2 * x.p}.norm();
    // [X,Y] − 2X = (0, −Df(q)q − 3f(q)), and the declared degree is −3 in
    // the Y-bracket; for a degree −2 field that is the Euler defect of −3.
    const Real euler = (field_jacobian(kepler, pt.q) * pt.q + 3.0 *
                        evaluate(kepler, pt.q)).norm();
    CHECK(defect == doctest::Approx(euler).epsilon(1e-4));
  }
}

TEST_CASE("verify_sl2: braden fields satisfy all three relations") {
  Rng rng(63);
  const SymForm G = random_spd(rng, 3, 0.7, 1.6);
  const SymForm A = random_spd(rng, 3, 0.7, 1.6);
  const ForceField field = braden_field(G, A, 1.0);

  const Sl2Report report = verify_sl2(field, seeded_points(rng, 3, 100), 1e-5);
  CHECK(report.xy <= 1e-5);
  CHECK(report.yz <= 1e-5);
  CHECK(report.zx <= 1e-5);
}

TEST_CASE("verify_sl2: zero field is exact, wrong degree only breaks [X,Y]") {
  Rng rng(64);
  const std::vector<PhaseVec> points = seeded_points(rng, 3, 20);

  const Sl2Report exact = verify_sl2(zero_field(3), points, 1e-5);
  CHECK(exact.xy <= 1e-10);
  CHECK(exact.yz <= 1e-10);
  CHECK(exact.zx <= 1e-10);

  const ForceField kepler = kepler_field(3);
  const Sl2Report broken = verify_sl2(kepler, points, 1e-5);
  Real min_field = 1e30;
  for (const PhaseVec& pt : points) {
    min_field = std::min(min_field, evaluate(kepler, pt.q).norm());
  }
  CHECK(broken.xy >= min_field - 1e-5);
  CHECK(broken.yz <= 1e-5);
  CHECK(broken.zx <= 1e-5);
}

TEST_CASE("verify_beta holds across degrees when the declaration is honest") {
  Rng rng(65);
  const std::vector<PhaseVec> points = seeded_points(rng, 3, 25);

  const SymForm G = random_spd(rng, 3, 0.7, 1.6);
  const SymForm A = random_spd(rng, 3, 0.7, 1.6);
  CHECK(verify_beta(braden_field(G, A, 1.0), points, 1e-5) <= 1e-5);  // α = −3
  CHECK(verify_beta(kepler_field(3), points, 1e-5) <= 1e-5);          // α = −2
  CHECK(verify_beta(linear_field(random_matrix(rng, 3, 3, -1.0, 1.0)), points,
                    1e-5) <= 1e-10);  // α = 1, exact for polynomial data

  // Lying about the degree makes the residual grow with ‖f‖.
  ForceField mislabeled = kepler_field(3);
  mislabeled.degree = -3;
  CHECK(verify_beta(mislabeled, points, 1e-5) >= 0.1);
}
