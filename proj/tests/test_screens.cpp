#include <doctest.h>

#include "projdyn/random.hpp"
#include "projdyn/screens.hpp"

using namespace projdyn;

namespace {

Vec vec2(Real a, Real b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec vec3(Real a, Real b, Real c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("project_point normalizes onto the screen") {
  const QuadricScreen sphere(SymForm::identity(3));
  CHECK((project_point(sphere, vec3(3, 4, 0)) - vec3(0.6, 0.8, 0)).norm() == 0.0);

  Covec last(3);
  last << 0, 0, 1;
  const LinearScreen plane(last);
  CHECK((project_point(plane, vec3(2, 4, 2)) - vec3(1, 2, 1)).norm() == 0.0);

  // Identity on the screen and idempotence.
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec q = rng.vector(3, 0.1, 1.0);
    const Vec on_screen = project_point(sphere, q);
    CHECK(std::abs(sphere.h(on_screen) - 1.0) <= 1e-12);
    CHECK((project_point(sphere, on_screen) - on_screen).norm() <= 1e-12);
  }
}

TEST_CASE("project_point rejects points off the cone") {
  Covec last(2);
  last << 0, 1;
  const LinearScreen plane(last);
  CHECK_THROWS_AS(project_point(plane, vec2(1, -1)), DomainError);
  CHECK_THROWS_AS(project_point(plane, vec2(1, 0)), DomainError);

  const QuadricScreen circle(SymForm::identity(2));
  CHECK_THROWS_AS(project_point(circle, vec2(0, 0)), DomainError);
}

TEST_CASE("tangent_project removes the radial component") {
  const QuadricScreen circle(SymForm::identity(2));
  CHECK((tangent_project(circle, vec2(1, 0), vec2(0, 1)) - vec2(0, 1)).norm() == 0.0);
  CHECK((tangent_project(circle, vec2(1, 0), vec2(1, 1)) - vec2(0, 1)).norm() == 0.0);

  // v = q is annihilated: Dh(q)[q] = 1 on the screen.
  Rng rng(22);
  const QuadricScreen form(random_spd(rng, 3, 0.5, 2.0));
  const Vec q = project_point(form, rng.vector(3, 0.1, 1.0));
  CHECK(tangent_project(form, q, q).norm() <= 1e-14);

  for (int trial = 0; trial < 20; ++trial) {
    const Vec v = rng.vector(3, -2.0, 2.0);
    const Vec w = tangent_project(form, q, v);
    CHECK(std::abs(pair(form.dh(q), w)) <= 1e-12);
  }

  CHECK_THROWS_AS(tangent_project(circle, vec2(2, 0), vec2(0, 1)), DomainError);
}

TEST_CASE("screen_residuals certify derivatives") {
  Covec ell(2);
  ell << 0.5, 2.0;
  const LinearScreen linear(ell);
  // Central differences are truncation-free for linear h; a wide step keeps
  // the rounding part below 1e-12 as well.
  const ScreenResiduals lin = screen_residuals(linear, vec2(1, 1), vec2(1, 0), 1e-3);
  CHECK(lin.euler == 0.0);
  CHECK(lin.dh <= 1e-12);
  CHECK(lin.d2h == 0.0);

  const QuadricScreen quad(SymForm::diagonal(vec2(1, 4)));
  const ScreenResiduals q1 = screen_residuals(quad, vec2(1, 0), vec2(0, 1), 1e-5);
  CHECK(q1.euler <= 1e-14);

  // D2h(v,v) = ⟨Cv,v⟩/h − ⟨Cq,v⟩²/h³ = 1 at q=(1,0), v=(0,1) for C = I.
  const QuadricScreen circle(SymForm::identity(2));
  const Vec q = vec2(1, 0);
  const Vec v = vec2(0, 1);
  CHECK(v.dot(circle.d2h(q) * v) == 1.0);
  const ScreenResiduals q2 = screen_residuals(circle, q, v, 1e-5);
  CHECK(q2.d2h <= 1e-6);
}

TEST_CASE("screens are positively 1-homogeneous with exact Euler identity") {
  Rng rng(23);
  const QuadricScreen quad(random_spd(rng, 3, 0.5, 2.0));
  Covec ell(3);
  ell << 0.3, -0.2, 1.0;
  const LinearScreen linear(ell);

  const Screen* screens[] = {&quad, &linear};
  for (const Screen* screen : screens) {
    int tried = 0;
    while (tried < 50) {
      const Vec q = rng.vector(3, -1.0, 1.0);
      const Real s = rng.uniform(0.5, 2.0);
      if (!screen->in_domain(q)) continue;
      ++tried;
      CHECK(std::abs(screen->h(s * q) - s * screen->h(q)) <=
            1e-12 * s * screen->h(q));
      const ScreenResiduals res = screen_residuals(*screen, q, q, 1e-5);
      CHECK(res.euler <= 1e-12);
    }
  }
}
