#include <doctest.h>

#include <cmath>

#include "projdyn/projective.hpp"
#include "projdyn/random.hpp"

using namespace projdyn;

namespace {

Vec vec2(Real a, Real b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Hand-built radial ray q(t) = (1+t)q0 sampled densely.
Trajectory radial_ray(const Vec& q0, Real t_end, int samples) {
  Trajectory traj;
  for (int i = 0; i <= samples; ++i) {
    const Real t = t_end * i / samples;
    traj.samples.push_back({(1 + t) * q0, q0, t});
  }
  return traj;
}

}  // namespace

TEST_CASE("appell_time: trajectories on the screen keep their parameter") {
  const QuadricScreen circle(SymForm::identity(2));
  Trajectory on_screen;
  for (int i = 0; i <= 500; ++i) {
    const Real t = 0.004 * i;
    on_screen.samples.push_back(
        {vec2(std::cos(t), std::sin(t)), vec2(-std::sin(t), std::cos(t)), t});
  }
  const std::vector<Real> tau = appell_time(on_screen, circle);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    CHECK(std::abs(tau[i] - on_screen.samples[i].t) <= 1e-10);
  }
}

TEST_CASE("appell_time: radial rays give tau = t/(1+t)") {
  Rng rng(51);
  const QuadricScreen circle(SymForm::identity(2));
  Vec q0 = rng.vector(2, -1.0, 1.0);
  q0 /= q0.norm();  // h(q0) = 1
  const Trajectory ray = radial_ray(q0, 3.0, 600);
  const std::vector<Real> tau = appell_time(ray, circle);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const Real t = ray.samples[i].t;
    CHECK(std::abs(tau[i] - t / (1 + t)) <= 1e-10);
  }
}

TEST_CASE("appell_time: free line against arctan, channel and quadrature paths") {
  const QuadricScreen circle(SymForm::identity(2));
  const PhaseState start{vec2(1, 0), vec2(0, 1), 0};

  // Channel path: τ integrated alongside the free run.
  const Trajectory with_channel =
      integrate_free(zero_field(2), start, 10.0, {}, &circle);
  REQUIRE(with_channel.has_channel("tau"));
  const std::vector<Real> tau_channel = appell_time(with_channel, circle);
  for (std::size_t i = 0; i < tau_channel.size(); ++i) {
    CHECK(std::abs(tau_channel[i] - std::atan(with_channel.samples[i].t)) <= 1e-9);
  }

  // Quadrature fallback: same run integrated without the screen attached.
  const Trajectory bare = integrate_free(zero_field(2), start, 10.0, {});
  const std::vector<Real> tau_quad = appell_time(bare, circle);
  for (std::size_t i = 0; i < tau_quad.size(); ++i) {
    CHECK(std::abs(tau_quad[i] - std::atan(bare.samples[i].t)) <= 1e-9);
  }

  // Monotone in both cases.
  for (std::size_t i = 1; i < tau_quad.size(); ++i) {
    CHECK(tau_quad[i] > tau_quad[i - 1]);
  }
}

TEST_CASE("project_trajectory: the free line becomes the unit circle") {
  const QuadricScreen circle(SymForm::identity(2));
  const Trajectory line =
      integrate_free(zero_field(2), {vec2(1, 0), vec2(0, 1), 0}, 10.0, {}, &circle);
  const ReparamTrajectory projected = project_trajectory(line, circle);

  for (const PhaseState& s : projected.samples) {
    CHECK((s.q - vec2(std::cos(s.t), std::sin(s.t))).norm() <= 1e-9);
    CHECK((s.p - vec2(-std::sin(s.t), std::cos(s.t))).norm() <= 1e-9);
    CHECK(std::abs(circle.h(s.q) - 1.0) <= 1e-12);
    CHECK(std::abs(pair(circle.dh(s.q), s.p)) <= 1e-10);
  }
}

TEST_CASE("project_trajectory: on-screen trajectories are fixed") {
  const QuadricScreen circle(SymForm::identity(2));
  Trajectory on_screen;
  for (int i = 0; i <= 50; ++i) {
    const Real t = 0.01 * i;
    on_screen.samples.push_back(
        {vec2(std::cos(t), std::sin(t)), vec2(-std::sin(t), std::cos(t)), t});
  }
  const ReparamTrajectory projected = project_trajectory(on_screen, circle);
  for (std::size_t i = 0; i < projected.samples.size(); ++i) {
    CHECK((projected.samples[i].q - on_screen.samples[i].q).norm() <= 1e-12);
    CHECK((projected.samples[i].p - on_screen.samples[i].p).norm() <= 1e-12);
    CHECK(std::abs(projected.samples[i].t - on_screen.samples[i].t) <= 1e-10);
  }
}

TEST_CASE("project_trajectory: radial rays collapse to a point") {
  Rng rng(52);
  const QuadricScreen circle(SymForm::identity(2));
  Vec q0 = rng.vector(2, 0.1, 1.0);
  q0 /= q0.norm();
  const ReparamTrajectory projected =
      project_trajectory(radial_ray(q0, 2.0, 100), circle);
  for (const PhaseState& s : projected.samples) {
    CHECK((s.q - q0).norm() <= 1e-12);
    CHECK(s.p.norm() <= 1e-12);
  }
}

TEST_CASE("lambda_from_h fixtures") {
  const QuadricScreen circle(SymForm::identity(2));
  const ForceField zero2 = zero_field(2);
  const Trajectory line = integrate_free(zero2, {vec2(1, 0), vec2(0, 1), 0}, 5.0);
  for (Real lam : lambda_from_h(line, zero2, circle)) {
    CHECK(lam == doctest::Approx(-1.0).epsilon(1e-12));
  }

  Covec ell(2);
  ell << 1, 0;
  const LinearScreen plane(ell);
  for (Real lam : lambda_from_h(line, zero2, plane)) {
    CHECK(lam == 0.0);
  }
}

TEST_CASE("lambda_from_h agrees with the constrained multiplier at projected "
          "states") {
  Rng rng(53);
  const SymForm G = random_spd(rng, 3, 0.7, 1.6);
  const SymForm A = random_spd(rng, 3, 0.7, 1.6);
  const ForceField field = braden_field(G, A, 1.0);
  const QuadricScreen screen(G);

  PhaseState start;
  start.q = project_point(screen, rng.vector(3, 0.2, 1.0));
  start.p = 0.5 * rng.vector(3, -1.0, 1.0);
  const Trajectory free_run = integrate_free(field, start, 1.0, {}, &screen);
  const ReparamTrajectory projected = project_trajectory(free_run, screen);

  ConstrainedSystem sys{field, std::make_shared<QuadricScreen>(screen),
                        ReactionField::central(), {}, "check"};
  const std::vector<Real> lam = lambda_from_h(free_run, field, screen);
  Real worst = 0;
  for (std::size_t i = 0; i < projected.samples.size(); ++i) {
    const Real mult = multiplier(sys, projected.samples[i].q, projected.samples[i].p);
    worst = std::max(worst, std::abs(lam[i] - mult));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("compare_trajectories: identical inputs give zero deviation") {
  const Trajectory line =
      integrate_free(zero_field(2), {vec2(1, 0), vec2(0, 1), 0}, 2.0);
  const TrajectoryDeviation dev = compare_trajectories(line, line);
  CHECK(dev.position == 0.0);
  CHECK(dev.velocity == 0.0);
}

TEST_CASE("compare_trajectories: great circle against the analytic curve") {
  const QuadricScreen circle(SymForm::identity(2));
  ConstrainedSystem sys{zero_field(2), std::make_shared<QuadricScreen>(circle),
                        ReactionField::central(), {}, "circle"};
  const Trajectory run =
      integrate_constrained(sys, {vec2(1, 0), vec2(0, 1), 0}, 3.0, {});

  ReparamTrajectory analytic;
  analytic.screen_label = circle.label();
  for (int i = 0; i <= 600; ++i) {
    const Real t = 3.0 * i / 600;
    analytic.samples.push_back(
        {vec2(std::cos(t), std::sin(t)), vec2(-std::sin(t), std::cos(t)), t});
    analytic.origin_times.push_back(t);
  }
  const TrajectoryDeviation dev = compare_trajectories(analytic, run);
  CHECK(dev.position <= 1e-8);
  CHECK(dev.velocity <= 1e-7);
}

TEST_CASE("compare_trajectories rejects poor inputs") {
  const Trajectory a = integrate_free(zero_field(2), {vec2(1, 0), vec2(0, 1), 0}, 1.0);
  Trajectory shifted = a;
  for (PhaseState& s : shifted.samples) s.t += 5.0;
  CHECK_THROWS_AS(compare_trajectories(a, shifted), std::invalid_argument);

  Trajectory other = integrate_free(zero_field(2), {vec2(2, 0), vec2(0, 1), 0}, 1.0);
  CHECK_THROWS_AS(compare_trajectories(a, other), std::invalid_argument);
}

TEST_CASE("projection equivalence is degree sensitive") {
  Rng rng(54);
  const SymForm G = random_spd(rng, 3, 0.7, 1.6);
  const SymForm A = random_spd(rng, 3, 0.7, 1.6);
  const QuadricScreen screen(G);

  // Genuine degree −2 field run through the same pipeline diverges. It must
  // not be a central field: central forces are absorbed by the central
  // reaction, which hides the degree.
  const Mat m = G.inverse() * A.matrix();
  const Mat g = G.matrix();
  ForceField wrong;
  wrong.dim = 3;
  wrong.degree = -2;
  wrong.label = "anisotropic-degree-2";
  wrong.in_domain = [g](const Vec& q) { return q.dot(g * q) > 0; };
  wrong.force = [g, m](const Vec& q) -> Vec {
    return (m * q) / std::pow(q.dot(g * q), 1.5);
  };

  PhaseState start;
  start.q = project_point(screen, rng.vector(3, 0.2, 1.0));
  start.p = 0.4 * rng.vector(3, -1.0, 1.0);

  IntegratorOptions opts;
  opts.tau_stop = 1.0;
  const Trajectory free_run = integrate_free(wrong, start, 50.0, opts, &screen);
  const ReparamTrajectory projected = project_trajectory(free_run, screen);

  const Real h0 = screen.h(start.q);
  const Real h_dot = pair(screen.dh(start.q), start.p);
  ConstrainedSystem sys{wrong, std::make_shared<QuadricScreen>(screen),
                        ReactionField::central(), {}, "wrong-degree"};
  const Trajectory constrained = integrate_constrained(
      sys, {start.q / h0, h0 * start.p - h_dot * start.q, 0}, 1.0, {});

  const TrajectoryDeviation dev = compare_trajectories(projected, constrained);
  CHECK(dev.position >= 1e-2);
}
