#include "doctest.h"

#include "tippetop/types.hpp"

#include <cmath>
#include <random>

using namespace tippetop;

namespace {

BodyParams oblate() {
  BodyParams p;
  p.a = 0.29;
  p.i1 = 0.55;
  p.i3 = 0.51;
  p.dimensionless = true;
  return p;
}

}  // namespace

TEST_CASE("validate accepts defaults and the oblate set") {
  CHECK_NOTHROW(BodyParams{}.validate());
  CHECK_NOTHROW(oblate().validate());
}

TEST_CASE("validate names the offending field") {
  auto expect_reject = [](void (*mutate)(BodyParams&), const char* field) {
    BodyParams p = oblate();
    mutate(p);
    try {
      p.validate();
      FAIL("expected invalid_argument for ", field);
    } catch (const std::invalid_argument& e) {
      CHECK_MESSAGE(std::string(e.what()).find(field) != std::string::npos, e.what());
    }
  };
  expect_reject([](BodyParams& p) { p.m = 0.0; }, "m");
  expect_reject([](BodyParams& p) { p.R = -1.0; }, "R");
  expect_reject([](BodyParams& p) { p.g = 0.0; }, "g");
  expect_reject([](BodyParams& p) { p.i1 = 0.0; }, "i1");
  expect_reject([](BodyParams& p) { p.i3 = std::nan(""); }, "i3");
  expect_reject([](BodyParams& p) { p.a = -0.1; }, "a");
  expect_reject([](BodyParams& p) { p.mu = -1.0; }, "mu");
  expect_reject([](BodyParams& p) { p.mu_r = -1.0; }, "mu_r");
  expect_reject([](BodyParams& p) { p.mu_s = -0.5; }, "mu_s");
  expect_reject([](BodyParams& p) { p.eps_slip = 0.0; }, "eps_slip");
  expect_reject([](BodyParams& p) { p.tol_geom = -1e-9; }, "tol_geom");
}

TEST_CASE("nondimensionalize rescales the dimensional oblate set") {
  BodyParams p;
  p.m = 2.0;
  p.R = 0.5;
  p.g = 9.81;
  p.a = 0.145;
  p.i1 = 0.275;
  p.i3 = 0.255;
  const BodyParams q = nondimensionalize(p);
  CHECK(q.m == 1.0);
  CHECK(q.R == 1.0);
  CHECK(q.g == 1.0);
  CHECK(q.a == doctest::Approx(0.29).epsilon(1e-15));
  CHECK(q.i1 == doctest::Approx(0.55).epsilon(1e-15));
  CHECK(q.i3 == doctest::Approx(0.51).epsilon(1e-15));
  CHECK(q.dimensionless);
}

TEST_CASE("nondimensionalize is the identity on already unit-scaled input") {
  BodyParams p;
  p.a = 0.29;
  p.i1 = 0.55;
  p.i3 = 0.51;
  p.mu_r = 1.0;
  const BodyParams q = nondimensionalize(p);
  CHECK(q.a == p.a);
  CHECK(q.i1 == p.i1);
  CHECK(q.i3 == p.i3);
  CHECK(q.mu_r == p.mu_r);
  CHECK(q.dimensionless);
}

TEST_CASE("nondimensionalize rejects double application and bad input") {
  CHECK_THROWS_AS(nondimensionalize(oblate()), std::invalid_argument);
  BodyParams bad;
  bad.m = -1.0;
  CHECK_THROWS_AS(nondimensionalize(bad), std::invalid_argument);
}

TEST_CASE("unit_scaled checks m = R = g = 1 exactly") {
  CHECK(unit_scaled(oblate()));
  BodyParams p;
  p.R = 0.5;
  CHECK_FALSE(unit_scaled(p));
}

TEST_CASE("contact vector at the three canonical attitudes") {
  const BodyParams p = oblate();
  CHECK(axis_offset(p).isApprox(Vec3(0, 0, 0.29)));
  // upright: contact straight below the center of mass
  CHECK(contact_vector(Vec3(0, 0, 1), p).isApprox(Vec3(0, 0, -1.29)));
  // inverted: the offset shortens the arm
  CHECK(contact_vector(Vec3(0, 0, -1), p).isApprox(Vec3(0, 0, 0.71)));
  // horizontal axis
  CHECK(contact_vector(Vec3(1, 0, 0), p).isApprox(Vec3(-1, 0, -0.29)));
}

TEST_CASE("contact velocity composes v and omega x r") {
  const BodyParams p = oblate();
  FullState s;
  CHECK(contact_velocity(s, p).norm() == 0.0);

  s.v = Vec3(1, 0, 0);
  CHECK(contact_velocity(s, p).isApprox(Vec3(1, 0, 0)));

  // pure spin about the vertical axis: contact point on the axis, no slip
  s.v = Vec3::Zero();
  s.omega = Vec3(0, 0, 5);
  CHECK(contact_velocity(s, p).norm() == 0.0);

  // rolling about a horizontal axis drags the contact point
  s.omega = Vec3(0, 2, 0);
  CHECK(contact_velocity(s, p).isApprox(Vec3(-2.58, 0, 0)));
}

TEST_CASE("constraint residuals vanish on physical states only") {
  const BodyParams p = oblate();
  FullState s;
  auto r = constraint_residuals(s, p);
  CHECK(r.contact == 0.0);
  CHECK(r.unit == 0.0);

  s.gamma = Vec3(0, 0, 2);  // |gamma|^2 - 1 = 3
  r = constraint_residuals(s, p);
  CHECK(r.unit == doctest::Approx(3.0));

  s.gamma = Vec3(0, 0, 1);
  s.v = Vec3(0, 0, 1);  // lifting off the plane
  r = constraint_residuals(s, p);
  CHECK(r.contact == doctest::Approx(1.0));
  CHECK(r.unit == 0.0);
}

TEST_CASE("random admissible states satisfy both constraints") {
  const BodyParams p = oblate();
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    const FullState s = random_admissible_state(rng, p);
    const auto r = constraint_residuals(s, p);
    CHECK(std::abs(r.contact) < 1e-12);
    CHECK(std::abs(r.unit) < 1e-12);
    for (int k = 0; k < 3; ++k) {
      CHECK(s.omega[k] >= -2.0);
      CHECK(s.omega[k] <= 2.0);
    }
  }
}

TEST_CASE("random admissible states are seed-deterministic") {
  const BodyParams p = oblate();
  std::mt19937_64 a(7), b(7), c(8);
  const FullState sa = random_admissible_state(a, p);
  const FullState sb = random_admissible_state(b, p);
  const FullState sc = random_admissible_state(c, p);
  CHECK(sa.v == sb.v);
  CHECK(sa.omega == sb.omega);
  CHECK(sa.gamma == sb.gamma);
  CHECK(sa.gamma != sc.gamma);
}
