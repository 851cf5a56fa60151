#include "doctest.h"

#include "tippetop/friction.hpp"

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

TEST_CASE("smooth model produces nothing") {
  const BodyParams p = oblate();
  std::mt19937_64 rng(1);
  const FullState s = random_admissible_state(rng, p);
  const FrictionOutput out = eval_friction(FrictionModel::smooth(), s, std::nullopt, p);
  CHECK(out.force.norm() == 0.0);
  CHECK(out.torque.norm() == 0.0);
  CHECK_FALSE(out.needs_normal_force);
  CHECK_FALSE(needs_normal_force(FrictionModel::smooth()));
}

TEST_CASE("viscous sliding: sliding upright ball") {
  BodyParams p = oblate();
  p.mu = 1.0;
  FullState s;
  s.v = Vec3(1, 0, 0);  // contact point slides with v, r = (0,0,-1.29)
  const FrictionOutput out = eval_friction(FrictionModel::viscous_sliding(), s, std::nullopt, p);
  CHECK(out.force.isApprox(Vec3(-1, 0, 0)));
  CHECK(out.torque.isApprox(Vec3(0, 1.29, 0)));
}

TEST_CASE("dry sliding requires a non-negative normal force") {
  BodyParams p = oblate();
  p.mu = 0.3;
  FullState s;
  s.v = Vec3(1, 0, 0);
  const FrictionModel dry = FrictionModel::dry_sliding();
  CHECK_THROWS_AS(eval_friction(dry, s, std::nullopt, p), std::invalid_argument);
  CHECK_THROWS_AS(eval_friction(dry, s, -0.5, p), std::invalid_argument);
  CHECK(needs_normal_force(dry));
  CHECK(dry_coefficient(dry, p) == doctest::Approx(0.3));

  const FrictionOutput out = eval_friction(dry, s, 2.0, p);
  CHECK(out.force.isApprox(Vec3(-0.6, 0, 0)));
  CHECK(out.needs_normal_force);
}

TEST_CASE("dry sliding direction is regularized near zero slip") {
  BodyParams p = oblate();
  p.mu = 0.3;
  p.eps_slip = 1e-6;
  FullState s;
  s.v = Vec3(1e-9, 0, 0);
  const FrictionOutput out = eval_friction(FrictionModel::dry_sliding(), s, 2.0, p);
  // |v_p| below the floor: force scales linearly, 0.3*2*1e-9/1e-6
  CHECK(out.force[0] == doctest::Approx(-6e-4).epsilon(1e-12));
  // exactly at rest the regularized direction vanishes
  s.v = Vec3::Zero();
  CHECK(eval_friction(FrictionModel::dry_sliding(), s, 2.0, p).force.norm() == 0.0);
}

TEST_CASE("contact-speed torque law") {
  BodyParams p = oblate();
  p.mu = 1.0;
  FullState s;
  s.omega = Vec3(0, 0, 5);  // omega parallel to r: no relative speed
  FrictionOutput out = eval_friction(FrictionModel::contact_torque(), s, std::nullopt, p);
  CHECK(out.force.norm() == 0.0);

  s.omega = Vec3(1, 0, 0);
  out = eval_friction(FrictionModel::contact_torque(), s, std::nullopt, p);
  CHECK(out.force.isApprox(Vec3(0, -1.29, 0)));
  CHECK(out.torque.isApprox(Vec3(-1.6641, 0, 0)));

  // torque r x F is orthogonal to r for every state
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const FullState q = random_admissible_state(rng, p);
    const FrictionOutput o = eval_friction(FrictionModel::contact_torque(), q, std::nullopt, p);
    CHECK(std::abs(o.torque.dot(contact_vector(q.gamma, p))) < 1e-12);
  }
}

TEST_CASE("axis-anisotropic torque damps the transverse spin only") {
  BodyParams p = oblate();
  p.mu = 0.5;
  FullState s;
  s.omega = Vec3(2, 0, 3);
  const FrictionOutput out = eval_friction(FrictionModel::anisotropic_axis(), s, std::nullopt, p);
  CHECK(out.force.norm() == 0.0);
  CHECK(out.torque.isApprox(Vec3(-1, 0, 0)));
  CHECK(out.torque[2] == 0.0);
}

TEST_CASE("rolling resistance damps the component normal to gamma") {
  BodyParams p = oblate();
  p.mu_r = 1.0;
  FullState s;
  s.omega = Vec3(0, 0, 5);  // spin about the vertical: untouched
  CHECK(eval_friction(FrictionModel::rolling_resistance(), s, std::nullopt, p).torque.norm() ==
        0.0);
  s.omega = Vec3(2, 0, 0);  // fully transverse
  CHECK(eval_friction(FrictionModel::rolling_resistance(), s, std::nullopt, p)
            .torque.isApprox(Vec3(-2, 0, 0)));
}

TEST_CASE("spinning resistance damps the component along gamma") {
  BodyParams p = oblate();
  p.mu_s = 2.0;
  FullState s;
  s.omega = Vec3(1, 1, 3);
  const FrictionOutput out = eval_friction(FrictionModel::spinning_resistance(), s, std::nullopt, p);
  CHECK(out.torque.isApprox(Vec3(0, 0, -6)));
  s.omega = Vec3(1, -1, 0);  // orthogonal to gamma
  CHECK(eval_friction(FrictionModel::spinning_resistance(), s, std::nullopt, p).torque.norm() ==
        0.0);
}

TEST_CASE("composite sums its parts and shares N") {
  BodyParams p = oblate();
  p.mu = 0.4;
  p.mu_r = 0.7;
  CHECK_THROWS_AS(eval_friction(FrictionModel::composite({}), FullState{}, std::nullopt, p),
                  std::invalid_argument);

  const FrictionModel both =
      FrictionModel::composite({FrictionModel::viscous_sliding(), FrictionModel::rolling_resistance()});
  CHECK_FALSE(needs_normal_force(both));

  std::mt19937_64 rng(11);
  const FullState s = random_admissible_state(rng, p);
  const FrictionOutput sum = eval_friction(both, s, std::nullopt, p);
  const FrictionOutput va = eval_friction(FrictionModel::viscous_sliding(), s, std::nullopt, p);
  const FrictionOutput rb = eval_friction(FrictionModel::rolling_resistance(), s, std::nullopt, p);
  CHECK(sum.force.isApprox(va.force + rb.force));
  CHECK(sum.torque.isApprox(va.torque + rb.torque));

  const FrictionModel with_dry =
      FrictionModel::composite({FrictionModel::dry_sliding(), FrictionModel::rolling_resistance()});
  CHECK(needs_normal_force(with_dry));
  CHECK(dry_coefficient(with_dry, p) == doctest::Approx(0.4));
  CHECK(eval_friction(with_dry, s, 1.5, p).needs_normal_force);
}

TEST_CASE("pointwise dissipation rates on admissible states") {
  BodyParams p = oblate();
  p.mu = 0.8;
  p.mu_r = 0.6;
  p.mu_s = 0.3;
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const FullState s = random_admissible_state(rng, p);
    const Vec3 vp = contact_velocity(s, p);
    const Vec3 wp = s.omega - s.omega.dot(s.gamma) * s.gamma;

    // viscous: power (F, v) + (M, omega) collapses to (F, v_p) = -mu |v_p|^2
    const FrictionOutput v = eval_friction(FrictionModel::viscous_sliding(), s, std::nullopt, p);
    const double pv = v.force.dot(s.v) + v.torque.dot(s.omega);
    CHECK(pv == doctest::Approx(-p.mu * vp.squaredNorm()).epsilon(1e-12));

    const FrictionOutput an = eval_friction(FrictionModel::anisotropic_axis(), s, std::nullopt, p);
    const double w12 = s.omega[0] * s.omega[0] + s.omega[1] * s.omega[1];
    CHECK(an.torque.dot(s.omega) == doctest::Approx(-p.mu * w12).epsilon(1e-12));

    const FrictionOutput ro = eval_friction(FrictionModel::rolling_resistance(), s, std::nullopt, p);
    CHECK(ro.torque.dot(s.omega) == doctest::Approx(-p.mu_r * wp.squaredNorm()).epsilon(1e-12));

    const FrictionOutput sp = eval_friction(FrictionModel::spinning_resistance(), s, std::nullopt, p);
    const double spin = s.omega.dot(s.gamma);
    CHECK(sp.torque.dot(s.omega) == doctest::Approx(-p.mu_s * spin * spin).epsilon(1e-12));
  }
}

TEST_CASE("conservation signatures of all eight models") {
  BodyParams p = oblate();
  p.mu = 0.5;
  p.mu_r = 0.5;
  p.mu_s = 0.5;
  using S = std::set<Integral>;
  const S all{Integral::Jellett, Integral::Lagrange, Integral::Area};
  const S jellett{Integral::Jellett};

  CHECK(conservation_signature(FrictionModel::smooth(), p, 40) == all);
  CHECK(conservation_signature(FrictionModel::viscous_sliding(), p, 40) == jellett);
  CHECK(conservation_signature(FrictionModel::dry_sliding(), p, 40) == jellett);
  CHECK(conservation_signature(FrictionModel::contact_torque(), p, 40) == jellett);
  CHECK(conservation_signature(FrictionModel::anisotropic_axis(), p, 40) == S{Integral::Lagrange});
  CHECK(conservation_signature(FrictionModel::rolling_resistance(), p, 40) == S{Integral::Area});
  CHECK(conservation_signature(FrictionModel::spinning_resistance(), p, 40) == S{});
  CHECK(conservation_signature(
            FrictionModel::composite({FrictionModel::rolling_resistance(),
                                      FrictionModel::spinning_resistance()}),
            p, 40) == S{});
  CHECK(conservation_signature(
            FrictionModel::composite({FrictionModel::viscous_sliding(),
                                      FrictionModel::contact_torque()}),
            p, 40) == jellett);

  CHECK_THROWS_AS(conservation_signature(FrictionModel::smooth(), p, 0), std::invalid_argument);
}
