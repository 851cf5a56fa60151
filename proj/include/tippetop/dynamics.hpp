#pragma once

#include "tippetop/friction.hpp"
#include "tippetop/types.hpp"

#include <utility>

namespace tippetop {

//! Attitude-dependent inertia coupling: u = r x gamma (= gamma x a_vec,
//! independent of R) and J = I + m * u u^T.
struct MassOperator {
  Vec3 u;
  Mat3 I;
  Mat3 J;
  static MassOperator at(const Vec3& gamma, const BodyParams& p);
};

//! Contact normal force, eliminated from the constraint's time derivative:
//! N = [g - (F,gamma)/m - (u, I^-1 (M_f - omega x I omega)) - (omega, udot)]
//!     / [1/m + (u, I^-1 u)]
//! with u = gamma x a_vec and udot = (gamma x omega) x a_vec. Equivalent to
//! m*(v,gamma)' - (F,gamma) + m*g with the derivative substituted from the
//! equations of motion. N < 0 means the ball would leave the plane; the value
//! is still returned (callers flag it).
double normal_force(const FullState& s, const Vec3& F, const Vec3& M_f, const BodyParams& p);

//! Overload for laws whose torque is exactly r x F.
double normal_force(const FullState& s, const Vec3& F, const BodyParams& p);

//! Friction evaluated with the normal force resolved self-consistently.
//! For dry models N appears inside F; substituting the regularized direction
//! turns the constraint elimination into a scalar linear equation for N.
struct ResolvedFriction {
  FrictionOutput out;
  double N;
};
ResolvedFriction resolve_friction(const FrictionModel& model, const FullState& s,
                                  const BodyParams& p);

//! Full-system right-hand side: assembles the coupled 6x6 linear system in
//! (vdot, omegadot) produced by eliminating N through the constraint, solves
//! it, and appends gammadot = gamma x omega (plus pose kinematics when the
//! state carries a pose). N is reported for diagnostics.
struct FullDerivative {
  FullState dot;
  double N;
};
FullDerivative rhs_general(const FullState& s, const FrictionModel& model, const BodyParams& p);

//! (omega, gamma) subsystem for resistance laws with zero contact force:
//! J omegadot = M_f - omega x I omega + m (g - (omega, udot)) u. The center
//! of mass decouples entirely.
std::pair<Vec3, Vec3> rhs_decoupled_torque(const Vec3& omega, const Vec3& gamma,
                                           const Vec3& M_f, const BodyParams& p);

//! Rolling-resistance specialization: M_f = -mu_r * omega_perp.
std::pair<Vec3, Vec3> rhs_decoupled(const Vec3& omega, const Vec3& gamma, const BodyParams& p);

//! Rolling plus spinning resistance: M_f = -mu_r*omega_perp - mu_s*(omega,gamma)*gamma.
std::pair<Vec3, Vec3> rhs_decoupled_spinning(const Vec3& omega, const Vec3& gamma,
                                             const BodyParams& p);

}  // namespace tippetop
