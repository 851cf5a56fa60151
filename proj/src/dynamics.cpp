#include "tippetop/dynamics.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace tippetop {

namespace {

Vec3 inertia_apply_inverse(const BodyParams& p, const Vec3& x) {
  return Vec3(x[0] / p.i1, x[1] / p.i1, x[2] / p.i3);
}

Vec3 inertia_apply(const BodyParams& p, const Vec3& x) {
  return Vec3(p.i1 * x[0], p.i1 * x[1], p.i3 * x[2]);
}

}  // namespace

MassOperator MassOperator::at(const Vec3& gamma, const BodyParams& p) {
  MassOperator op;
  op.u = gamma.cross(axis_offset(p));  // r x gamma with r = -R*gamma - a_vec
  op.I = Vec3(p.i1, p.i1, p.i3).asDiagonal();
  op.J = op.I + p.m * op.u * op.u.transpose();
  return op;
}

double normal_force(const FullState& s, const Vec3& F, const Vec3& M_f, const BodyParams& p) {
  const Vec3 u = s.gamma.cross(axis_offset(p));
  const Vec3 udot = s.gamma.cross(s.omega).cross(axis_offset(p));
  const Vec3 gyro = M_f - s.omega.cross(inertia_apply(p, s.omega));
  const double numer =
      p.g - F.dot(s.gamma) / p.m - u.dot(inertia_apply_inverse(p, gyro)) - s.omega.dot(udot);
  const double denom = 1.0 / p.m + u.dot(inertia_apply_inverse(p, u));
  return numer / denom;
}

double normal_force(const FullState& s, const Vec3& F, const BodyParams& p) {
  return normal_force(s, F, contact_vector(s.gamma, p).cross(F), p);
}

ResolvedFriction resolve_friction(const FrictionModel& model, const FullState& s,
                                  const BodyParams& p) {
  if (!needs_normal_force(model)) {
    const FrictionOutput out = eval_friction(model, s, std::nullopt, p);
    return {out, normal_force(s, out.force, out.torque, p)};
  }

  // Evaluating with N = 0 zeroes exactly the dry terms, leaving the N-free
  // contributions F_o, M_o. The dry part adds F when substituted into the
  // normal-force elimination:
  //   F = F_o - mu_d N vhat,  M_f = M_o - mu_d N (r x vhat),
  // which makes the elimination linear in N.
  const FrictionOutput base = eval_friction(model, s, 0.0, p);
  const double mu_d = dry_coefficient(model, p);
  const Vec3 vp = contact_velocity(s, p);
  const Vec3 vhat = vp / std::max(vp.norm(), p.eps_slip);
  const Vec3 r = contact_vector(s.gamma, p);
  const Vec3 u = s.gamma.cross(axis_offset(p));

  const double n0 = normal_force(s, base.force, base.torque, p);
  const double denom0 = 1.0 / p.m + u.dot(inertia_apply_inverse(p, u));
  const double coupling =
      mu_d * (vhat.dot(s.gamma) / p.m + u.dot(inertia_apply_inverse(p, r.cross(vhat))));
  // n0 * denom0 is the N-free numerator; the dry terms move to the left side.
  const double denom = denom0 - coupling;
  if (!(std::abs(denom) > 1e-14))
    throw NumericalError("resolve_friction: dry normal-force solve is singular");
  const double N = n0 * denom0 / denom;

  ResolvedFriction rf;
  rf.N = N;
  rf.out.force = base.force - mu_d * N * vhat;
  rf.out.torque = base.torque - mu_d * N * r.cross(vhat);
  rf.out.needs_normal_force = true;
  return rf;
}

FullDerivative rhs_general(const FullState& s, const FrictionModel& model, const BodyParams& p) {
  const ResolvedFriction rf = resolve_friction(model, s, p);
  const Vec3& F = rf.out.force;
  const Vec3& M = rf.out.torque;

  const MassOperator op = MassOperator::at(s.gamma, p);
  const Vec3 udot = s.gamma.cross(s.omega).cross(axis_offset(p));
  const double omega_udot = s.omega.dot(udot);
  const double F_normal = F.dot(s.gamma);

  Eigen::Matrix<double, 6, 6> A = Eigen::Matrix<double, 6, 6>::Zero();
  A.topLeftCorner<3, 3>() = p.m * Mat3::Identity();
  A.topRightCorner<3, 3>() = p.m * s.gamma * op.u.transpose();
  A.bottomRightCorner<3, 3>() = op.J;

  Eigen::Matrix<double, 6, 1> b;
  b.head<3>() = F - F_normal * s.gamma - p.m * s.omega.cross(s.v) - p.m * omega_udot * s.gamma;
  b.tail<3>() = M - F_normal * op.u - s.omega.cross(inertia_apply(p, s.omega)) +
                p.m * (p.g - omega_udot) * op.u;

  const Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(A);
  if (!lu.isInvertible()) throw NumericalError("rhs_general: singular mass matrix");
  const Eigen::Matrix<double, 6, 1> x = lu.solve(b);

  FullDerivative d;
  d.N = rf.N;
  d.dot.v = x.head<3>();
  d.dot.omega = x.tail<3>();
  d.dot.gamma = s.gamma.cross(s.omega);
  if (s.pose) {
    Pose pd;
    pd.alpha = s.pose->alpha.cross(s.omega);
    pd.beta = s.pose->beta.cross(s.omega);
    pd.x = s.v.dot(s.pose->alpha);
    pd.y = s.v.dot(s.pose->beta);
    d.dot.pose = pd;
  }
  return d;
}

std::pair<Vec3, Vec3> rhs_decoupled_torque(const Vec3& omega, const Vec3& gamma, const Vec3& M_f,
                                           const BodyParams& p) {
  const MassOperator op = MassOperator::at(gamma, p);
  const Vec3 udot = gamma.cross(omega).cross(axis_offset(p));
  const Vec3 b = M_f - omega.cross(inertia_apply(p, omega)) +
                 p.m * (p.g - omega.dot(udot)) * op.u;
  const Vec3 omega_dot = op.J.llt().solve(b);
  return {omega_dot, gamma.cross(omega)};
}

std::pair<Vec3, Vec3> rhs_decoupled(const Vec3& omega, const Vec3& gamma, const BodyParams& p) {
  const Vec3 omega_perp = omega - omega.dot(gamma) * gamma;
  return rhs_decoupled_torque(omega, gamma, -p.mu_r * omega_perp, p);
}

std::pair<Vec3, Vec3> rhs_decoupled_spinning(const Vec3& omega, const Vec3& gamma,
                                             const BodyParams& p) {
  const Vec3 omega_perp = omega - omega.dot(gamma) * gamma;
  const Vec3 M = -p.mu_r * omega_perp - p.mu_s * omega.dot(gamma) * gamma;
  return rhs_decoupled_torque(omega, gamma, M, p);
}

}  // namespace tippetop
