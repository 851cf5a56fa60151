#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>  // Vec3::cross

#include <optional>
#include <random>
#include <stdexcept>

namespace tippetop {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

//! Raised when a computation degenerates numerically (singular solve, step
//! underflow, non-finite values). Maps to CLI exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! Parameters of an unbalanced axisymmetric ball on a plane.
//!
//! Every vector quantity in this library lives in the body-fixed principal
//! frame; the third axis is the symmetry axis and the center of mass sits at
//! (0, 0, a) relative to the geometric center. `gamma` denotes the space
//! vertical expressed in body axes.
struct BodyParams {
  double m = 1.0;   //!< mass
  double R = 1.0;   //!< ball radius
  double a = 0.0;   //!< center-of-mass offset along the symmetry axis, a >= 0
  double i1 = 0.4;  //!< transverse central moment of inertia (= i2 by symmetry)
  double i3 = 0.4;  //!< axial central moment of inertia
  double g = 1.0;   //!< gravitational acceleration

  double mu = 0.0;    //!< sliding-friction coefficient (dimensionless for the dry
                      //!< law, force*time/length for the viscous laws)
  double mu_r = 0.0;  //!< rolling-resistance torque coefficient
  double mu_s = 0.0;  //!< spinning-resistance torque coefficient

  bool dimensionless = false;  //!< true once scaled so that m = R = g = 1

  double eps_slip = 1e-6;   //!< slip-speed floor regularizing the dry sliding law
  double tol_geom = 1e-10;  //!< tolerance on state-geometry invariants

  //! Throws std::invalid_argument naming the offending field.
  void validate() const;
};

//! Rescales to m = R = g = 1: a -> a/R, i -> i/(m R^2), torque-rate
//! coefficients mu_r, mu_s -> mu/(m sqrt(g R^3)), and mu with the viscous
//! convention mu -> mu sqrt(R/g)/m (for the dry law supply mu already
//! dimensionless). Rejects double application.
BodyParams nondimensionalize(const BodyParams& p);

//! True when m = R = g = 1 exactly — the scaling every reduced-coordinate
//! and equilibrium formula assumes.
inline bool unit_scaled(const BodyParams& p) {
  return p.m == 1.0 && p.R == 1.0 && p.g == 1.0;
}

//! Center-of-mass offset vector (0, 0, a).
Vec3 axis_offset(const BodyParams& p);

//! Radius vector of the contact point: r = -R*gamma - (0, 0, a).
Vec3 contact_vector(const Vec3& gamma, const BodyParams& p);

//! Optional orientation/position extension: the two horizontal space axes in
//! body coordinates plus the planar center-of-mass position.
struct Pose {
  Vec3 alpha = Vec3::UnitX();
  Vec3 beta = Vec3::UnitY();
  double x = 0.0;
  double y = 0.0;
};

//! Velocity-attitude state of the ball, body frame throughout.
struct FullState {
  Vec3 v = Vec3::Zero();       //!< center-of-mass velocity
  Vec3 omega = Vec3::Zero();   //!< angular velocity
  Vec3 gamma = Vec3::UnitZ();  //!< space vertical, |gamma| = 1
  std::optional<Pose> pose;    //!< carried kinematically when present
};

//! Velocity of the material contact point: v_p = v + omega x r.
Vec3 contact_velocity(const FullState& s, const BodyParams& p);

//! The two state invariants: contact = (v_p, gamma), unit = gamma.gamma - 1.
//! Both vanish on physical states.
struct ConstraintResiduals {
  double contact;
  double unit;
};
ConstraintResiduals constraint_residuals(const FullState& s, const BodyParams& p);

//! Permanent-rotation families: vertical spin with center of mass up
//! (SigmaU, gamma3 = +1), down (SigmaL, gamma3 = -1), and the tilted family
//! (Sigma0) parameterized by the spin magnitude c1.
enum class FamilyKind { SigmaU, SigmaL, Sigma0 };

//! Per-sample diagnostics attached to trajectory records.
struct DiagnosticRecord {
  double t;
  double E;     //!< total energy
  double F;     //!< axial angular momentum i3*omega3
  double G;     //!< -(J omega, r)
  double C;     //!< (I omega, gamma)
  double dEdt;  //!< dissipation rate (F_force, v) + (M_f, omega)
  double res_contact;
  double res_unit;
};

//! Draws a state satisfying the contact constraint: gamma uniform on the
//! sphere, omega and v componentwise uniform in [-2, 2], v then projected
//! onto the constraint plane. Deterministic given the engine state.
FullState random_admissible_state(std::mt19937_64& rng, const BodyParams& p);

}  // namespace tippetop
