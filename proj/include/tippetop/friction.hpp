#pragma once

#include "tippetop/types.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace tippetop {

//! Resistance laws at the contact. Coefficients are read from BodyParams.
enum class FrictionKind {
  Smooth,             //!< no resistance
  ViscousSliding,     //!< F = -mu * v_p, M_f = r x F
  DrySliding,         //!< F = -mu * N * v_p/|v_p| (regularized), M_f = r x F
  ContactTorque,      //!< F = -mu * (omega x r), M_f = r x F
  AnisotropicAxis,    //!< F = 0, M_f = -mu * e3 x (omega x e3)
  RollingResistance,  //!< F = 0, M_f = -mu_r * omega_perp
  SpinningResistance, //!< F = 0, M_f = -mu_s * (omega, gamma) * gamma
  Composite,          //!< component-wise sum of sub-models
};

struct FrictionModel {
  FrictionKind kind = FrictionKind::Smooth;
  std::vector<FrictionModel> parts;  //!< non-empty iff kind == Composite

  static FrictionModel smooth() { return {FrictionKind::Smooth, {}}; }
  static FrictionModel viscous_sliding() { return {FrictionKind::ViscousSliding, {}}; }
  static FrictionModel dry_sliding() { return {FrictionKind::DrySliding, {}}; }
  static FrictionModel contact_torque() { return {FrictionKind::ContactTorque, {}}; }
  static FrictionModel anisotropic_axis() { return {FrictionKind::AnisotropicAxis, {}}; }
  static FrictionModel rolling_resistance() { return {FrictionKind::RollingResistance, {}}; }
  static FrictionModel spinning_resistance() { return {FrictionKind::SpinningResistance, {}}; }
  static FrictionModel composite(std::vector<FrictionModel> sub) {
    return {FrictionKind::Composite, std::move(sub)};
  }
};

//! Contact force and resistance torque, body axes.
struct FrictionOutput {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
  bool needs_normal_force = false;  //!< true iff a dry-sliding term contributed
};

//! True when evaluating the model requires the contact normal force N
//! (i.e. the model is or contains DrySliding).
bool needs_normal_force(const FrictionModel& model);

//! Total dry-sliding coefficient: the model's force carries a term
//! -dry_coefficient * N * v_p/|v_p|. Zero for N-free models.
double dry_coefficient(const FrictionModel& model, const BodyParams& p);

//! Evaluates the resistance law at the given state. N must be supplied
//! (and non-negative) iff the model needs the normal force; for Composite
//! the same N feeds every dry part.
FrictionOutput eval_friction(const FrictionModel& model, const FullState& s,
                             std::optional<double> N, const BodyParams& p);

//! The three candidate linear-in-omega conserved quantities.
enum class Integral { Jellett, Lagrange, Area };

//! Default seed of the admissible-state sampler used by conservation_signature.
inline constexpr std::uint64_t kSignatureSeed = 0x5EED;

//! Classifies which integrals the model structurally preserves by testing the
//! torque conditions (M_f, r), (M_f, e3), (M_f, gamma) at `sample_count`
//! pseudo-random admissible states (|.| <= 1e-12 at every sample). If any two
//! conditions hold, all three integrals are dependent and all are reported.
std::set<Integral> conservation_signature(const FrictionModel& model, const BodyParams& p,
                                          int sample_count,
                                          std::uint64_t seed = kSignatureSeed);

}  // namespace tippetop
