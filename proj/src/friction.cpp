#include "tippetop/friction.hpp"

#include <cmath>
#include <stdexcept>

namespace tippetop {

bool needs_normal_force(const FrictionModel& model) {
  if (model.kind == FrictionKind::DrySliding) return true;
  for (const auto& part : model.parts)
    if (needs_normal_force(part)) return true;
  return false;
}

double dry_coefficient(const FrictionModel& model, const BodyParams& p) {
  if (model.kind == FrictionKind::DrySliding) return p.mu;
  double sum = 0.0;
  for (const auto& part : model.parts) sum += dry_coefficient(part, p);
  return sum;
}

FrictionOutput eval_friction(const FrictionModel& model, const FullState& s,
                             std::optional<double> N, const BodyParams& p) {
  FrictionOutput out;
  switch (model.kind) {
    case FrictionKind::Smooth:
      break;
    case FrictionKind::ViscousSliding: {
      out.force = -p.mu * contact_velocity(s, p);
      out.torque = contact_vector(s.gamma, p).cross(out.force);
      break;
    }
    case FrictionKind::DrySliding: {
      if (!N) throw std::invalid_argument("eval_friction: DrySliding requires the normal force N");
      if (*N < 0.0)
        throw std::invalid_argument("eval_friction: DrySliding requires N >= 0");
      const Vec3 vp = contact_velocity(s, p);
      const Vec3 vhat = vp / std::max(vp.norm(), p.eps_slip);
      out.force = -p.mu * (*N) * vhat;
      out.torque = contact_vector(s.gamma, p).cross(out.force);
      out.needs_normal_force = true;
      break;
    }
    case FrictionKind::ContactTorque: {
      const Vec3 r = contact_vector(s.gamma, p);
      out.force = -p.mu * s.omega.cross(r);
      out.torque = r.cross(out.force);
      break;
    }
    case FrictionKind::AnisotropicAxis: {
      const Vec3 e3 = Vec3::UnitZ();
      out.torque = -p.mu * e3.cross(s.omega.cross(e3));
      break;
    }
    case FrictionKind::RollingResistance: {
      const Vec3 omega_perp = s.omega - s.omega.dot(s.gamma) * s.gamma;
      out.torque = -p.mu_r * omega_perp;
      break;
    }
    case FrictionKind::SpinningResistance: {
      out.torque = -p.mu_s * s.omega.dot(s.gamma) * s.gamma;
      break;
    }
    case FrictionKind::Composite: {
      if (model.parts.empty())
        throw std::invalid_argument("eval_friction: Composite model has no parts");
      for (const auto& part : model.parts) {
        const FrictionOutput sub = eval_friction(part, s, N, p);
        out.force += sub.force;
        out.torque += sub.torque;
        out.needs_normal_force = out.needs_normal_force || sub.needs_normal_force;
      }
      break;
    }
  }
  return out;
}

std::set<Integral> conservation_signature(const FrictionModel& model, const BodyParams& p,
                                          int sample_count, std::uint64_t seed) {
  if (sample_count < 1)
    throw std::invalid_argument("conservation_signature: sample_count must be >= 1");

  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(seed);
  bool jellett = true, lagrange = true, area = true;
  for (int i = 0; i < sample_count; ++i) {
    const FullState s = random_admissible_state(rng, p);
    // The torque conditions are homogeneous in N, so a unit normal force
    // probes the structure of any dry part without solving the dynamics.
    const std::optional<double> N =
        needs_normal_force(model) ? std::optional<double>(1.0) : std::nullopt;
    const Vec3 M = eval_friction(model, s, N, p).torque;
    jellett = jellett && std::abs(M.dot(contact_vector(s.gamma, p))) <= kTol;
    lagrange = lagrange && std::abs(M.dot(Vec3::UnitZ())) <= kTol;
    area = area && std::abs(M.dot(s.gamma)) <= kTol;
  }

  std::set<Integral> sig;
  if (jellett) sig.insert(Integral::Jellett);
  if (lagrange) sig.insert(Integral::Lagrange);
  if (area) sig.insert(Integral::Area);
  // any two of the conditions imply the third integral is a combination
  if (sig.size() >= 2) sig = {Integral::Jellett, Integral::Lagrange, Integral::Area};
  return sig;
}

}  // namespace tippetop
