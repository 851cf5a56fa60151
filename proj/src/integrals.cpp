#include "tippetop/integrals.hpp"

#include "tippetop/dynamics.hpp"
#include "tippetop/equilibria.hpp"

#include <cmath>
#include <stdexcept>

namespace tippetop {

IntegralValues evaluate_integrals(const FullState& s, const FrictionModel& model,
                                  const BodyParams& p) {
  const Vec3 Iomega(p.i1 * s.omega[0], p.i1 * s.omega[1], p.i3 * s.omega[2]);
  const Vec3 u = s.gamma.cross(axis_offset(p));
  const Vec3 Jomega = Iomega + p.m * u * u.dot(s.omega);
  const Vec3 r = contact_vector(s.gamma, p);

  IntegralValues iv;
  iv.E = 0.5 * s.omega.dot(Iomega) + 0.5 * p.m * s.v.squaredNorm() + p.m * p.g * p.a * s.gamma[2];
  iv.F = p.i3 * s.omega[2];
  iv.G = -Jomega.dot(r);
  iv.C = Iomega.dot(s.gamma);
  const ResolvedFriction rf = resolve_friction(model, s, p);
  iv.dEdt = rf.out.force.dot(s.v) + rf.out.torque.dot(s.omega);
  return iv;
}

double family_energy(FamilyKind family, double parameter, const BodyParams& p) {
  if (!unit_scaled(p))
    throw std::invalid_argument(
        "family_energy: requires unit-scaled parameters (m = R = g = 1); "
        "apply nondimensionalize first");
  switch (family) {
    case FamilyKind::SigmaU: {
      const double C = parameter;
      return C * C / (2.0 * p.i3) + p.a;
    }
    case FamilyKind::SigmaL: {
      const double C = parameter;
      return C * C / (2.0 * p.i3) - p.a;
    }
    case FamilyKind::Sigma0: {
      const double c1 = parameter;
      const Sigma0Coords sc = sigma0_coords(c1, p);  // rejects |c1| <= c0
      return 0.5 * p.i1 * c1 * c1 * (1.0 - sc.gamma3 * sc.gamma3) +
             sc.K1 * sc.K1 / (2.0 * p.i3) + p.a * sc.gamma3;
    }
  }
  throw std::invalid_argument("family_energy: unknown family");
}

}  // namespace tippetop
