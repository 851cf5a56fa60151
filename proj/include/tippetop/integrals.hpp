#pragma once

#include "tippetop/friction.hpp"
#include "tippetop/types.hpp"

namespace tippetop {

//! The energy, the three linear-in-omega first integrals, and the dissipation
//! rate. With the smooth model all four are constant along trajectories; the
//! identity G = a*F + R*C holds pointwise for every state.
struct IntegralValues {
  double E;     //!< 1/2 (omega, I omega) + 1/2 m (v,v) + m g a gamma3
  double F;     //!< i3 * omega3 (axial angular momentum)
  double G;     //!< -(J omega, r)
  double C;     //!< (J omega, gamma) = (I omega, gamma)
  double dEdt;  //!< (F_force, v) + (M_f, omega)
};

//! Evaluates all five quantities; the model is needed only for dEdt (dry
//! models get their normal force resolved internally).
IntegralValues evaluate_integrals(const FullState& s, const FrictionModel& model,
                                  const BodyParams& p);

//! Closed-form energy of a family member with zero horizontal center-of-mass
//! velocity. parameter is C for the vertical families (E = C^2/(2 i3) +/- a)
//! and c1 for Sigma0. Requires unit-scaled parameters; Sigma0 rejects
//! |c1| <= c0 (outside the family's existence range).
double family_energy(FamilyKind family, double parameter, const BodyParams& p);

}  // namespace tippetop
