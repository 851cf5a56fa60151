#pragma once

#include "tippetop/types.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace tippetop {

//! One member of a permanent-rotation family, carried in both reduced chart
//! coordinates and full (omega, gamma) form (zero center-of-mass velocity).
struct EquilibriumFamily {
  FamilyKind kind;
  double parameter;  //!< C for the vertical families, c1 for Sigma0
  double gamma3, K1, K2;
  Vec3 omega, gamma;
  double C;
  double energy;
};

//! Critical area-integral level C* = i3 sqrt(a)/sqrt(|i1 - i3|) separating
//! the vertical-rotation stability regimes. Empty when i1 == i3 (the tilted
//! family does not exist and no threshold arises). Requires a > 0.
std::optional<double> critical_C(const BodyParams& p);

//! Smallest spin magnitude of the tilted family: c0 = sqrt(a/|i1 - i3|).
double sigma0_min_spin(const BodyParams& p);

//! Reduced coordinates of the tilted rotation with spin c1:
//! gamma3 = -a/(c1^2 (i1-i3)), K1 = a i3/(c1 (i1-i3)),
//! C = -c1 i1 + a^2/(c1^3 (i1-i3)). Rejects |c1| <= c0.
struct Sigma0Coords {
  double gamma3, K1, C;
};
Sigma0Coords sigma0_coords(double c1, const BodyParams& p);

//! Vertical rotation (SigmaU or SigmaL) at area-integral level C.
EquilibriumFamily vertical_family(FamilyKind which, double C, const BodyParams& p);

//! Tilted rotation with spin parameter c1; the full state is omega = -c1 gamma.
EquilibriumFamily sigma0_family(double c1, const BodyParams& p);

//! Inverts C(c1) on the monotone regime i1 > i3: returns the c1 (sign chosen
//! by the branch) whose tilted rotation sits on the level |C| > C*.
double c1_from_area_integral(double C, const BodyParams& p);

enum class Verdict { Stable, Unstable, Marginal };
const char* to_string(Verdict v);

//! Reported margin band: eigenvalues with |Re| below this are treated as
//! neutral, and verdicts inside the band become Marginal.
inline constexpr double kMarginBand = 1e-7;

//! Stability classification evidence for one family member. `coefficients`
//! hold the transverse characteristic polynomial (leading coefficient first);
//! `conditions` the Hurwitz minors D1..D4 (vertical) or the Routh-Hurwitz
//! chain a0, a1, a1 a2 - a0 a3, a3 (tilted) — all positive <=> asymptotically
//! stable; `eigenvalues` the numerically computed transverse spectrum used as
//! a cross-check; `condition` the closed-form criterion the verdict
//! instantiates.
struct StabilityReport {
  FamilyKind kind;
  double parameter;
  std::vector<double> coefficients;
  std::vector<double> conditions;
  std::vector<std::complex<double>> eigenvalues;
  Verdict verdict;
  std::string condition;
};

//! Classifies a vertical rotation from the closed-form degree-4 transverse
//! characteristic polynomial and its Hurwitz minors. mu_r = 0 is Marginal
//! (no damping; the criterion cannot decide).
StabilityReport hurwitz_vertical(FamilyKind which, double C, const BodyParams& p);

//! Classifies a tilted rotation from the closed-form cubic characteristic
//! polynomial of the reduced 3x3 linearization.
StabilityReport sigma0_characteristic(double c1, const BodyParams& p);

//! Central finite-difference linearization (step 1e-6) of the torque-only
//! (omega, gamma) system at a vertical rotation. The spectrum carries exactly
//! two structural zeros (the unit-gamma and area integrals); the remaining
//! monic quartic is recovered from the characteristic polynomial.
struct Linearization {
  Eigen::Matrix<double, 6, 6> jacobian;
  std::vector<std::complex<double>> eigenvalues;
  std::array<double, 5> transverse_characteristic;
  int zero_count;
};
Linearization linearize_full(const EquilibriumFamily& at, const BodyParams& p);

}  // namespace tippetop
