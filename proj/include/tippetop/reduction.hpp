#pragma once

#include "tippetop/types.hpp"

#include <array>
#include <utility>

namespace tippetop {

//! Raised when a reduced-chart operation is evaluated too close to the poles
//! gamma3 = +/-1, where the chart degenerates (k -> 0, phi undefined).
struct ChartError : NumericalError {
  explicit ChartError(double gamma3);
  double gamma3;
};

//! Chart half-width exclusion around the poles: |gamma3| must stay below
//! 1 - kEpsPole for chart formulas to be used.
inline constexpr double kEpsPole = 1e-8;

//! Coordinates on the symmetry-reduced phase space. K1 = i3*omega3 is the
//! axial angular momentum, K2 = (gamma1*omega2 - gamma2*omega1)/k the scaled
//! nutation rate, C = (I omega, gamma) the area-integral level (a constant of
//! the rolling-only flow, dynamic once spinning resistance acts), and phi the
//! azimuth of gamma, carried only for reconstruction.
struct ReducedState {
  double gamma3 = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double C = 0.0;
  double phi = 0.0;
};

//! Chart scale factor k = sqrt((1 - gamma3^2)/(i1 + a^2 (1 - gamma3^2))).
double chart_k(double gamma3, const BodyParams& p);

//! Projects (omega, gamma) to the chart. Throws ChartError near the poles.
ReducedState to_reduced(const Vec3& omega, const Vec3& gamma, const BodyParams& p);

//! Reconstructs (omega, gamma) from chart coordinates.
std::pair<Vec3, Vec3> from_reduced(const ReducedState& rs, const BodyParams& p);

//! Reduced vector field at fixed C (rolling resistance):
//!   gamma3' = k K2
//!   K1'     = -(mu_r/i1) (K1 ktilde - gamma3 C),  ktilde = (i1-(i1-i3)gamma3^2)/i3
//!   K2'     = -k (C-gamma3 K1)(C gamma3-K1)/(i1 (1-gamma3^2)^2) - k a
//!             - mu_r K2 k^2/(1-gamma3^2)
std::array<double, 3> rhs_reduced(const ReducedState& rs, const BodyParams& p);

//! Azimuth rate phi' = K1/i3 - gamma3 (C - K1 gamma3)/(i1 (1 - gamma3^2)).
double rhs_phi(const ReducedState& rs, const BodyParams& p);

//! Extension with spinning resistance: C becomes dynamic,
//!   K1' gains -(mu_s gamma3/(i1 i3)) (K1 gamma3 (i1-i3) + C i3)
//!   C'  =     -(mu_s /(i1 i3)) (K1 gamma3 (i1-i3) + C i3),
//! returned as d/dt (gamma3, K1, K2, C).
std::array<double, 4> rhs_reduced_spinning(const ReducedState& rs, const BodyParams& p);

}  // namespace tippetop
