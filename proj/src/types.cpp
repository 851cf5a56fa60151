#include "tippetop/types.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tippetop {

void BodyParams::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
      throw std::invalid_argument(std::string("BodyParams.") + name + " must be positive");
  };
  auto nonnegative = [](double x, const char* name) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument(std::string("BodyParams.") + name + " must be non-negative");
  };
  positive(m, "m");
  positive(R, "R");
  positive(g, "g");
  positive(i1, "i1");
  positive(i3, "i3");
  nonnegative(a, "a");
  nonnegative(mu, "mu");
  nonnegative(mu_r, "mu_r");
  nonnegative(mu_s, "mu_s");
  positive(eps_slip, "eps_slip");
  positive(tol_geom, "tol_geom");
}

BodyParams nondimensionalize(const BodyParams& p) {
  if (p.dimensionless)
    throw std::invalid_argument("nondimensionalize: parameters are already dimensionless");
  p.validate();
  BodyParams q = p;
  const double mR2 = p.m * p.R * p.R;
  q.a = p.a / p.R;
  q.i1 = p.i1 / mR2;
  q.i3 = p.i3 / mR2;
  // time unit sqrt(R/g): torque*time coefficients divide by m*sqrt(g R^3),
  // the viscous force*time/length coefficient by m*sqrt(g/R).
  q.mu_r = p.mu_r / (p.m * std::sqrt(p.g * p.R * p.R * p.R));
  q.mu_s = p.mu_s / (p.m * std::sqrt(p.g * p.R * p.R * p.R));
  q.mu = p.mu * std::sqrt(p.R / p.g) / p.m;
  q.m = 1.0;
  q.R = 1.0;
  q.g = 1.0;
  q.dimensionless = true;
  return q;
}

Vec3 axis_offset(const BodyParams& p) { return Vec3(0.0, 0.0, p.a); }

Vec3 contact_vector(const Vec3& gamma, const BodyParams& p) {
  return -p.R * gamma - axis_offset(p);
}

Vec3 contact_velocity(const FullState& s, const BodyParams& p) {
  return s.v + s.omega.cross(contact_vector(s.gamma, p));
}

ConstraintResiduals constraint_residuals(const FullState& s, const BodyParams& p) {
  return {contact_velocity(s, p).dot(s.gamma), s.gamma.squaredNorm() - 1.0};
}

namespace {
// Unit-interval draw with 53 random bits; keeps the stream layout fixed so
// sampled states are reproducible across platforms.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace

FullState random_admissible_state(std::mt19937_64& rng, const BodyParams& p) {
  FullState s;
  const double z = 1.0 - 2.0 * unit_draw(rng);
  const double phi = 2.0 * std::numbers::pi * unit_draw(rng);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  s.gamma = Vec3(rho * std::cos(phi), rho * std::sin(phi), z);
  for (int i = 0; i < 3; ++i) s.omega[i] = -2.0 + 4.0 * unit_draw(rng);
  for (int i = 0; i < 3; ++i) s.v[i] = -2.0 + 4.0 * unit_draw(rng);
  // project v so that (v + omega x r, gamma) = 0
  const double res = contact_velocity(s, p).dot(s.gamma);
  s.v -= res * s.gamma;
  return s;
}

}  // namespace tippetop
