#include "tippetop/reduction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tippetop {

namespace {

void require_scaled(const BodyParams& p, const char* where) {
  if (!unit_scaled(p))
    throw std::invalid_argument(std::string(where) +
                                ": requires unit-scaled parameters (m = R = g = 1)");
}

void require_chart(double gamma3, const BodyParams& p, const char* where) {
  require_scaled(p, where);
  if (!(std::abs(gamma3) < 1.0 - kEpsPole)) throw ChartError(gamma3);
}

}  // namespace

ChartError::ChartError(double g3)
    : NumericalError("chart degenerate at gamma3 = " + std::to_string(g3) +
                     " (poles gamma3 = +/-1 excluded)"),
      gamma3(g3) {}

double chart_k(double gamma3, const BodyParams& p) {
  const double q = 1.0 - gamma3 * gamma3;
  return std::sqrt(q / (p.i1 + p.a * p.a * q));
}

ReducedState to_reduced(const Vec3& omega, const Vec3& gamma, const BodyParams& p) {
  require_chart(gamma[2], p, "to_reduced");
  ReducedState rs;
  rs.gamma3 = gamma[2];
  rs.K1 = p.i3 * omega[2];
  rs.K2 = (gamma[0] * omega[1] - gamma[1] * omega[0]) / chart_k(gamma[2], p);
  rs.C = p.i1 * (omega[0] * gamma[0] + omega[1] * gamma[1]) + p.i3 * omega[2] * gamma[2];
  rs.phi = std::atan2(gamma[1], gamma[0]);
  return rs;
}

std::pair<Vec3, Vec3> from_reduced(const ReducedState& rs, const BodyParams& p) {
  require_chart(rs.gamma3, p, "from_reduced");
  const double q = 1.0 - rs.gamma3 * rs.gamma3;
  const double rho = std::sqrt(q);
  const Vec3 gamma(rho * std::cos(rs.phi), rho * std::sin(rs.phi), rs.gamma3);
  const double k = chart_k(rs.gamma3, p);
  // omega1, omega2 solve (I omega, gamma) = C and (gamma1 w2 - gamma2 w1) = k K2
  const double lead = (rs.C - rs.gamma3 * rs.K1) / (p.i1 * q);
  Vec3 omega;
  omega[0] = lead * gamma[0] - k * rs.K2 * gamma[1] / q;
  omega[1] = lead * gamma[1] + k * rs.K2 * gamma[0] / q;
  omega[2] = rs.K1 / p.i3;
  return {omega, gamma};
}

std::array<double, 3> rhs_reduced(const ReducedState& rs, const BodyParams& p) {
  require_chart(rs.gamma3, p, "rhs_reduced");
  const double g3 = rs.gamma3;
  const double q = 1.0 - g3 * g3;
  const double k = chart_k(g3, p);
  const double ktilde = (p.i1 - (p.i1 - p.i3) * g3 * g3) / p.i3;
  std::array<double, 3> d;
  d[0] = k * rs.K2;
  d[1] = -(p.mu_r / p.i1) * (rs.K1 * ktilde - g3 * rs.C);
  d[2] = -k * (rs.C - g3 * rs.K1) * (rs.C * g3 - rs.K1) / (p.i1 * q * q) - k * p.a -
         p.mu_r * rs.K2 * k * k / q;
  return d;
}

double rhs_phi(const ReducedState& rs, const BodyParams& p) {
  require_chart(rs.gamma3, p, "rhs_phi");
  const double q = 1.0 - rs.gamma3 * rs.gamma3;
  return rs.K1 / p.i3 - rs.gamma3 * (rs.C - rs.K1 * rs.gamma3) / (p.i1 * q);
}

std::array<double, 4> rhs_reduced_spinning(const ReducedState& rs, const BodyParams& p) {
  const std::array<double, 3> base = rhs_reduced(rs, p);
  const double coupling = rs.K1 * rs.gamma3 * (p.i1 - p.i3) + rs.C * p.i3;
  std::array<double, 4> d;
  d[0] = base[0];
  d[1] = base[1] - (p.mu_s * rs.gamma3 / (p.i1 * p.i3)) * coupling;
  d[2] = base[2];
  d[3] = -(p.mu_s / (p.i1 * p.i3)) * coupling;
  return d;
}

}  // namespace tippetop
