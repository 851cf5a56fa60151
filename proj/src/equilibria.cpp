#include "tippetop/equilibria.hpp"

#include "tippetop/dynamics.hpp"
#include "tippetop/integrals.hpp"
#include "tippetop/reduction.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
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

Verdict verdict_from_conditions(const std::vector<double>& conditions) {
  double scale = 1.0;
  for (double c : conditions) scale = std::max(scale, std::abs(c));
  const double band = 1e-12 * scale;
  double worst = conditions.front();
  for (double c : conditions) worst = std::min(worst, c);
  if (worst > band) return Verdict::Stable;
  if (worst < -band) return Verdict::Unstable;
  return Verdict::Marginal;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Marginal: return "Marginal";
  }
  return "?";
}

std::optional<double> critical_C(const BodyParams& p) {
  require_scaled(p, "critical_C");
  if (!(p.a > 0.0)) throw std::invalid_argument("critical_C: requires a > 0");
  if (p.i1 == p.i3) return std::nullopt;
  return p.i3 * std::sqrt(p.a) / std::sqrt(std::abs(p.i1 - p.i3));
}

double sigma0_min_spin(const BodyParams& p) {
  require_scaled(p, "sigma0_min_spin");
  if (!(p.a > 0.0)) throw std::domain_error("sigma0_min_spin: requires a > 0");
  if (p.i1 == p.i3)
    throw std::domain_error("sigma0_min_spin: no tilted family exists for i1 == i3");
  return std::sqrt(p.a / std::abs(p.i1 - p.i3));
}

Sigma0Coords sigma0_coords(double c1, const BodyParams& p) {
  const double c0 = sigma0_min_spin(p);
  if (!(std::abs(c1) > c0))
    throw std::domain_error("sigma0_coords: tilted rotations require |c1| > c0 = " +
                            std::to_string(c0));
  const double d = p.i1 - p.i3;
  Sigma0Coords sc;
  sc.gamma3 = -p.a / (c1 * c1 * d);
  sc.K1 = p.a * p.i3 / (c1 * d);
  sc.C = -c1 * p.i1 + p.a * p.a / (c1 * c1 * c1 * d);
  return sc;
}

EquilibriumFamily vertical_family(FamilyKind which, double C, const BodyParams& p) {
  require_scaled(p, "vertical_family");
  if (which == FamilyKind::Sigma0)
    throw std::invalid_argument("vertical_family: use sigma0_family for the tilted family");
  const double s = (which == FamilyKind::SigmaU) ? 1.0 : -1.0;
  EquilibriumFamily eq;
  eq.kind = which;
  eq.parameter = C;
  eq.gamma3 = s;
  eq.K1 = s * C;
  eq.K2 = 0.0;
  eq.gamma = Vec3(0.0, 0.0, s);
  eq.omega = Vec3(0.0, 0.0, s * C / p.i3);  // keeps (I omega, gamma) = C on both families
  eq.C = C;
  eq.energy = family_energy(which, C, p);
  return eq;
}

EquilibriumFamily sigma0_family(double c1, const BodyParams& p) {
  require_scaled(p, "sigma0_family");
  const Sigma0Coords sc = sigma0_coords(c1, p);
  EquilibriumFamily eq;
  eq.kind = FamilyKind::Sigma0;
  eq.parameter = c1;
  eq.gamma3 = sc.gamma3;
  eq.K1 = sc.K1;
  eq.K2 = 0.0;
  const double rho = std::sqrt(std::max(0.0, 1.0 - sc.gamma3 * sc.gamma3));
  eq.gamma = Vec3(rho, 0.0, sc.gamma3);
  eq.omega = -c1 * eq.gamma;
  eq.C = sc.C;
  eq.energy = family_energy(FamilyKind::Sigma0, c1, p);
  return eq;
}

double c1_from_area_integral(double C, const BodyParams& p) {
  require_scaled(p, "c1_from_area_integral");
  if (!(p.i1 > p.i3))
    throw std::domain_error("c1_from_area_integral: inversion is defined for i1 > i3, "
                            "where C(c1) is monotone on each branch");
  const double cstar = *critical_C(p);
  if (!(std::abs(C) > cstar))
    throw std::domain_error("c1_from_area_integral: requires |C| > C*");
  // On i1 > i3 the positive branch c1 in (c0, inf) maps decreasingly onto
  // (-inf, -C*); the negative branch is its mirror C(-c1) = -C(c1).
  const double sign = (C < 0.0) ? 1.0 : -1.0;
  const double target = sign * C;  // always < -C*
  const double c0 = sigma0_min_spin(p);
  auto curve = [&](double c1) { return sigma0_coords(c1, p).C; };
  double lo = c0 * (1.0 + 1e-12);
  double hi = std::max(2.0 * c0, 2.0 * std::abs(target) / p.i1);
  while (curve(hi) > target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (curve(mid) > target ? lo : hi) = mid;
  }
  return sign * 0.5 * (lo + hi);
}

StabilityReport hurwitz_vertical(FamilyKind which, double C, const BodyParams& p) {
  require_scaled(p, "hurwitz_vertical");
  if (which == FamilyKind::Sigma0)
    throw std::invalid_argument("hurwitz_vertical: classifies vertical rotations only");
  const double s = (which == FamilyKind::SigmaU) ? 1.0 : -1.0;
  const double d = p.i1 - p.i3;
  // transverse quartic a0 l^4 + a1 l^3 + a2 l^2 + a3 l + a4 with the shared
  // factor D changing sign exactly at |C| = C*
  const double D = -p.a * s - C * C * d / (p.i3 * p.i3);
  const double a0 = p.i1 * p.i1;
  const double a1 = 2.0 * p.mu_r * p.i1;
  const double two_i1_minus_i3 = 2.0 * p.i1 - p.i3;
  const double a2 = 2.0 * p.i1 * D + p.mu_r * p.mu_r +
                    C * C * two_i1_minus_i3 * two_i1_minus_i3 / (p.i3 * p.i3);
  const double a3 = 2.0 * p.mu_r * D;
  const double a4 = D * D;

  StabilityReport rep;
  rep.kind = which;
  rep.parameter = C;
  rep.coefficients = {a0, a1, a2, a3, a4};
  const double d1 = a1;
  const double d2 = a1 * a2 - a0 * a3;
  const double d3 = a3 * d2 - a1 * a1 * a4;
  const double d4 = a4 * d3;
  rep.conditions = {d1, d2, d3, d4};

  const Linearization lin = linearize_full(vertical_family(which, C, p), p);
  for (const auto& ev : lin.eigenvalues)
    if (std::abs(ev) >= kMarginBand) rep.eigenvalues.push_back(ev);

  if (p.mu_r == 0.0) {
    rep.verdict = Verdict::Marginal;
    rep.condition = "mu_r = 0: undamped, the criterion cannot decide";
    return rep;
  }
  rep.verdict = verdict_from_conditions(rep.conditions);
  if (rep.verdict == Verdict::Marginal) {
    rep.condition = "|C| = C*: stability boundary";
  } else if (which == FamilyKind::SigmaL) {
    if (p.i1 <= p.i3)
      rep.condition = "i1 <= i3: lower rotation stable for every C";
    else
      rep.condition = (rep.verdict == Verdict::Stable) ? "i1 > i3 and |C| < C*"
                                                       : "i1 > i3 and |C| > C*";
  } else {
    if (p.i1 >= p.i3)
      rep.condition = "i1 >= i3: upper rotation unstable for every C";
    else
      rep.condition = (rep.verdict == Verdict::Stable) ? "i3 > i1 and |C| > C*"
                                                       : "i3 > i1 but |C| < C*";
  }
  return rep;
}

StabilityReport sigma0_characteristic(double c1, const BodyParams& p) {
  require_scaled(p, "sigma0_characteristic");
  const Sigma0Coords sc = sigma0_coords(c1, p);
  const double c2 = sc.gamma3;
  const double d = p.i1 - p.i3;
  const double q = 1.0 - c2 * c2;

  const double a0 = -p.i1 * p.i3 * c2 * d * (p.i1 + p.a * p.a * q);
  const double a1 = -p.mu_r * c2 * d *
                    (p.i1 * p.i3 * (1.0 + c2 * c2) +
                     (p.i1 * p.i1 + p.i1 * p.a * p.a - p.a * p.a * c2 * c2 * d) * q);
  const double a2 = -p.mu_r * p.mu_r * c2 * d * (p.i1 - c2 * c2 * d) +
                    p.a * p.i3 * (p.i1 * p.i1 + c2 * c2 * d * (3.0 * p.i1 - p.i3));
  const double a3 = p.a * p.mu_r * d * q * (p.i1 + 3.0 * c2 * c2 * d);

  StabilityReport rep;
  rep.kind = FamilyKind::Sigma0;
  rep.parameter = c1;
  rep.coefficients = {a0, a1, a2, a3};
  rep.conditions = {a0, a1, a1 * a2 - a0 * a3, a3};

  // transverse spectrum from the finite-difference 3x3 Jacobian of the
  // reduced vector field at the fixed point (fixed C)
  const ReducedState rs0{sc.gamma3, sc.K1, 0.0, sc.C, 0.0};
  Eigen::Matrix3d jac;
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    ReducedState plus = rs0, minus = rs0;
    double* fields_p[3] = {&plus.gamma3, &plus.K1, &plus.K2};
    double* fields_m[3] = {&minus.gamma3, &minus.K1, &minus.K2};
    *fields_p[j] += h;
    *fields_m[j] -= h;
    const auto fp = rhs_reduced(plus, p);
    const auto fm = rhs_reduced(minus, p);
    for (int i = 0; i < 3; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
  }
  const Eigen::EigenSolver<Eigen::Matrix3d> es(jac);
  for (int i = 0; i < 3; ++i) rep.eigenvalues.push_back(es.eigenvalues()[i]);
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });

  if (p.mu_r == 0.0) {
    rep.verdict = Verdict::Marginal;
    rep.condition = "mu_r = 0: undamped, the criterion cannot decide";
    return rep;
  }
  rep.verdict = verdict_from_conditions(rep.conditions);
  if (rep.verdict == Verdict::Marginal)
    rep.condition = "existence boundary |c1| = c0";
  else
    rep.condition = (p.i1 > p.i3) ? "i1 > i3: tilted rotations stable wherever they exist"
                                  : "i1 < i3: tilted rotations unstable wherever they exist";
  return rep;
}

Linearization linearize_full(const EquilibriumFamily& at, const BodyParams& p) {
  require_scaled(p, "linearize_full");
  Eigen::Matrix<double, 6, 1> y0;
  y0 << at.omega, at.gamma;

  auto f = [&](const Eigen::Matrix<double, 6, 1>& y) {
    const auto [od, gd] = rhs_decoupled(y.head<3>(), y.tail<3>(), p);
    Eigen::Matrix<double, 6, 1> out;
    out << od, gd;
    return out;
  };

  Linearization lin;
  const double h = 1e-6;
  for (int j = 0; j < 6; ++j) {
    Eigen::Matrix<double, 6, 1> yp = y0, ym = y0;
    yp[j] += h;
    ym[j] -= h;
    lin.jacobian.col(j) = (f(yp) - f(ym)) / (2.0 * h);
  }

  const Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(lin.jacobian);
  lin.eigenvalues.resize(6);
  for (int i = 0; i < 6; ++i) lin.eigenvalues[i] = es.eigenvalues()[i];
  std::sort(lin.eigenvalues.begin(), lin.eigenvalues.end(),
            [](const auto& x, const auto& y) {
              if (x.real() != y.real()) return x.real() > y.real();
              return x.imag() > y.imag();
            });
  lin.zero_count = 0;
  for (const auto& ev : lin.eigenvalues)
    if (std::abs(ev) < kMarginBand) ++lin.zero_count;

  // Faddeev-LeVerrier characteristic polynomial l^6 + c1 l^5 + ... + c6;
  // at a vertical rotation c5 = c6 = 0 structurally, leaving the transverse
  // quartic l^4 + c1 l^3 + c2 l^2 + c3 l + c4.
  std::array<double, 7> c{1.0, 0, 0, 0, 0, 0, 0};
  Eigen::Matrix<double, 6, 6> Mk = Eigen::Matrix<double, 6, 6>::Identity();
  for (int k = 1; k <= 6; ++k) {
    const Eigen::Matrix<double, 6, 6> AM = lin.jacobian * Mk;
    c[k] = -AM.trace() / k;
    Mk = AM + c[k] * Eigen::Matrix<double, 6, 6>::Identity();
  }
  lin.transverse_characteristic = {1.0, c[1], c[2], c[3], c[4]};
  return lin;
}

}  // namespace tippetop
