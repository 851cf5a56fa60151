#include "doctest.h"

#include "tippetop/dynamics.hpp"
#include "tippetop/equilibria.hpp"
#include "tippetop/integrals.hpp"

#include <algorithm>
#include <cmath>

using namespace tippetop;

namespace {

BodyParams figure_set(double i1) {
  BodyParams p;
  p.a = 0.29;
  p.i1 = i1;
  p.i3 = 0.51;
  p.mu_r = 1.0;
  p.dimensionless = true;
  return p;
}

BodyParams prolate_unit() {
  BodyParams p;
  p.a = 1.0;
  p.i1 = 0.6;
  p.i3 = 0.5;
  p.mu_r = 1.0;
  p.dimensionless = true;
  return p;
}

double max_re(const std::vector<std::complex<double>>& evs) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& ev : evs) m = std::max(m, ev.real());
  return m;
}

}  // namespace

TEST_CASE("critical spin threshold") {
  CHECK(*critical_C(figure_set(0.55)) == doctest::Approx(1.3732170258192979).epsilon(1e-15));

  BodyParams p;
  p.a = 1.0;
  p.i1 = 0.6;
  p.i3 = 0.5;
  p.dimensionless = true;
  CHECK(*critical_C(p) == doctest::Approx(1.58113883008419).epsilon(1e-13));
  CHECK(critical_C(p).value() * critical_C(p).value() == doctest::Approx(2.5).epsilon(1e-13));

  CHECK_FALSE(critical_C(figure_set(0.51)).has_value());  // i1 == i3: no tilted family

  BodyParams flat = figure_set(0.55);
  flat.a = 0.0;
  CHECK_THROWS_AS(critical_C(flat), std::invalid_argument);
}

TEST_CASE("minimum tilted spin and the excluded disc") {
  const BodyParams p = figure_set(0.55);
  CHECK(sigma0_min_spin(p) == doctest::Approx(2.6925824035672505).epsilon(1e-15));
  CHECK_THROWS_AS(sigma0_coords(2.0, p), std::domain_error);
  CHECK_THROWS_AS(sigma0_coords(-2.6925824035672505, p), std::domain_error);
  CHECK_THROWS_AS(sigma0_min_spin(figure_set(0.51)), std::domain_error);
}

TEST_CASE("tilted family coordinates at c1 = 3") {
  const Sigma0Coords sc = sigma0_coords(3.0, figure_set(0.55));
  CHECK(sc.gamma3 == doctest::Approx(-0.8055555555555556).epsilon(1e-15));
  CHECK(sc.K1 == doctest::Approx(1.2325).epsilon(1e-15));
  CHECK(sc.C == doctest::Approx(-1.5721296296296296).epsilon(1e-15));
}

TEST_CASE("tilted family approaches the lower pole at the existence edge") {
  const BodyParams p = figure_set(0.55);
  const double c0 = sigma0_min_spin(p);
  const Sigma0Coords sc = sigma0_coords(c0 * (1.0 + 1e-10), p);
  CHECK(sc.gamma3 == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(sc.C) == doctest::Approx(1.3732170258192979).epsilon(1e-9));
}

TEST_CASE("vertical families carry the advertised reduced coordinates") {
  const BodyParams p = figure_set(0.55);
  const double C = 1.7;
  const EquilibriumFamily up = vertical_family(FamilyKind::SigmaU, C, p);
  CHECK(up.gamma3 == 1.0);
  CHECK(up.K1 == doctest::Approx(C));
  CHECK(up.K2 == 0.0);
  CHECK(up.gamma.isApprox(Vec3(0, 0, 1)));
  CHECK(up.omega.isApprox(Vec3(0, 0, C / 0.51), 1e-14));
  CHECK(up.C == doctest::Approx(C));
  CHECK(up.energy == doctest::Approx(family_energy(FamilyKind::SigmaU, C, p)));

  const EquilibriumFamily low = vertical_family(FamilyKind::SigmaL, C, p);
  CHECK(low.gamma3 == -1.0);
  CHECK(low.K1 == doctest::Approx(-C));
  CHECK(low.gamma.isApprox(Vec3(0, 0, -1)));
  CHECK(low.omega.isApprox(Vec3(0, 0, -C / 0.51), 1e-14));
  // (I omega, gamma) recovers the requested level
  CHECK(0.51 * low.omega[2] * low.gamma[2] == doctest::Approx(C).epsilon(1e-14));

  CHECK_THROWS_AS(vertical_family(FamilyKind::Sigma0, C, p), std::invalid_argument);
}

TEST_CASE("tilted family members are genuine fixed points") {
  const BodyParams p = figure_set(0.55);
  for (double c1 : {2.7, 3.0, 4.5, -3.2, -8.0}) {
    const EquilibriumFamily fam = sigma0_family(c1, p);
    CHECK(fam.gamma.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fam.omega.isApprox(-c1 * fam.gamma, 1e-13));
    CHECK(std::abs(fam.gamma3) <= 1.0);
    const auto [dw, dg] = rhs_decoupled(fam.omega, fam.gamma, p);
    CHECK(dw.norm() < 1e-12);
    CHECK(dg.norm() < 1e-12);
    CHECK(fam.C == doctest::Approx(sigma0_coords(c1, p).C).epsilon(1e-14));
    CHECK(fam.energy == doctest::Approx(family_energy(FamilyKind::Sigma0, c1, p)).epsilon(1e-14));
  }
}

TEST_CASE("area-integral level inverts back to the spin parameter") {
  const BodyParams p = figure_set(0.55);
  for (double C : {-2.0, -1.6, 1.5, 2.4, 6.0}) {
    if (std::abs(C) <= *critical_C(p)) {
      CHECK_THROWS_AS(c1_from_area_integral(C, p), std::domain_error);
      continue;
    }
    const double c1 = c1_from_area_integral(C, p);
    CHECK(std::abs(c1) > sigma0_min_spin(p));
    CHECK(sigma0_coords(c1, p).C == doctest::Approx(C).epsilon(1e-9));
    // the branch keeps sign(c1) = -sign(C)
    CHECK(c1 * C < 0.0);
  }
  CHECK_THROWS_AS(c1_from_area_integral(2.0, figure_set(0.46)), std::domain_error);
}

TEST_CASE("frozen inversion: C = -2 lands at c1 = 3.711154") {
  const double c1 = c1_from_area_integral(-2.0, figure_set(0.55));
  CHECK(c1 == doctest::Approx(3.711154120312167).epsilon(1e-9));
}

TEST_CASE("oblate case: lower rotation stable below the threshold only") {
  const BodyParams p = figure_set(0.55);  // i1 > i3
  CHECK(hurwitz_vertical(FamilyKind::SigmaL, 0.0, p).verdict == Verdict::Stable);
  CHECK(hurwitz_vertical(FamilyKind::SigmaL, 1.0, p).verdict == Verdict::Stable);
  CHECK(hurwitz_vertical(FamilyKind::SigmaL, -1.3, p).verdict == Verdict::Stable);
  CHECK(hurwitz_vertical(FamilyKind::SigmaL, 2.0, p).verdict == Verdict::Unstable);
  CHECK(hurwitz_vertical(FamilyKind::SigmaL, 3.0, p).verdict == Verdict::Unstable);
  // the upper rotation never stabilizes for i1 > i3
  for (double C : {0.0, 1.0, 2.0, 3.0})
    CHECK(hurwitz_vertical(FamilyKind::SigmaU, C, p).verdict == Verdict::Unstable);

  // the third minor changes sign past C*
  const StabilityReport rep = hurwitz_vertical(FamilyKind::SigmaL, 2.0, p);
  CHECK(rep.conditions.size() == 4);
  CHECK(rep.conditions[2] < 0.0);
  CHECK(rep.coefficients.size() == 5);
  CHECK(rep.coefficients[0] == doctest::Approx(0.55 * 0.55));
}

TEST_CASE("prolate case: upper rotation stabilizes above the threshold") {
  const BodyParams p = figure_set(0.46);  // i1 < i3, C* = 1.2282...
  CHECK(hurwitz_vertical(FamilyKind::SigmaU, 1.0, p).verdict == Verdict::Unstable);
  CHECK(hurwitz_vertical(FamilyKind::SigmaU, 2.0, p).verdict == Verdict::Stable);
  CHECK(hurwitz_vertical(FamilyKind::SigmaU, -2.0, p).verdict == Verdict::Stable);
  for (double C : {0.0, 1.0, 2.0, 5.0})
    CHECK(hurwitz_vertical(FamilyKind::SigmaL, C, p).verdict == Verdict::Stable);
}

TEST_CASE("spherical case: no threshold, verdicts independent of C") {
  const BodyParams p = figure_set(0.51);  // i1 == i3
  for (double C : {0.0, 1.0, 2.0, 4.0}) {
    CHECK(hurwitz_vertical(FamilyKind::SigmaL, C, p).verdict == Verdict::Stable);
    CHECK(hurwitz_vertical(FamilyKind::SigmaU, C, p).verdict == Verdict::Unstable);
  }
}

TEST_CASE("stability boundary and undamped cases are marginal") {
  const BodyParams p = figure_set(0.55);
  CHECK(hurwitz_vertical(FamilyKind::SigmaL, 1.3732170258192979, p).verdict == Verdict::Marginal);
  BodyParams undamped = p;
  undamped.mu_r = 0.0;
  CHECK(hurwitz_vertical(FamilyKind::SigmaL, 0.5, undamped).verdict == Verdict::Marginal);
}

TEST_CASE("minor signs agree with the numerical spectrum") {
  for (double i1 : {0.55, 0.46, 0.51}) {
    const BodyParams p = figure_set(i1);
    for (double C : {0.0, 0.7, 1.1, 1.9, 2.8}) {
      for (FamilyKind which : {FamilyKind::SigmaU, FamilyKind::SigmaL}) {
        const StabilityReport rep = hurwitz_vertical(which, C, p);
        const double mr = max_re(rep.eigenvalues);
        if (std::abs(mr) < kMarginBand) continue;  // inside the margin band
        if (rep.verdict == Verdict::Stable) CHECK(mr < 0.0);
        if (rep.verdict == Verdict::Unstable) CHECK(mr > 0.0);
      }
    }
  }
}

TEST_CASE("no level has the lower rotation unstable while the upper is stable") {
  for (const BodyParams& p : {figure_set(0.55), figure_set(0.46), figure_set(0.51),
                              prolate_unit()}) {
    for (int i = 0; i <= 60; ++i) {
      const double C = -3.0 + 6.0 * i / 60.0;
      const Verdict lower = hurwitz_vertical(FamilyKind::SigmaL, C, p).verdict;
      const Verdict upper = hurwitz_vertical(FamilyKind::SigmaU, C, p).verdict;
      CHECK_FALSE((lower == Verdict::Unstable && upper == Verdict::Stable));
    }
  }
}

TEST_CASE("finite-difference linearization confirms the closed-form quartic") {
  const BodyParams p = figure_set(0.55);
  for (double C : {0.0, 0.9, 2.2}) {
    for (FamilyKind which : {FamilyKind::SigmaU, FamilyKind::SigmaL}) {
      const EquilibriumFamily fam = vertical_family(which, C, p);
      const Linearization lin = linearize_full(fam, p);
      CHECK(lin.zero_count == 2);  // unit-gamma and area integrals

      const StabilityReport rep = hurwitz_vertical(which, C, p);
      // monic quartic from the spectrum vs closed-form coefficients (common scale a0)
      for (int k = 0; k < 5; ++k) {
        const double closed = rep.coefficients[k] / rep.coefficients[0];
        CHECK(lin.transverse_characteristic[k] ==
              doctest::Approx(closed).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("spectrum sign pattern flips across the threshold") {
  const BodyParams p = figure_set(0.55);
  const EquilibriumFamily below = vertical_family(FamilyKind::SigmaL, 1.0, p);
  const EquilibriumFamily above = vertical_family(FamilyKind::SigmaL, 2.0, p);
  auto transverse_max_re = [](const Linearization& lin) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& ev : lin.eigenvalues)
      if (std::abs(ev) >= kMarginBand) m = std::max(m, ev.real());
    return m;
  };
  CHECK(transverse_max_re(linearize_full(below, p)) < -kMarginBand);
  CHECK(transverse_max_re(linearize_full(above, p)) > kMarginBand);
}

TEST_CASE("tilted rotations are stable exactly in the oblate case") {
  const BodyParams oblate = figure_set(0.55);
  for (double c1 : {2.8, 3.0, 5.0, -3.5}) {
    const StabilityReport rep = sigma0_characteristic(c1, oblate);
    CHECK(rep.verdict == Verdict::Stable);
    CHECK(rep.conditions.size() == 4);
    for (double c : rep.conditions) CHECK(c > 0.0);
    CHECK(max_re(rep.eigenvalues) < 0.0);
  }
  const BodyParams prolate = figure_set(0.46);
  for (double c1 : {2.5, 3.0, -4.0}) {
    const StabilityReport rep = sigma0_characteristic(c1, prolate);
    CHECK(rep.verdict == Verdict::Unstable);
    CHECK(max_re(rep.eigenvalues) > 0.0);
  }
  CHECK_THROWS_AS(sigma0_characteristic(1.0, oblate), std::domain_error);
}

TEST_CASE("frozen tilted spectrum on the C = -2 level") {
  const BodyParams p = figure_set(0.55);
  const double c1 = c1_from_area_integral(-2.0, p);
  const StabilityReport rep = sigma0_characteristic(c1, p);
  REQUIRE(rep.eigenvalues.size() == 3);
  // sorted by descending real part: slow real mode first, damped pair after
  CHECK(rep.eigenvalues[0].real() == doctest::Approx(-0.08598839953148918).epsilon(5e-3));
  CHECK(rep.eigenvalues[1].real() == doctest::Approx(-1.7362445418117025).epsilon(5e-3));
  CHECK(rep.eigenvalues[2].real() == doctest::Approx(-1.7362445418117025).epsilon(5e-3));
  CHECK(std::abs(rep.eigenvalues[1].imag()) == doctest::Approx(3.571024986849262).epsilon(5e-3));
}

TEST_CASE("verdict names") {
  CHECK(std::string(to_string(Verdict::Stable)) == "Stable");
  CHECK(std::string(to_string(Verdict::Unstable)) == "Unstable");
  CHECK(std::string(to_string(Verdict::Marginal)) == "Marginal");
}
