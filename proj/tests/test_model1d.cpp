#include <doctest.h>

#include <cmath>

#include "gapforge/model1d.hpp"
#include "gapforge/rng.hpp"
#include "support/oracles.hpp"

using namespace gapforge;

TEST_CASE("unweighted model: sine spectrum") {
  Modulus1D m{M_PI, Profile1D::constant(1.0), Profile1D::constant(0.0)};
  const Spectrum1D sp = solve_1d(m, 65);
  CHECK(sp.lam1 == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(sp.lam2 == doctest::Approx(4.0).epsilon(1e-7));
  CHECK(sp.gap == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(sp.gap_resolved);
  CHECK(sp.lam1_raw < sp.lam2_raw);

  // constant weight halves the eigenvalues
  Modulus1D m2{M_PI, Profile1D::constant(2.0), Profile1D::constant(0.0)};
  const Spectrum1D sp2 = solve_1d(m2, 65);
  CHECK(sp2.lam1 == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(sp2.lam2 == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("weighted model agrees with the shooting oracle") {
  Modulus1D m{2.0, Profile1D::quadratic(1.0, 1.0), Profile1D::constant(0.0)};
  const Spectrum1D sp = solve_1d(m, 257);
  const double lam1 = oracle::shoot_eigenvalue_1d(m, 1);
  const double lam2 = oracle::shoot_eigenvalue_1d(m, 2);
  CHECK(sp.lam1 == doctest::Approx(lam1).epsilon(1e-8));
  CHECK(sp.lam2 == doctest::Approx(lam2).epsilon(1e-8));
  // Lemma bracket contains both
  const Bracket b1 = eigenvalue_bracket(m, 1);
  CHECK(lam1 >= b1.lower);
  CHECK(lam1 <= b1.upper);
}

TEST_CASE("eigenfunction invariants") {
  Modulus1D m{1.7, Profile1D::quadratic(0.6, 0.8), Profile1D::constant(0.3)};
  const Spectrum1D sp = solve_1d(m, 129);
  for (double v : sp.phi1) CHECK(v > 0.0);
  int sign_changes = 0;
  for (int i = 0; i + 1 < sp.n; ++i)
    if (sp.phi2[i] * sp.phi2[i + 1] < 0.0) ++sign_changes;
  CHECK(sign_changes == 1);
  // L^2(rho) normalization
  double mass = 0.0;
  for (int i = 0; i < sp.n; ++i) mass += sp.rho_nodes[i] * sp.phi1[i] * sp.phi1[i];
  CHECK(mass * sp.h == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("log derivative: analytic case, oddness, Riccati residual") {
  const double D = 2.0;
  Modulus1D m{D, Profile1D::constant(1.0), Profile1D::constant(0.0)};
  const Spectrum1D sp = solve_1d(m, 257);
  const LogDerivative ld = log_derivative_psi(sp);
  CHECK(ld.max_odd_defect <= 1e-8);
  double worst = 0.0, worst_riccati = 0.0;
  for (size_t i = 1; i + 1 < ld.s.size(); ++i) {
    const double s = ld.s[i];
    if (std::abs(s) > D / 2.0 - 2.0 * sp.h) continue;
    worst = std::max(worst,
                     std::abs(ld.psi[i] + (M_PI / D) * std::tan(M_PI * s / D)));
    const double dpsi = (ld.psi[i + 1] - ld.psi[i - 1]) / (2.0 * sp.h);
    const double res = dpsi + ld.psi[i] * ld.psi[i] + sp.lam1_raw * sp.rho_nodes[i];
    worst_riccati = std::max(worst_riccati, std::abs(res));
  }
  CHECK(worst <= 5e-3);           // psi has an O(h^2) relative defect, psi ~ 1/h at edge
  CHECK(worst_riccati <= 5e-2);   // second differences of a pole-forming function

  // the same residual with a potential reinstated
  Modulus1D mv{1.5, Profile1D::quadratic(0.4, 1.0), Profile1D::constant(2.0)};
  const Spectrum1D spv = solve_1d(mv, 513);
  const LogDerivative ldv = log_derivative_psi(spv);
  double worst_v = 0.0;
  for (size_t i = 1; i + 1 < ldv.s.size(); ++i) {
    if (std::abs(ldv.s[i]) > mv.length / 2.0 - 6.0 * spv.h) continue;
    const double dpsi = (ldv.psi[i + 1] - ldv.psi[i - 1]) / (2.0 * spv.h);
    const double res = dpsi + ldv.psi[i] * ldv.psi[i] +
                       spv.lam1_raw * spv.rho_nodes[i] -
                       mv.V(ldv.s[i], mv.length / 2.0);
    worst_v = std::max(worst_v, std::abs(res));
  }
  CHECK(worst_v <= 1e-2);
}

TEST_CASE("eigenvalue brackets") {
  Modulus1D flat{M_PI, Profile1D::constant(1.0), Profile1D::constant(0.0)};
  const Bracket b = eigenvalue_bracket(flat, 1);
  CHECK(b.lower == doctest::Approx(1.0));
  CHECK(b.upper == doctest::Approx(1.0));

  Modulus1D shifted{M_PI, Profile1D::constant(1.0), Profile1D::constant(5.0)};
  const Bracket bs = eigenvalue_bracket(shifted, 1);
  CHECK(bs.lower == doctest::Approx(6.0));
  CHECK(bs.upper == doctest::Approx(6.0));

  Modulus1D mixed{M_PI, Profile1D::quadratic(8.0 / (M_PI * M_PI / 2.0), 1.0),
                  Profile1D::constant(0.0)};  // rho in [1, 2]
  const Bracket bm = eigenvalue_bracket(mixed, 1);
  CHECK(bm.lower == doctest::Approx(0.5));
  CHECK(bm.upper == doctest::Approx(1.0));
  const Spectrum1D sp = solve_1d(mixed, 129);
  CHECK(sp.lam1 >= bm.lower - 1e-9);
  CHECK(sp.lam1 <= bm.upper + 1e-9);

  Modulus1D bad{1.0, Profile1D::constant(1.0), Profile1D::constant(-100.0)};
  CHECK_THROWS_AS(eigenvalue_bracket(bad, 1), std::domain_error);
}

TEST_CASE("closed-form gap bound") {
  Modulus1D flat{1.3, Profile1D::constant(1.0), Profile1D::constant(0.0)};
  CHECK(closed_form_gap_bound(flat) ==
        doctest::Approx(3.0 * M_PI * M_PI / (1.3 * 1.3)).epsilon(1e-14));
  // constant potential shifts both eigenvalues: bound stays the exact gap
  Modulus1D shifted{1.3, Profile1D::constant(1.0), Profile1D::constant(3.7)};
  CHECK(closed_form_gap_bound(shifted) == doctest::Approx(closed_form_gap_bound(flat)));
  const Spectrum1D sp = solve_1d(shifted, 129);
  CHECK(sp.gap == doctest::Approx(3.0 * M_PI * M_PI / (1.3 * 1.3)).epsilon(1e-7));

  Modulus1D bad{1.0, Profile1D::constant(1.0), Profile1D::constant(-0.1)};
  CHECK_THROWS_AS(closed_form_gap_bound(bad), std::domain_error);
}

TEST_CASE("neumann ratio eigenvalue") {
  Modulus1D flat{1.9, Profile1D::constant(1.0), Profile1D::constant(0.0)};
  const NeumannRatio nr = neumann_ratio_eigen(flat, 513);
  CHECK(nr.mu == doctest::Approx(3.0 * M_PI * M_PI / (1.9 * 1.9)).epsilon(2e-5));
  CHECK(nr.residual <= 5e-2);

  // gap >= mu / max rho over random moduli
  Philox gen(31, 6);
  for (int i = 0; i < 10; ++i) {
    Modulus1D m{0.8 + 1.5 * gen.uniform(),
                Profile1D::quadratic(gen.uniform(), 0.6 + gen.uniform()),
                Profile1D::constant(0.0)};
    const Spectrum1D sp = solve_1d(m, 257);
    const NeumannRatio r = neumann_ratio_eigen(m, 257);
    CHECK(sp.gap >= r.mu / m.rho.max_on(m.length / 2.0) - 1e-6);
  }
}

TEST_CASE("riccati comparison") {
  // rho == 1 with L = D: psi == psi_L up to the discretization bias
  Modulus1D flat{2.0, Profile1D::constant(1.0), Profile1D::constant(0.0)};
  const RiccatiComparison eq = riccati_compare(flat, 2.0, 513);
  CHECK(std::abs(eq.max_violation) <= 2e-3);

  // random sweeps at the threshold length
  Philox gen(41, 8);
  for (int i = 0; i < 30; ++i) {
    Modulus1D m{0.6 + 2.0 * gen.uniform(),
                Profile1D::quadratic(0.05 + gen.uniform(), 0.5 + 1.5 * gen.uniform()),
                Profile1D::constant(0.0)};
    const double L =
        std::sqrt(m.rho.max_on(m.length / 2) / m.rho.min_on(m.length / 2)) * m.length;
    const RiccatiComparison rc = riccati_compare(m, L, 1025);
    CHECK(rc.holds);
  }

  // below the threshold the comparison genuinely fails for strongly varying rho
  Modulus1D strong{3.0, Profile1D::quadratic(1.0, 0.5), Profile1D::constant(0.0)};
  const double required =
      std::sqrt(strong.rho.max_on(1.5) / strong.rho.min_on(1.5)) * strong.length;
  CHECK_THROWS_AS(riccati_compare(strong, 0.9 * required, 513), std::domain_error);
  {
    // the counterexample, computed directly at L = D < required
    const Spectrum1D sp = solve_1d(strong, 513);
    const LogDerivative ld = log_derivative_psi(sp);
    double worst = -1e300;
    for (size_t i = 0; i < ld.s.size(); ++i) {
      const double s = ld.s[i];
      if (s < 0.0 || s > strong.length / 2.0 - 2.0 * sp.h) continue;
      worst = std::max(worst,
                       ld.psi[i] + (M_PI / strong.length) *
                                       std::tan(M_PI * s / strong.length));
    }
    CHECK(worst > 1e-3);  // psi > psi_L somewhere: expected failure fixture
  }
}

TEST_CASE("solver rejects undersized grids and bad weights") {
  Modulus1D m{1.0, Profile1D::constant(1.0), Profile1D::constant(0.0)};
  CHECK_THROWS_AS(solve_1d(m, 16), std::invalid_argument);
  Modulus1D bad{1.0, Profile1D::quadratic(-3.0, 0.1), Profile1D::constant(0.0)};
  CHECK_THROWS_AS(solve_1d(bad, 64), std::invalid_argument);
}
