#pragma once

#include <optional>
#include <string>

#include "gapforge/conformal.hpp"
#include "gapforge/domain.hpp"
#include "gapforge/eigsolve.hpp"
#include "gapforge/model1d.hpp"

namespace gapforge {

/// Full record of one gap-bound pipeline run. The final bound is a pure
/// function of the stored intermediates (see recompute_bound).
struct GapBoundReport {
  std::string branch;          // pipeline identifier
  int dim = 0;
  double diameter = 0.0;       // input diameter (hyperbolic for horoconvex pipelines)
  double curvature = 0.0;      // substrate curvature K of the comparison machinery

  // intermediates (NaN when a stage does not apply)
  double D_E = NAN;            // base-metric interval length source
  double model_length = NAN;   // 1D model interval length actually used
  double R_E = NAN;
  double r_in = NAN;
  double lam1_upper = NAN;     // upper bound on lambda_1 fed into Vbar
  std::string lam1_source;
  double C = NAN;              // modulus constant, equals min rho_bar
  double sigma = NAN;          // quadratic coefficient of rho_bar
  double Vbar = NAN;
  double lam0_bar = NAN;       // lambda_1(rho_bar, 0)
  double lam1_bar = NAN;       // lambda_1(rho_bar, Vbar), re-solved
  double min_rho_bar = NAN, max_rho_bar = NAN;
  double min_rho = NAN, max_rho = NAN;
  double gap_bar = NAN;        // model gap entering the bound
  double gap_bar_solved = NAN;
  double gap_bar_closed_form = NAN;
  double osc_Rg = 0.0;
  double osc_rho_inv = 0.0;
  double correction = 0.0;     // total subtracted correction terms
  double noise_floor = NAN;    // 1D eigen-difference resolution

  // condition flags (always recorded)
  bool condition2_ok = false;
  bool kpos_ok = true;         // K > 0 side conditions (true when K == 0)
  bool gap_resolved = true;    // model gap exceeded the numerical noise floor
  bool vacuous = false;        // no certified positive model gap

  double bound = 0.0;          // final bound; 0 with vacuous flag when not certified

  double recompute_bound() const {
    return min_rho_bar / max_rho * gap_bar - correction;
  }
};

struct ConditionFlags {
  bool condition2 = false;
  bool kpos = true;
  double condition2_worst = 0.0;  // most negative sampled value of the product
};

/// Theorem side conditions: condition-2 checks [rho_bar cs_K^2]'(lam_bar - lam1)
/// >= 0 sampled on [0, D/2]; the K > 0 flag checks rho_bar <= min rho and
/// Vbar >= max V.
ConditionFlags check_conditions(const Modulus1D& m, double curvature, double lam_bar,
                                double lam1, double min_rho, double max_V,
                                double tol = 1e-10);

struct CChoice {
  static CChoice automatic() { return {}; }
  static CChoice fixed(double c) { return {c}; }
  std::optional<double> value;  // nullopt: maximize over a 32-point log grid
};

/// Diameter-only horoconvex pipeline (Poincare disk weight, Borisenko inradius,
/// Savo eigenvalue chain). The model gap is a tunneling splitting for every
/// admissible (N, D_H); when it falls below the eigensolver's resolution the
/// report is flagged vacuous rather than carrying sign noise.
GapBoundReport horoconvex_gap_bound(int dim, double diam_hyperbolic,
                                    CChoice C = CChoice::automatic(), int grid_n = 257);

struct ClosedFormBound {
  double value = 0.0;      // exp(log_value); 0 on underflow
  double log_value = 0.0;  // always finite for admissible inputs
  double R = 0.0;          // Hessian-chain constant R(N, D) (explicit bound only)
  bool asymptotic_regime = false;  // D >= 4N (asymptotic bound only)
};

/// Fully explicit horoconvex bound
/// pi^2/((4 ^ D^2/2)(1 + 2N/(N+1) sinh^2 D)^2) exp(-C_N (1 ^ D/2) sqrt(R(N,D))).
/// The value underflows double precision for all admissible (N, D); log_value
/// carries the bound exactly.
ClosedFormBound explicit_horoconvex_bound(int dim, double diam, double C_N = 1.0);

/// Large-diameter asymptotic bound pi^2 (N-1)^2 D^2/16 exp(-(N-1)D^2(1+2e^{2D})^2).
ClosedFormBound asymptotic_horoconvex_bound(int dim, double diam);

enum class Lambda1Source { Computed2D, User, InscribedBall };

/// Conformally flat pipeline: concave factors take the constant modulus branch,
/// otherwise the quadratic modulus with Vbar built from a lambda_1 upper bound
/// (2D solve, user value, or the inscribed-ball fallback). Subtracts the
/// scalar-curvature oscillation term.
GapBoundReport conformally_flat_bound(const ConformalFactorSpec& cf, const Domain& dom,
                                      int dim, Lambda1Source lam1_source,
                                      std::optional<double> lam1_user = std::nullopt,
                                      CChoice C = CChoice::automatic(),
                                      int grid_n = 257);

/// Sphere-base pipeline for conformal deformations of the round sphere of
/// curvature K; with small_horoconvex the factor is the stereographic
/// hyperbolic-over-sphere one and the sphere radius R is grid-searched for the
/// side conditions. dom is interpreted in the shared chart.
GapBoundReport sphere_deformation_bound(const ConformalFactorSpec& cf, const Domain& dom,
                                        int dim, double curvature, int grid_n = 257);

GapBoundReport small_horoconvex_bound(const Domain& dom, int dim, int radius_grid = 24,
                                      int grid_n = 257);

/// S^1 x S^{N-1} universal-cover pipeline: rho = 1/r^2 on the punctured chart,
/// sigma = 6/(inf r)^4, constant scalar curvature (no oscillation term).
GapBoundReport s1xsn_modulus(const Domain& dom, int dim, Lambda1Source lam1_source,
                             std::optional<double> lam1_user = std::nullopt,
                             std::optional<double> C = std::nullopt, int grid_n = 257);

/// First positive zero of the Bessel function J_{N/2-1} (table, N = 2..12).
double bessel_first_zero_halfinteger(int dim);

}  // namespace gapforge
