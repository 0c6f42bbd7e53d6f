#pragma once

#include <vector>

#include "gapforge/interp.hpp"

namespace gapforge {

/// Even profile on [-D/2, D/2]: either sigma/2 s^2 + C (sigma >= 0, C > 0),
/// a constant, or even samples on [0, D/2].
struct Profile1D {
  enum class Kind { Quadratic, Constant, Sampled } kind = Kind::Constant;
  double sigma = 0.0;  // quadratic coefficient
  double c0 = 1.0;     // constant term / constant value
  std::vector<double> samples;  // uniform on [0, D/2], front() at s = 0

  static Profile1D constant(double v) { return {Kind::Constant, 0.0, v, {}}; }
  static Profile1D quadratic(double sigma, double c) {
    return {Kind::Quadratic, sigma, c, {}};
  }
  static Profile1D sampled(std::vector<double> half_samples) {
    return {Kind::Sampled, 0.0, 0.0, std::move(half_samples)};
  }

  double operator()(double s, double half_length) const;
  double derivative(double s, double half_length) const;  // signed d/ds
  double min_on(double half_length) const;
  double max_on(double half_length) const;
};

/// One-dimensional comparison model: -phi'' + V phi = lambda rho phi on
/// [-D/2, D/2] with Dirichlet ends, rho > 0 and both profiles even.
struct Modulus1D {
  double length = M_PI;  // D
  Profile1D rho = Profile1D::constant(1.0);
  Profile1D V = Profile1D::constant(0.0);

  void validate() const;
};

struct Spectrum1D {
  double length = 0.0;
  int n = 0;          // interior nodes of the fine grid (odd, node at s = 0)
  double h = 0.0;     // fine-grid spacing
  double lam1_raw = 0.0, lam2_raw = 0.0;      // fine grid
  double lam1_coarse = 0.0, lam2_coarse = 0.0;
  double lam1 = 0.0, lam2 = 0.0;              // Richardson-extrapolated
  double gap_raw = 0.0, gap = 0.0;
  std::vector<double> s;             // fine-grid interior nodes
  std::vector<double> phi1, phi2;    // L^2(rho)-normalized, phi1 > 0
  std::vector<double> rho_nodes;
  double residual1 = 0.0, residual2 = 0.0;
  double noise_floor = 0.0;  // absolute eigenvalue-difference resolution estimate
  bool gap_resolved = true;  // gap_raw exceeded the noise floor

  /// phi1 and derivative as interpolants including the boundary zeros.
  Cubic1D phi1_interp() const;
  double log_derivative_phi1(double s) const;  // psi(s) = phi1'(s)/phi1(s)
  double phi_ratio(double s) const;            // Phi(s) = phi2(s)/phi1(s)
};

/// Discretizes with second-order central differences on a uniform grid (n forced
/// odd so s = 0 is a node), solves the generalized symmetric eigenproblem by
/// bisection on the Sturm count plus shift-inverted iteration with deflation,
/// and Richardson-extrapolates from (n, 2n+1).
Spectrum1D solve_1d(const Modulus1D& m, int n = 257);

/// psi = phi1'/phi1 by centered differences on interior nodes; psi(0) is pinned
/// to 0 (evenness). Endpoint nodes are excluded (log-derivative blows up there).
struct LogDerivative {
  std::vector<double> s, psi;
  double max_odd_defect;  // max |psi(s) + psi(-s)|
};
LogDerivative log_derivative_psi(const Spectrum1D& sp);

/// Interval bounds of Lemma-type eigenvalue comparison:
/// (k^2 pi^2/D^2 + min V)/max rho <= lam_k <= (k^2 pi^2/D^2 + max V)/min rho.
/// Requires min V >= -k^2 pi^2 / D^2.
struct Bracket {
  double lower, upper;
};
Bracket eigenvalue_bracket(const Modulus1D& m, int k);

/// Closed-form gap bound (V >= 0 required):
/// 3 pi^2/D^2 * min rho/(max rho)^2 - (max V/min rho - min V/max rho).
double closed_form_gap_bound(const Modulus1D& m);

/// Smallest nontrivial Neumann eigenvalue of w'' + 2 (log phi1)' w' = -mu w,
/// discretized in phi1^2-weighted divergence form.
struct NeumannRatio {
  double mu = 0.0;        // Richardson-extrapolated
  double mu_raw = 0.0;
  double residual = 0.0;  // ODE residual of Phi = phi2/phi1 against the gap
};
NeumannRatio neumann_ratio_eigen(const Modulus1D& m, int n = 257);

/// Riccati comparison (V == 0): psi of the weighted problem on D against the
/// unweighted psi_L(s) = -(pi/L) tan(pi s/L) on L >= sqrt(max rho/min rho) D.
/// The comparison is checked on 0 <= s <= D/2 - 2h; the negative half follows
/// by oddness of both log-derivatives.
struct RiccatiComparison {
  bool holds;
  double max_violation;   // max(psi - psi_L), positive means violated
  double length_ratio;    // L / D
};
RiccatiComparison riccati_compare(const Modulus1D& m, double L, int n = 513,
                                  double tol = 1e-6);

}  // namespace gapforge
