#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "gapforge/geometry.hpp"

namespace gapforge {

/// phi and its chart (Euclidean-coordinate) derivatives at a point.
struct ConformalEval {
  double phi = 0.0;
  Vec grad;  // chart gradient of phi
  Mat hess;  // chart Hessian of phi
};

/// Scalar field with analytic derivative evaluators, all in chart coordinates.
struct ScalarField {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;
};

enum class ConformalKind {
  Zero,                 // phi == 0 (identity change)
  PoincareDisk,         // exp(2 phi) = 4/(1-r^2)^2 over the Euclidean base
  SphereStereoRadiusR,  // exp(2 phi) = (R^2+r^2)^2/(R^4 (1-r^2)^2) over S^N_K, K = 1/R^2
  InverseSquareRadial,  // exp(2 phi) = 1/r^2 over the punctured Euclidean base
  UserSampledGrid,      // 2D bicubic samples of phi
};

class BicubicField;  // defined in eigsolve.hpp

/// A conformal factor exp(2 phi) together with the base geometry it deforms.
struct ConformalFactorSpec {
  ConformalKind kind = ConformalKind::Zero;
  double sphere_radius = 1.0;           // R for SphereStereoRadiusR
  SpaceForm base = SpaceForm::euclidean(2);
  std::shared_ptr<BicubicField> sampled;  // UserSampledGrid only

  static ConformalFactorSpec zero(int n);
  static ConformalFactorSpec poincare_disk(int n);
  static ConformalFactorSpec sphere_stereo(int n, double R);
  static ConformalFactorSpec inverse_square(int n);
  static ConformalFactorSpec user_grid(std::shared_ptr<BicubicField> phi_samples);

  bool in_chart(const Vec& p) const;
  ConformalEval eval(const Vec& p) const;
  double phi(const Vec& p) const { return eval(p).phi; }
  double rho(const Vec& p) const { return std::exp(2.0 * eval(p).phi); }
  /// Chart Hessian of exp(2 phi) = e^{2 phi} (2 Hess phi + 4 grad phi grad phi^T).
  Mat hess_rho_chart(const Vec& p) const;
};

/// Weight/potential pair of the Schrodinger form of the conformal eigenproblem:
/// rho = e^{2 phi},  V = (N-2)^2/4 |grad phi|^2 + (N-2)/2 Lap phi,
/// derivatives taken in the factor's base metric.
struct SchrodingerData {
  double rho, V;
};
SchrodingerData schrodinger_data(const ConformalFactorSpec& cf, int dim, const Vec& p);

/// Scalar curvature of e^{2 phi} g_base:
/// R = e^{-2 phi} (R_base - 2(N-1) Lap_base phi - (N-1)(N-2) |grad phi|_base^2).
double scalar_curvature(const ConformalFactorSpec& cf, int dim, const SpaceForm& base,
                        const Vec& p);

/// Hessian of F under the conformal change g~ = e^{2 phi} g, as a bilinear form
/// in chart coordinates:
/// Hess_{g~} F = Hess_g F - 2 dphi (.) dF + (grad phi . grad F) g,  symmetrized.
Mat conformal_hessian(const ConformalFactorSpec& cf, const ScalarField& F, const Vec& p);

/// Largest eigenvalue of the Hessian of rho = e^{2 phi} measured against the
/// base metric (unit-vector bilinear form), used for the modulus coefficient
/// sigma. For a conformal base metric c^2 g_E this is eig(Hess_chart)/c^2 after
/// the chart-to-base Hessian correction.
double max_hessian_eigenvalue_rho(const ConformalFactorSpec& cf, const Vec& p);

/// Laplacian and squared gradient norm of phi in the base metric of `cf`.
struct BaseDerivatives {
  double grad_norm2, laplacian;
};
BaseDerivatives base_derivatives(const ConformalFactorSpec& cf, const Vec& p);

/// Scalar curvature of the base space form: 0 for Euclidean charts,
/// N(N-1)K for spheres.
double base_scalar_curvature(const SpaceForm& base);

}  // namespace gapforge
