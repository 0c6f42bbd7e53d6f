#pragma once

#include "gapforge/conformal.hpp"
#include "gapforge/geometry.hpp"

namespace gapforge {

/// Two-point context: a K >= 0 substrate, a smooth field v with derivative
/// evaluators in chart coordinates, and the geodesic data of a pair.
struct TwoPointContext {
  SpaceForm space;
  ScalarField v;
};

struct TwoPointForms {
  double Z;        // F_{grad v}(x, y)
  double C_f;      // f(x) + f(y) for the requested f
  double dist;
};

/// Z(x,y) = <grad v(y), gamma'(d/2)> - <grad v(x), gamma'(-d/2)> and the sum
/// form C_f, all with the midpoint-parametrized geodesic convention.
TwoPointForms two_point_forms(const TwoPointContext& ctx, const Vec& x, const Vec& y,
                              const std::function<double(const Vec&)>& f);

/// F_X for an arbitrary chart vector field.
double f_form(const SpaceForm& space, const std::function<Vec(const Vec&)>& X,
              const Vec& x, const Vec& y);

/// Substrate gradient, Laplacian and the derived field W = Lap v + |grad v|^2
/// (standing in for V - lambda1 rho through the log-eigenfunction identity).
double field_w(const SpaceForm& space, const ScalarField& v, const Vec& p);
Vec metric_gradient(const SpaceForm& space, const ScalarField& v, const Vec& p);

struct IdentityResidual {
  double lhs, rhs, residual;
};

/// Finite-difference check of the second-derivative identity for Z: the sum of
/// second derivatives along E_1..E_N computed by endpoint-geodesic variations
/// against the curvature/derivative terms on the right-hand side, with
/// V - lambda1 rho replaced by W = Lap v + |grad v|^2. Step h is the variation
/// parameter; the residual vanishes at O(h^2).
IdentityResidual hessian_identity_residual(const TwoPointContext& ctx, const Vec& x,
                                           const Vec& y, double h);

}  // namespace gapforge
