#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace gapforge {

// Small dense types; geometry dimensions stay below 16 so these live on the stack.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 16, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 16, 16>;

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

/// Generalized trig functions of a space of constant curvature K >= 0:
/// cs_K(s) = cos(sqrt(K) s), sn_K(s) = sin(sqrt(K) s)/sqrt(K) (sn_0(s) = s),
/// tn_K(s) = sqrt(K) tan(sqrt(K) s).
struct TrigK {
  double cs, sn, tn;
};

double cs_k(double curvature, double s);
double sn_k(double curvature, double s);
/// Throws std::domain_error at or beyond the pole |s| = pi/(2 sqrt K).
double tn_k(double curvature, double s);
/// All three at once; inherits tn_k's pole check.
TrigK trig_k(double curvature, double s);

enum class Chart {
  Euclidean,            // R^N, base metric g_E
  SphereStereographic,  // sphere of curvature K, chart metric (2R^2/(R^2+r^2))^2 g_E
  PoincareDisk,         // unit disk chart over a Euclidean base; hyperbolic metric
                        // enters only through the conformal factor 4/(1-r^2)^2
};

/// Constant-curvature model space M^N_K. Hyperbolic geometry is never a direct
/// substrate here: the Poincare chart keeps the base metric Euclidean, matching
/// the K >= 0 restriction of the two-point and diffusion machinery.
struct SpaceForm {
  int dim = 2;
  double curvature = 0.0;  // K >= 0
  Chart chart = Chart::Euclidean;

  static SpaceForm euclidean(int n) { return {n, 0.0, Chart::Euclidean}; }
  static SpaceForm sphere(int n, double k) {
    if (k <= 0.0) throw std::invalid_argument("sphere curvature must be positive");
    return {n, k, Chart::SphereStereographic};
  }
  static SpaceForm poincare_disk(int n) { return {n, 0.0, Chart::PoincareDisk}; }

  void validate() const;
  bool in_chart(const Vec& p) const;
  /// Conformal factor c(p) of the substrate metric in chart coordinates,
  /// g = c(p)^2 g_E. Euclidean and Poincare charts have c == 1 (Euclidean base).
  double chart_factor(const Vec& p) const;
  double sphere_radius() const { return 1.0 / std::sqrt(curvature); }

  double distance(const Vec& x, const Vec& y) const;
  /// Geodesic exponential map: follow the base-metric geodesic from p with
  /// initial velocity v (chart coordinates) for time 1.
  Vec exp_map(const Vec& p, const Vec& v) const;
};

/// Hyperbolic distance between points of the unit-disk chart,
/// d = acosh(1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2))).
double poincare_distance(const Vec& x, const Vec& y);

// Sphere chart helpers (curvature K, radius R = 1/sqrt(K)); the embedding is
// sigma(x) = (2R^2 x, R(|x|^2 - R^2)) / (R^2 + |x|^2) into R^{N+1}.
Vec sphere_embed(const SpaceForm& s, const Vec& x);
Vec sphere_unembed(const SpaceForm& s, const Vec& X);
Vec sphere_push_tangent(const SpaceForm& s, const Vec& x, const Vec& u);
Vec sphere_pull_tangent(const SpaceForm& s, const Vec& x, const Vec& W);

/// Midpoint-parametrized geodesic gamma(-d/2) = x, gamma(d/2) = y together with
/// a parallel orthonormal frame e_1..e_N along it, e_N = gamma'. Frame columns
/// are chart-coordinate vectors, orthonormal in the substrate metric.
struct GeodesicFrame {
  SpaceForm space;
  Vec x, y;
  double dist = 0.0;
  Mat frame_x, frame_y;  // column i = e_i at the endpoint; e_N points x -> y at
                         // x and away from x at y

  Vec tangent_at_x() const { return frame_x.col(space.dim - 1); }
  Vec tangent_at_y() const { return frame_y.col(space.dim - 1); }

  /// Mirror map m_{x,y}: parallel transport along the geodesic, then reflect
  /// across the hyperplane orthogonal to it (e_i -> e_i for i < N, e_N -> -e_N).
  Vec mirror(const Vec& w_at_x) const;

  /// Substrate inner product of chart tangents at a point.
  double metric_dot(const Vec& p, const Vec& u, const Vec& v) const;

  /// Gram matrix of the frame at one endpoint (identity up to tolerance).
  Mat gram(bool at_y) const;
};

/// Builds the geodesic frame between two distinct chart points. Throws on
/// coincident points; for spheres also on near-antipodal (cut locus) pairs.
GeodesicFrame geodesic_frame(const SpaceForm& space, const Vec& x, const Vec& y);

/// Deterministic orthonormal completion: columns form an orthonormal basis of
/// R^n whose last column equals the given unit vector.
Mat orthonormal_basis_with_last(const Vec& unit_last);

}  // namespace gapforge
