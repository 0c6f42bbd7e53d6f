#pragma once

#include <optional>
#include <vector>

#include "gapforge/geometry.hpp"

namespace gapforge {

enum class DomainKind { AxisRectangle, Ball, ConvexPolygon };

/// Convex domain in a chart. Rectangles and balls work in any dimension,
/// polygons are 2D. Disk-chart domains must stay strictly inside the unit disk.
struct Domain {
  DomainKind kind = DomainKind::AxisRectangle;
  Chart chart = Chart::Euclidean;
  Vec center;               // rectangle / ball
  Vec half_widths;          // rectangle
  double radius = 0.0;      // ball
  std::vector<Vec> vertices;  // polygon, strictly convex, counterclockwise

  static Domain rectangle(const Vec& center, const Vec& half_widths,
                          Chart chart = Chart::Euclidean);
  static Domain ball(const Vec& center, double radius, Chart chart = Chart::Euclidean);
  static Domain polygon(std::vector<Vec> ccw_vertices, Chart chart = Chart::Euclidean);

  int dim() const;
  void validate() const;
  bool contains(const Vec& p) const;
  /// Euclidean distance from an interior point to the boundary (clamped at 0).
  double boundary_distance(const Vec& p) const;
  /// Axis-aligned bounding box [lo, hi].
  std::pair<Vec, Vec> bounding_box() const;
  /// Radius of the largest inscribed Euclidean ball (exact for rectangles and
  /// balls, sample-refined for polygons).
  double inradius() const;
  /// Uniform boundary samples (2D), counterclockwise.
  std::vector<Vec> boundary_samples(int count) const;
};

struct DomainMetrics {
  double diameter_euclidean = 0.0;
  std::optional<double> diameter_hyperbolic;  // disk chart only
};

/// Maximum pairwise distances over boundary samples, refined by golden-section
/// search along the boundary parameters. D_H is computed only on the disk chart.
DomainMetrics diameters(const Domain& dom, int samples = 4096);

/// Inradius lower bound of a horoconvex domain from its hyperbolic diameter,
/// r >= (-1 + sqrt(D/2 + 1))^2.
double inradius_from_diameter(double diam_hyperbolic);

struct CircumradiusBound {
  double R_E;            // chart (Euclidean) circumradius bound, tanh of half the
                         // hyperbolic circumradius bound
  double chain_lhs;      // 1/(1 - R_E^2)
  double chain_rhs;      // 1 + 2N/(N+1) sinh^2(D)
  bool chain_holds;      // lhs <= rhs (checked inequality)
};

/// Euclidean circumradius bound for a domain of hyperbolic diameter D_H:
/// R_E = tanh( arcsinh( sqrt(2N/(N+1)) sinh D_H ) / 2 ).
CircumradiusBound circumradius_re(int dim, double diam_hyperbolic);

/// C^2 boundary curve samples in the disk chart: position, first and second
/// parameter derivatives, counterclockwise.
struct BoundaryCurve {
  std::vector<Vec> position, d1, d2;
};

struct HoroconvexityResult {
  bool horoconvex;
  double min_curvature;  // min hyperbolic geodesic curvature along the samples
};

/// Checks min kappa_g >= 1 - tol where kappa_g = e^{-phi} (kappa_E + dphi/dnu)
/// is the geodesic curvature of the boundary in the hyperbolic metric.
HoroconvexityResult horoconvexity_check(const BoundaryCurve& curve, double tol = 1e-6);

/// Convenience: sampled boundary curve of a domain (2D; rectangles get rounded
/// derivative data only at smooth points, so prefer balls/analytic curves).
BoundaryCurve ball_boundary_curve(const Vec& center, double radius, int samples);

}  // namespace gapforge
