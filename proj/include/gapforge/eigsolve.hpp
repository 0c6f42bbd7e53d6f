#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gapforge/conformal.hpp"
#include "gapforge/domain.hpp"
#include "gapforge/interp.hpp"
#include "gapforge/model1d.hpp"

namespace gapforge {

/// Uniform grid over the domain's bounding box with Shortley-Weller arm data.
struct Grid2D {
  double x0 = 0, y0 = 0, h = 0;
  int nx = 0, ny = 0;
  std::vector<int> index;                    // nx*ny -> interior index or -1
  std::vector<std::pair<int, int>> nodes;    // interior -> (i, j)
  std::vector<std::array<double, 4>> arms;   // E, W, N, S in units of h
  bool aligned = true;                       // all arms == 1 (symmetric stencil)

  Vec point(int k) const {
    return vec2(x0 + nodes[k].first * h, y0 + nodes[k].second * h);
  }
  int interior_count() const { return static_cast<int>(nodes.size()); }
};

Grid2D build_grid(const Domain& dom, double h);

struct EigenResult2D {
  Grid2D grid;
  double lam1_raw = 0, lam2_raw = 0;      // fine grid (spacing h)
  double lam1_coarse = 0, lam2_coarse = 0;  // spacing 2h... fine/coarse pair (h, h/2)
  double lam1 = 0, lam2 = 0;              // Richardson-extrapolated
  double gap_raw = 0, gap = 0;
  std::vector<double> u1, u2;             // interior samples, L^2(rho)-normalized, u1 > 0
  double residual1 = 0, residual2 = 0;    // ||(A - lam B) u|| / ||u||
  std::string boundary_tag;               // "aligned" or "shortley-weller"

  /// Bicubic interpolant of an eigenfunction over the full node grid
  /// (exterior nodes are the Dirichlet zero extension).
  BicubicField interpolant(const std::vector<double>& u) const;
};

/// Weighted Dirichlet problem -Lap u + V u = lambda rho u on a convex 2D chart
/// domain: 5-point stencils with Shortley-Weller one-sided arms at curved
/// boundaries, diagonal weight, two smallest eigenpairs by shift-inverted
/// Krylov iteration on the symmetrized operator, Richardson from (h, h/2).
EigenResult2D solve_weighted_2d(const Domain& dom,
                                const std::function<double(const Vec&)>& rho,
                                const std::function<double(const Vec&)>& V, double h);

struct HyperbolicBallGap {
  double lam1, lam2, gap;
  EigenResult2D detail;
};

/// Chart ball of Euclidean radius R_E with the disk weight 4/(1-r^2)^2. At
/// N = 2 the weighted spectrum coincides with the hyperbolic-metric spectrum.
HyperbolicBallGap hyperbolic_ball_gap(double chart_radius, double h);

struct LogConcavityAudit {
  int pairs_checked = 0;
  int pairs_skipped = 0;       // too close to the boundary or to each other
  double max_violation = 0.0;  // max of F_{grad v} - bound; <= 0 means no violation
  double min_slack = 0.0;      // min of bound - F
  int violations = 0;          // pairs with violation beyond tolerance
};

/// Samples random interior pairs (margin 3h, d >= 4h) and checks the two-point
/// log-concavity bound F_{grad v}(x,y) <= 2 (log phi1_bar)'(d/2) + (N-1) tn_K(d/2)
/// for v = log u1 of the 2D solve against the 1D modulus spectrum.
LogConcavityAudit log_concavity_audit(const EigenResult2D& res, const Domain& dom,
                                      const Spectrum1D& modulus, double curvature,
                                      int pairs, uint64_t seed = 2024,
                                      double tol = 1e-4);

struct CollapseRow {
  double r;
  double h_used;
  double gap_weighted;        // disk-chart weighted problem
  double gap_euclidean;       // rho == 1 control on the same rectangle
  double height_left;         // 2 arcsinh(8r/(4 - L^2 - 4r^2))
  double height_neck;         // 2 arcsinh(32r/(16 - L^2 - 16r^2))
  double height_ratio;
};

struct CollapseStudy {
  double L;
  double ratio_limit;  // (16 - L^2)/(16 - 4 L^2)
  std::vector<CollapseRow> rows;
};

/// Appendix experiment: rectangles (+-L, +-r) in the disk chart. For each r the
/// weighted and the Euclidean-control gaps are solved at h_r = min(h, r/6) and
/// the two closed-form height bounds and their ratio are evaluated.
CollapseStudy appendix_collapse(double L, const std::vector<double>& r_list, double h);

}  // namespace gapforge
