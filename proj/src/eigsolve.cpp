#include "gapforge/eigsolve.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "gapforge/rng.hpp"

namespace gapforge {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using DVec = Eigen::VectorXd;

double boundary_crossing(const Domain& dom, const Vec& p, const Vec& dir, double h) {
  // largest t in (0, 1] with p + t h dir inside; the neighbor is outside
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dom.contains(Vec(p + mid * h * dir)))
      lo = mid;
    else
      hi = mid;
  }
  return std::max(lo, 1e-6);  // degenerate arms are clipped, not zero
}

double min_width(const Domain& dom) {
  switch (dom.kind) {
    case DomainKind::AxisRectangle: return 2.0 * dom.half_widths.minCoeff();
    case DomainKind::Ball: return 2.0 * dom.radius;
    case DomainKind::ConvexPolygon: return 2.0 * dom.inradius();
  }
  return 0.0;
}

}  // namespace

Grid2D build_grid(const Domain& dom, double h) {
  dom.validate();
  if (dom.dim() != 2) throw std::invalid_argument("build_grid: 2D domains only");
  if (min_width(dom) / h < 10.0)
    throw std::invalid_argument("build_grid: fewer than 10 nodes across the min width");

  auto [lo, hi] = dom.bounding_box();
  Grid2D g;
  g.h = h;
  g.x0 = lo(0) - h;
  g.y0 = lo(1) - h;
  g.nx = static_cast<int>(std::ceil((hi(0) - g.x0) / h)) + 2;
  g.ny = static_cast<int>(std::ceil((hi(1) - g.y0) / h)) + 2;
  g.index.assign(static_cast<size_t>(g.nx) * g.ny, -1);

  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Vec p = vec2(g.x0 + i * h, g.y0 + j * h);
      if (dom.contains(p) && dom.boundary_distance(p) > 1e-12) {
        g.index[static_cast<size_t>(j) * g.nx + i] = static_cast<int>(g.nodes.size());
        g.nodes.emplace_back(i, j);
      }
    }

  const Vec dirs[4] = {vec2(1, 0), vec2(-1, 0), vec2(0, 1), vec2(0, -1)};
  g.arms.resize(g.nodes.size());
  g.aligned = true;
  for (size_t k = 0; k < g.nodes.size(); ++k) {
    const auto [i, j] = g.nodes[k];
    const Vec p = vec2(g.x0 + i * h, g.y0 + j * h);
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int a = 0; a < 4; ++a) {
      const int ii = i + di[a], jj = j + dj[a];
      const bool neighbor_in =
          ii >= 0 && ii < g.nx && jj >= 0 && jj < g.ny &&
          g.index[static_cast<size_t>(jj) * g.nx + ii] >= 0;
      double arm = 1.0;
      if (!neighbor_in) {
        const Vec q = vec2(g.x0 + ii * h, g.y0 + jj * h);
        // a neighbor exactly on the boundary carries the Dirichlet zero at arm 1
        arm = dom.contains(q) ? 1.0 : boundary_crossing(dom, p, dirs[a], h);
      }
      g.arms[k][a] = arm;
      if (arm != 1.0) g.aligned = false;
    }
  }
  return g;
}

namespace {

struct Assembled {
  SpMat C;           // symmetrized operator D^{-1/2} A D^{-1/2}
  DVec rho;          // node weights
  bool symmetric;
  double vmin;
};

Assembled assemble(const Grid2D& g, const std::function<double(const Vec&)>& rho_f,
                   const std::function<double(const Vec&)>& V_f) {
  const int n = g.interior_count();
  const double h = g.h;
  Assembled out;
  out.rho.resize(n);
  out.vmin = 0.0;
  std::vector<double> vdiag(n);
  for (int k = 0; k < n; ++k) {
    const Vec p = g.point(k);
    out.rho(k) = rho_f(p);
    if (out.rho(k) <= 0.0) throw std::domain_error("assemble: rho must be positive");
    vdiag[k] = V_f ? V_f(p) : 0.0;
    out.vmin = std::min(out.vmin, vdiag[k]);
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n) * 5);
  const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
  for (int k = 0; k < n; ++k) {
    const auto [i, j] = g.nodes[k];
    const auto& a = g.arms[k];
    const double hE = a[0] * h, hW = a[1] * h, hN = a[2] * h, hS = a[3] * h;
    const double diag = 2.0 / (hE * hW) + 2.0 / (hN * hS) + vdiag[k];
    trip.emplace_back(k, k, diag / out.rho(k));
    const double coef[4] = {2.0 / (hE * (hE + hW)), 2.0 / (hW * (hE + hW)),
                            2.0 / (hN * (hN + hS)), 2.0 / (hS * (hN + hS))};
    for (int t = 0; t < 4; ++t) {
      const int ii = i + di[t], jj = j + dj[t];
      if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny) continue;
      const int kk = g.index[static_cast<size_t>(jj) * g.nx + ii];
      if (kk < 0) continue;  // Dirichlet zero
      trip.emplace_back(k, kk, -coef[t] / std::sqrt(out.rho(k) * out.rho(kk)));
    }
  }
  out.C.resize(n, n);
  out.C.setFromTriplets(trip.begin(), trip.end());
  out.C.makeCompressed();
  out.symmetric = g.aligned;
  return out;
}

struct EigPair {
  double lambda;
  DVec w;  // symmetrized coordinates
  double residual;
};

// Shift-inverted Arnoldi with full reorthogonalization; reduces to Lanczos on
// symmetric (aligned) stencils. Returns the two smallest eigenpairs.
std::array<EigPair, 2> two_smallest(const Assembled& A, double shift_hint) {
  const int n = static_cast<int>(A.C.rows());
  const double sigma = (A.vmin < 0.0) ? shift_hint : 0.0;

  SpMat M = A.C;
  if (sigma != 0.0) {
    SpMat I(n, n);
    I.setIdentity();
    M = A.C - sigma * I;
  }

  std::function<DVec(const DVec&)> solve;
  std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt;
  std::unique_ptr<Eigen::SparseLU<SpMat>> lu;
  if (A.symmetric) {
    ldlt = std::make_unique<Eigen::SimplicialLDLT<SpMat>>(M);
    if (ldlt->info() != Eigen::Success)
      throw std::runtime_error("two_smallest: LDLT factorization failed");
    solve = [&l = *ldlt](const DVec& b) { return DVec(l.solve(b)); };
  } else {
    lu = std::make_unique<Eigen::SparseLU<SpMat>>();
    lu->analyzePattern(M);
    lu->factorize(M);
    if (lu->info() != Eigen::Success)
      throw std::runtime_error("two_smallest: LU factorization failed");
    solve = [&l = *lu](const DVec& b) { return DVec(l.solve(b)); };
  }

  const int m = std::min(n, 48);
  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  {
    Philox gen(0x67617066u, 1);  // deterministic start vector
    DVec v0(n);
    for (int i = 0; i < n; ++i) v0(i) = gen.uniform() - 0.5;
    V.col(0) = v0 / v0.norm();
  }
  int steps = m;
  for (int j = 0; j < m; ++j) {
    DVec w = solve(V.col(j));
    for (int pass = 0; pass < 2; ++pass)  // full reorthogonalization, two passes
      for (int i = 0; i <= j; ++i) {
        const double hij = V.col(i).dot(w);
        if (pass == 0)
          H(i, j) += hij;
        else
          H(i, j) += hij;
        w -= hij * V.col(i);
      }
    H(j + 1, j) = w.norm();
    if (H(j + 1, j) < 1e-12) {
      steps = j + 1;
      break;
    }
    V.col(j + 1) = w / H(j + 1, j);
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(H.topLeftCorner(steps, steps));
  struct Ritz {
    double lambda;
    int idx;
  };
  std::vector<Ritz> ritz;
  for (int i = 0; i < steps; ++i) {
    const std::complex<double> th = es.eigenvalues()(i);
    if (std::abs(th) < 1e-14) continue;
    const std::complex<double> lam = sigma + 1.0 / th;
    if (std::abs(lam.imag()) > 1e-6 * (1.0 + std::abs(lam.real()))) continue;
    ritz.push_back({lam.real(), i});
  }
  if (ritz.size() < 2) throw std::runtime_error("two_smallest: Krylov basis too poor");
  std::sort(ritz.begin(), ritz.end(),
            [](const Ritz& a, const Ritz& b) { return a.lambda < b.lambda; });

  std::array<EigPair, 2> out;
  for (int which = 0; which < 2; ++which) {
    const int idx = ritz[which].idx;
    Eigen::VectorXcd yc = es.eigenvectors().col(idx);
    DVec w = (V.leftCols(steps) * yc.real());
    w.normalize();
    double lambda = ritz[which].lambda;
    // polish: inverse iteration with deflation against the first vector
    for (int it = 0; it < 6; ++it) {
      const DVec Cw = A.C * w;
      lambda = w.dot(Cw);
      const double res = (Cw - lambda * w).norm();
      if (res < 1e4 * std::numeric_limits<double>::epsilon() * lambda + 1e-13) break;
      DVec z = solve(w);
      if (which == 1) z -= out[0].w.dot(z) * out[0].w;
      w = z / z.norm();
    }
    const DVec Cw = A.C * w;
    lambda = w.dot(Cw);
    out[which].lambda = lambda;
    out[which].w = w;
    out[which].residual = (Cw - lambda * w).norm();
  }
  if (out[0].lambda > out[1].lambda) std::swap(out[0], out[1]);
  return out;
}

struct GridSolve {
  Grid2D grid;
  double lam1, lam2, res1, res2;
  std::vector<double> u1, u2;
  DVec rho;
};

GridSolve solve_on_grid(const Domain& dom, const std::function<double(const Vec&)>& rho,
                        const std::function<double(const Vec&)>& V, double h) {
  GridSolve out;
  out.grid = build_grid(dom, h);
  Assembled A = assemble(out.grid, rho, V);
  const double shift_hint = A.vmin - 1.0;
  auto pairs = two_smallest(A, shift_hint);
  out.lam1 = pairs[0].lambda;
  out.lam2 = pairs[1].lambda;
  out.res1 = pairs[0].residual;
  out.res2 = pairs[1].residual;
  out.rho = A.rho;

  const int n = out.grid.interior_count();
  out.u1.resize(n);
  out.u2.resize(n);
  const double cell = h * h;
  for (int which = 0; which < 2; ++which) {
    auto& u = which == 0 ? out.u1 : out.u2;
    const DVec& w = pairs[which].w;
    double mass = 0.0;
    for (int k = 0; k < n; ++k) {
      u[k] = w(k) / std::sqrt(A.rho(k));
      mass += A.rho(k) * u[k] * u[k] * cell;
    }
    const double scale = 1.0 / std::sqrt(mass);
    for (double& t : u) t *= scale;
  }
  double total = 0.0;
  for (double t : out.u1) total += t;
  if (total < 0.0)
    for (double& t : out.u1) t = -t;

  double umin = std::numeric_limits<double>::infinity();
  for (double t : out.u1) umin = std::min(umin, t);
  if (umin <= 0.0) throw std::runtime_error("solve_weighted_2d: u1 not positive");
  return out;
}

}  // namespace

EigenResult2D solve_weighted_2d(const Domain& dom,
                                const std::function<double(const Vec&)>& rho,
                                const std::function<double(const Vec&)>& V, double h) {
  GridSolve coarse = solve_on_grid(dom, rho, V, h);
  GridSolve fine = solve_on_grid(dom, rho, V, h / 2.0);

  EigenResult2D out;
  out.grid = std::move(fine.grid);
  out.lam1_coarse = coarse.lam1;
  out.lam2_coarse = coarse.lam2;
  out.lam1_raw = fine.lam1;
  out.lam2_raw = fine.lam2;
  out.lam1 = (4.0 * fine.lam1 - coarse.lam1) / 3.0;
  out.lam2 = (4.0 * fine.lam2 - coarse.lam2) / 3.0;
  out.gap_raw = fine.lam2 - fine.lam1;
  out.gap = out.lam2 - out.lam1;
  out.u1 = std::move(fine.u1);
  out.u2 = std::move(fine.u2);
  out.residual1 = fine.res1;
  out.residual2 = fine.res2;
  out.boundary_tag = out.grid.aligned ? "aligned" : "shortley-weller";
  if (!(out.lam1_raw < out.lam2_raw))
    throw std::runtime_error("solve_weighted_2d: eigenvalue ordering violated");
  return out;
}

BicubicField EigenResult2D::interpolant(const std::vector<double>& u) const {
  std::vector<double> full(static_cast<size_t>(grid.nx) * grid.ny, 0.0);
  for (int k = 0; k < grid.interior_count(); ++k) {
    const auto [i, j] = grid.nodes[k];
    full[static_cast<size_t>(j) * grid.nx + i] = u[k];
  }
  return BicubicField(grid.x0, grid.y0, grid.h, grid.h, grid.nx, grid.ny,
                      std::move(full));
}

HyperbolicBallGap hyperbolic_ball_gap(double chart_radius, double h) {
  if (chart_radius <= 0.0 || chart_radius >= 1.0)
    throw std::invalid_argument("hyperbolic_ball_gap: need 0 < R_E < 1");
  const Domain dom =
      Domain::ball(vec2(0, 0), chart_radius, Chart::PoincareDisk);
  auto rho = [](const Vec& p) {
    const double t = 1.0 - p.squaredNorm();
    return 4.0 / (t * t);
  };
  HyperbolicBallGap out;
  out.detail = solve_weighted_2d(dom, rho, nullptr, h);
  out.lam1 = out.detail.lam1;
  out.lam2 = out.detail.lam2;
  out.gap = out.detail.gap;
  return out;
}

LogConcavityAudit log_concavity_audit(const EigenResult2D& res, const Domain& dom,
                                      const Spectrum1D& modulus, double curvature,
                                      int pairs, uint64_t seed, double tol) {
  const int dim = 2;  // the solver's substrate
  const double h = res.grid.h;
  const BicubicField u1 = res.interpolant(res.u1);
  const Cubic1D phi1 = modulus.phi1_interp();
  auto [lo, hi] = dom.bounding_box();
  Philox gen(seed, 0);

  LogConcavityAudit audit;
  audit.min_slack = std::numeric_limits<double>::infinity();
  audit.max_violation = -std::numeric_limits<double>::infinity();

  auto sample_point = [&]() {
    for (int tries = 0; tries < 1000; ++tries) {
      Vec p = vec2(lo(0) + gen.uniform() * (hi(0) - lo(0)),
                   lo(1) + gen.uniform() * (hi(1) - lo(1)));
      if (dom.boundary_distance(p) > 3.0 * h) return p;
    }
    throw std::runtime_error("log_concavity_audit: domain too thin for the margin");
  };
  auto grad_v = [&](const Vec& p) {
    const auto val = u1.eval_with_hessian(p(0), p(1));
    return vec2(val.dx / val.value, val.dy / val.value);
  };

  while (audit.pairs_checked < pairs) {
    const Vec x = sample_point(), y = sample_point();
    const double d = (x - y).norm();
    if (d < 4.0 * h) {
      ++audit.pairs_skipped;
      continue;
    }
    const Vec e = (y - x) / d;
    const double F = grad_v(y).dot(e) - grad_v(x).dot(e);
    const double psi_bar = phi1.derivative(d / 2.0) / phi1.value(d / 2.0);
    const double bound = 2.0 * psi_bar + (dim - 1) * tn_k(curvature, d / 2.0);
    ++audit.pairs_checked;
    const double slack = bound - F;
    audit.min_slack = std::min(audit.min_slack, slack);
    audit.max_violation = std::max(audit.max_violation, -slack);
    if (slack < -tol) ++audit.violations;
  }
  return audit;
}

CollapseStudy appendix_collapse(double L, const std::vector<double>& r_list, double h) {
  if (L <= 0.0 || L >= 1.0)
    throw std::invalid_argument("appendix_collapse: need 0 < L < 1");
  CollapseStudy study;
  study.L = L;
  study.ratio_limit = (16.0 - L * L) / (16.0 - 4.0 * L * L);
  auto rho_disk = [](const Vec& p) {
    const double t = 1.0 - p.squaredNorm();
    return 4.0 / (t * t);
  };
  auto rho_one = [](const Vec&) { return 1.0; };
  for (double r : r_list) {
    CollapseRow row;
    row.r = r;
    row.h_used = std::min(h, r / 6.0);
    const Domain dom = Domain::rectangle(vec2(0, 0), vec2(L, r), Chart::PoincareDisk);
    row.gap_weighted = solve_weighted_2d(dom, rho_disk, nullptr, row.h_used).gap;
    row.gap_euclidean = solve_weighted_2d(dom, rho_one, nullptr, row.h_used).gap;
    row.height_left = 2.0 * std::asinh(8.0 * r / (4.0 - L * L - 4.0 * r * r));
    row.height_neck = 2.0 * std::asinh(32.0 * r / (16.0 - L * L - 16.0 * r * r));
    row.height_ratio = row.height_left / row.height_neck;
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace gapforge
