#include "gapforge/twopoint.hpp"

#include <cmath>

namespace gapforge {

Vec metric_gradient(const SpaceForm& space, const ScalarField& v, const Vec& p) {
  const double c = space.chart_factor(p);
  return Vec(v.grad(p) / (c * c));
}

double field_w(const SpaceForm& space, const ScalarField& v, const Vec& p) {
  const double c = space.chart_factor(p);
  const Vec g = v.grad(p);
  double lap = v.hess(p).trace();
  if (space.chart == Chart::SphereStereographic) {
    const double R2 = 1.0 / space.curvature;
    const Vec grad_logc = -2.0 / (R2 + p.squaredNorm()) * p;
    lap = (lap + (space.dim - 2) * grad_logc.dot(g)) / (c * c);
  }
  return lap + g.squaredNorm() / (c * c);
}

double f_form(const SpaceForm& space, const std::function<Vec(const Vec&)>& X,
              const Vec& x, const Vec& y) {
  const GeodesicFrame f = geodesic_frame(space, x, y);
  return f.metric_dot(y, X(y), f.tangent_at_y()) -
         f.metric_dot(x, X(x), f.tangent_at_x());
}

TwoPointForms two_point_forms(const TwoPointContext& ctx, const Vec& x, const Vec& y,
                              const std::function<double(const Vec&)>& f) {
  const GeodesicFrame fr = geodesic_frame(ctx.space, x, y);
  TwoPointForms out;
  out.dist = fr.dist;
  // <grad v, t>_g = (chart grad v) . t for a chart tangent t
  out.Z = ctx.v.grad(y).dot(fr.tangent_at_y()) - ctx.v.grad(x).dot(fr.tangent_at_x());
  out.C_f = f ? (f(x) + f(y)) : 0.0;
  return out;
}

namespace {

double z_of_pair(const TwoPointContext& ctx, const Vec& x, const Vec& y) {
  const GeodesicFrame fr = geodesic_frame(ctx.space, x, y);
  return ctx.v.grad(y).dot(fr.tangent_at_y()) - ctx.v.grad(x).dot(fr.tangent_at_x());
}

}  // namespace

IdentityResidual hessian_identity_residual(const TwoPointContext& ctx, const Vec& x,
                                           const Vec& y, double h) {
  const SpaceForm& sp = ctx.space;
  const int n = sp.dim;
  const GeodesicFrame fr = geodesic_frame(sp, x, y);
  const double d = fr.dist;
  if (h > 0.05 * d)
    throw std::domain_error("hessian_identity_residual: FD step too large for d");
  const double K = sp.curvature;
  const double tn_half = tn_k(K, d / 2.0);
  const double sn_full = sn_k(K, d);

  auto z_moved = [&](const Vec& dx, const Vec& dy) {
    return z_of_pair(ctx, sp.exp_map(x, dx), sp.exp_map(y, dy));
  };

  const double Z0 = z_of_pair(ctx, x, y);

  // second differences along the endpoint-geodesic variations E_i
  double lhs = 0.0;
  for (int i = 0; i < n; ++i) {
    const double sy = (i == n - 1) ? -1.0 : 1.0;  // E_N = e_N (+) -e_N
    const Vec ex = fr.frame_x.col(i), ey = fr.frame_y.col(i);
    const double zp = z_moved(Vec(h * ex), Vec(sy * h * ey));
    const double zm = z_moved(Vec(-h * ex), Vec(-sy * h * ey));
    lhs += (zp - 2.0 * Z0 + zm) / (h * h);
  }

  // grad_{E_N} Z
  const Vec eN_x = fr.frame_x.col(n - 1), eN_y = fr.frame_y.col(n - 1);
  const double dZ_EN = (z_moved(Vec(h * eN_x), Vec(-h * eN_y)) -
                        z_moved(Vec(-h * eN_x), Vec(h * eN_y))) /
                       (2.0 * h);

  // grad_{grad v(x) (+) grad v(y)} Z
  const Vec gx = metric_gradient(sp, ctx.v, x), gy = metric_gradient(sp, ctx.v, y);
  const double dZ_grad =
      (z_moved(Vec(h * gx), Vec(h * gy)) - z_moved(Vec(-h * gx), Vec(-h * gy))) /
      (2.0 * h);

  // W = Lap v + |grad v|^2 and its F-form by central differences along gamma'
  auto W = [&](const Vec& p) { return field_w(sp, ctx.v, p); };
  const Vec tx = fr.tangent_at_x(), ty = fr.tangent_at_y();
  const double dW_y =
      (W(sp.exp_map(y, Vec(h * ty))) - W(sp.exp_map(y, Vec(-h * ty)))) / (2.0 * h);
  const double dW_x =
      (W(sp.exp_map(x, Vec(h * tx))) - W(sp.exp_map(x, Vec(-h * tx)))) / (2.0 * h);
  const double F_gradW = dW_y - dW_x;
  const double C_W = W(x) + W(y);

  // frame components of grad v
  const double vN_x = ctx.v.grad(x).dot(eN_x), vN_y = ctx.v.grad(y).dot(eN_y);
  double transverse = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    const double vi_x = ctx.v.grad(x).dot(fr.frame_x.col(i));
    const double vi_y = ctx.v.grad(y).dot(fr.frame_y.col(i));
    transverse += (vi_y - vi_x) * (vi_y - vi_x);
  }

  IdentityResidual out;
  out.lhs = lhs;
  out.rhs = -2.0 * tn_half * dZ_EN - 2.0 * dZ_grad +
            (n - 1) * (K - tn_half * tn_half) * Z0 - 2.0 * tn_half * C_W + F_gradW +
            2.0 * tn_half * (vN_x * vN_x + vN_y * vN_y) +
            2.0 / sn_full * transverse;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace gapforge
