#include "gapforge/geometry.hpp"

#include <cmath>

namespace gapforge {

double cs_k(double curvature, double s) {
  if (curvature < 0.0) throw std::domain_error("cs_k: curvature must be >= 0");
  if (curvature == 0.0) return 1.0;
  return std::cos(std::sqrt(curvature) * s);
}

double sn_k(double curvature, double s) {
  if (curvature < 0.0) throw std::domain_error("sn_k: curvature must be >= 0");
  if (curvature == 0.0) return s;
  const double rk = std::sqrt(curvature);
  return std::sin(rk * s) / rk;
}

double tn_k(double curvature, double s) {
  if (curvature < 0.0) throw std::domain_error("tn_k: curvature must be >= 0");
  if (curvature == 0.0) return 0.0;
  const double rk = std::sqrt(curvature);
  if (std::abs(rk * s) >= M_PI / 2.0)
    throw std::domain_error("tn_k: |s| at or beyond pi/(2 sqrt K)");
  return rk * std::tan(rk * s);
}

TrigK trig_k(double curvature, double s) {
  return {cs_k(curvature, s), sn_k(curvature, s), tn_k(curvature, s)};
}

void SpaceForm::validate() const {
  if (dim < 2) throw std::invalid_argument("SpaceForm: dimension must be >= 2");
  if (curvature < 0.0) throw std::invalid_argument("SpaceForm: curvature must be >= 0");
  if (chart == Chart::SphereStereographic && curvature == 0.0)
    throw std::invalid_argument("SpaceForm: sphere chart needs K > 0");
}

bool SpaceForm::in_chart(const Vec& p) const {
  if (chart == Chart::PoincareDisk) return p.squaredNorm() < 1.0;
  return true;  // stereographic chart covers the sphere minus one pole
}

double SpaceForm::chart_factor(const Vec& p) const {
  if (chart != Chart::SphereStereographic) return 1.0;
  const double R2 = 1.0 / curvature;
  return 2.0 * R2 / (R2 + p.squaredNorm());
}

double SpaceForm::distance(const Vec& x, const Vec& y) const {
  if (chart != Chart::SphereStereographic) return (x - y).norm();
  const double R = sphere_radius();
  const Vec X = sphere_embed(*this, x), Y = sphere_embed(*this, y);
  const double c = std::clamp(X.dot(Y) / (R * R), -1.0, 1.0);
  return R * std::acos(c);
}

Vec SpaceForm::exp_map(const Vec& p, const Vec& v) const {
  if (chart != Chart::SphereStereographic) return p + v;
  const double R = sphere_radius();
  const Vec W = sphere_push_tangent(*this, p, v);
  const double t = W.norm();
  if (t == 0.0) return p;
  const Vec X = sphere_embed(*this, p);
  const Vec Xp = std::cos(t / R) * X + (R * std::sin(t / R) / t) * W;
  return sphere_unembed(*this, Xp);
}

double poincare_distance(const Vec& x, const Vec& y) {
  const double nx = x.squaredNorm(), ny = y.squaredNorm();
  if (nx >= 1.0 || ny >= 1.0)
    throw std::domain_error("poincare_distance: point outside the unit disk");
  const double q = 2.0 * (x - y).squaredNorm() / ((1.0 - nx) * (1.0 - ny));
  return std::acosh(1.0 + q);
}

Vec sphere_embed(const SpaceForm& s, const Vec& x) {
  const double R = s.sphere_radius(), R2 = R * R;
  const double q = R2 + x.squaredNorm();
  Vec X(s.dim + 1);
  X.head(s.dim) = (2.0 * R2 / q) * x;
  X(s.dim) = R * (x.squaredNorm() - R2) / q;
  return X;
}

Vec sphere_unembed(const SpaceForm& s, const Vec& X) {
  const double R = s.sphere_radius();
  const double w = X(s.dim) / R;
  if (w > 1.0 - 1e-14)
    throw std::domain_error("sphere_unembed: point at the chart pole");
  const double r2 = R * R * (1.0 + w) / (1.0 - w);
  return X.head(s.dim) * ((R * R + r2) / (2.0 * R * R));
}

Vec sphere_push_tangent(const SpaceForm& s, const Vec& x, const Vec& u) {
  const double R = s.sphere_radius(), R2 = R * R;
  const double q = R2 + x.squaredNorm();
  const double xu = x.dot(u);
  Vec W(s.dim + 1);
  W.head(s.dim) = (2.0 * R2 / q) * u - (4.0 * R2 * xu / (q * q)) * x;
  W(s.dim) = 4.0 * R2 * R * xu / (q * q);
  return W;
}

Vec sphere_pull_tangent(const SpaceForm& s, const Vec& x, const Vec& W) {
  // dsigma is conformal, so the inverse is dsigma^T / c^2.
  const double c = s.chart_factor(x);
  Vec u(s.dim);
  for (int i = 0; i < s.dim; ++i) {
    Vec ei = Vec::Zero(s.dim);
    ei(i) = 1.0;
    u(i) = sphere_push_tangent(s, x, ei).dot(W) / (c * c);
  }
  return u;
}

Mat orthonormal_basis_with_last(const Vec& unit_last) {
  const int n = static_cast<int>(unit_last.size());
  const double sgn = unit_last(n - 1) >= 0.0 ? 1.0 : -1.0;
  Vec u = unit_last;
  u(n - 1) += sgn;  // Householder direction, stable for either sign
  const double uu = u.squaredNorm();
  Mat B(n, n);
  for (int i = 0; i < n; ++i) {
    Vec a = Vec::Zero(n);
    a(i) = 1.0;
    Vec h = a - (2.0 * u(i) / uu) * u;  // H a_i
    B.col(i) = (i == n - 1) ? Vec(-sgn * h) : h;
  }
  B.col(n - 1) = unit_last;  // exact, avoids rounding in the defining column
  return B;
}

namespace {

GeodesicFrame flat_frame(const SpaceForm& space, const Vec& x, const Vec& y) {
  GeodesicFrame f;
  f.space = space;
  f.x = x;
  f.y = y;
  f.dist = (y - x).norm();
  const Vec e_last = (y - x) / f.dist;
  f.frame_x = orthonormal_basis_with_last(e_last);
  f.frame_y = f.frame_x;  // parallel transport is trivial on the flat base
  return f;
}

GeodesicFrame sphere_frame(const SpaceForm& space, const Vec& x, const Vec& y) {
  const int n = space.dim;
  const double R = space.sphere_radius();
  const Vec X = sphere_embed(space, x), Y = sphere_embed(space, y);
  const double ct = std::clamp(X.dot(Y) / (R * R), -1.0, 1.0);
  const double theta = std::acos(ct);
  if (theta > M_PI - 1e-8)
    throw std::domain_error("geodesic_frame: pair at or near the cut locus");

  GeodesicFrame f;
  f.space = space;
  f.x = x;
  f.y = y;
  f.dist = R * theta;

  const Vec Xh = X / R, Yh = Y / R;
  const Vec Tx = (Yh - ct * Xh) / std::sin(theta);        // unit tangent at X toward Y
  const Vec Ty = -std::sin(theta) * Xh + ct * Tx;         // gamma' at Y

  // Complete {Xh, Tx} to an orthonormal basis of R^{n+1}; trailing columns are
  // normal to the great-circle plane and transport unchanged.
  Eigen::MatrixXd M(n + 1, 2);
  M.col(0) = Xh;
  M.col(1) = Tx;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ();

  f.frame_x.resize(n, n);
  f.frame_y.resize(n, n);
  for (int i = 0; i < n - 1; ++i) {
    const Vec Wi = Q.col(i + 2);
    f.frame_x.col(i) = sphere_pull_tangent(space, x, Wi);
    f.frame_y.col(i) = sphere_pull_tangent(space, y, Wi);
  }
  f.frame_x.col(n - 1) = sphere_pull_tangent(space, x, Tx);
  f.frame_y.col(n - 1) = sphere_pull_tangent(space, y, Ty);
  return f;
}

}  // namespace

GeodesicFrame geodesic_frame(const SpaceForm& space, const Vec& x, const Vec& y) {
  space.validate();
  if (!space.in_chart(x) || !space.in_chart(y))
    throw std::domain_error("geodesic_frame: point outside the chart");
  if ((x - y).norm() < 1e-14)
    throw std::domain_error("geodesic_frame: coincident points");
  if (space.chart == Chart::SphereStereographic) return sphere_frame(space, x, y);
  return flat_frame(space, x, y);
}

double GeodesicFrame::metric_dot(const Vec& p, const Vec& u, const Vec& v) const {
  const double c = space.chart_factor(p);
  return c * c * u.dot(v);
}

Vec GeodesicFrame::mirror(const Vec& w_at_x) const {
  const int n = space.dim;
  Vec out = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    const double ci = metric_dot(x, w_at_x, frame_x.col(i));
    out += (i == n - 1 ? -ci : ci) * frame_y.col(i);
  }
  return out;
}

Mat GeodesicFrame::gram(bool at_y) const {
  const int n = space.dim;
  const Mat& F = at_y ? frame_y : frame_x;
  const Vec& p = at_y ? y : x;
  Mat G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = metric_dot(p, F.col(i), F.col(j));
  return G;
}

}  // namespace gapforge
