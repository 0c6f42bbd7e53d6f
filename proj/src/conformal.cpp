#include "gapforge/conformal.hpp"

#include <cmath>

#include "gapforge/interp.hpp"

namespace gapforge {

ConformalFactorSpec ConformalFactorSpec::zero(int n) {
  ConformalFactorSpec cf;
  cf.kind = ConformalKind::Zero;
  cf.base = SpaceForm::euclidean(n);
  return cf;
}

ConformalFactorSpec ConformalFactorSpec::poincare_disk(int n) {
  ConformalFactorSpec cf;
  cf.kind = ConformalKind::PoincareDisk;
  cf.base = SpaceForm::poincare_disk(n);
  return cf;
}

ConformalFactorSpec ConformalFactorSpec::sphere_stereo(int n, double R) {
  if (R <= 0.0) throw std::invalid_argument("sphere_stereo: R must be positive");
  ConformalFactorSpec cf;
  cf.kind = ConformalKind::SphereStereoRadiusR;
  cf.sphere_radius = R;
  cf.base = SpaceForm::sphere(n, 1.0 / (R * R));
  return cf;
}

ConformalFactorSpec ConformalFactorSpec::inverse_square(int n) {
  ConformalFactorSpec cf;
  cf.kind = ConformalKind::InverseSquareRadial;
  cf.base = SpaceForm::euclidean(n);
  return cf;
}

ConformalFactorSpec ConformalFactorSpec::user_grid(std::shared_ptr<BicubicField> phi) {
  ConformalFactorSpec cf;
  cf.kind = ConformalKind::UserSampledGrid;
  cf.base = SpaceForm::euclidean(2);
  cf.sampled = std::move(phi);
  return cf;
}

bool ConformalFactorSpec::in_chart(const Vec& p) const {
  switch (kind) {
    case ConformalKind::PoincareDisk:
    case ConformalKind::SphereStereoRadiusR:
      return p.squaredNorm() < 1.0;
    case ConformalKind::InverseSquareRadial:
      return p.squaredNorm() > 0.0;
    case ConformalKind::UserSampledGrid:
      return sampled && sampled->covers(p);
    default:
      return true;
  }
}

ConformalEval ConformalFactorSpec::eval(const Vec& p) const {
  const int n = static_cast<int>(p.size());
  const double r2 = p.squaredNorm();
  ConformalEval e;
  e.grad = Vec::Zero(n);
  e.hess = Mat::Zero(n, n);
  const Mat I = Mat::Identity(n, n);
  switch (kind) {
    case ConformalKind::Zero:
      break;
    case ConformalKind::PoincareDisk: {
      if (r2 >= 1.0) throw std::domain_error("conformal factor singular at |x| >= 1");
      const double a = 1.0 / (1.0 - r2);
      e.phi = std::log(2.0 * a);
      e.grad = 2.0 * a * p;
      e.hess = 2.0 * a * I + 4.0 * a * a * p * p.transpose();
      break;
    }
    case ConformalKind::SphereStereoRadiusR: {
      if (r2 >= 1.0) throw std::domain_error("conformal factor singular at |x| >= 1");
      const double R2 = sphere_radius * sphere_radius;
      const double a = 1.0 / (R2 + r2), b = 1.0 / (1.0 - r2);
      e.phi = std::log(R2 + r2) - std::log(1.0 - r2) - 2.0 * std::log(sphere_radius);
      e.grad = 2.0 * (a + b) * p;
      e.hess = 2.0 * (a + b) * I + 4.0 * (b * b - a * a) * p * p.transpose();
      break;
    }
    case ConformalKind::InverseSquareRadial: {
      if (r2 == 0.0) throw std::domain_error("conformal factor singular at the puncture");
      e.phi = -0.5 * std::log(r2);
      e.grad = -p / r2;
      e.hess = -I / r2 + 2.0 * p * p.transpose() / (r2 * r2);
      break;
    }
    case ConformalKind::UserSampledGrid: {
      if (!sampled || !sampled->covers(p))
        throw std::domain_error("sampled conformal factor: point outside the grid");
      auto v = sampled->eval_with_hessian(p(0), p(1));
      e.phi = v.value;
      e.grad = vec2(v.dx, v.dy);
      e.hess.resize(2, 2);
      e.hess << v.dxx, v.dxy, v.dxy, v.dyy;
      break;
    }
  }
  return e;
}

Mat ConformalFactorSpec::hess_rho_chart(const Vec& p) const {
  const ConformalEval e = eval(p);
  const double rho = std::exp(2.0 * e.phi);
  return rho * (2.0 * e.hess + 4.0 * e.grad * e.grad.transpose());
}

double base_scalar_curvature(const SpaceForm& base) {
  if (base.chart == Chart::SphereStereographic)
    return base.dim * (base.dim - 1) * base.curvature;
  return 0.0;
}

BaseDerivatives base_derivatives(const ConformalFactorSpec& cf, const Vec& p) {
  const ConformalEval e = cf.eval(p);
  if (cf.base.chart != Chart::SphereStereographic)
    return {e.grad.squaredNorm(), e.hess.trace()};
  // Chart of the sphere is itself conformal, c^2 g_E with c = 2R^2/(R^2+r^2):
  // Lap_S phi = c^-2 (Lap_E phi + (N-2) grad(log c) . grad phi).
  const int n = cf.base.dim;
  const double R2 = 1.0 / cf.base.curvature;
  const double c = cf.base.chart_factor(p);
  const Vec grad_logc = -2.0 / (R2 + p.squaredNorm()) * p;
  const double lap = (e.hess.trace() + (n - 2) * grad_logc.dot(e.grad)) / (c * c);
  return {e.grad.squaredNorm() / (c * c), lap};
}

SchrodingerData schrodinger_data(const ConformalFactorSpec& cf, int dim, const Vec& p) {
  const auto d = base_derivatives(cf, p);
  const double nm2 = dim - 2;
  return {std::exp(2.0 * cf.eval(p).phi),
          nm2 * nm2 / 4.0 * d.grad_norm2 + nm2 / 2.0 * d.laplacian};
}

double scalar_curvature(const ConformalFactorSpec& cf, int dim, const SpaceForm& base,
                        const Vec& p) {
  const auto d = base_derivatives(cf, p);
  const double Rg = base_scalar_curvature(base);
  const double phi = cf.eval(p).phi;
  return std::exp(-2.0 * phi) *
         (Rg - 2.0 * (dim - 1) * d.laplacian - (dim - 1) * (dim - 2) * d.grad_norm2);
}

Mat conformal_hessian(const ConformalFactorSpec& cf, const ScalarField& F, const Vec& p) {
  const int n = static_cast<int>(p.size());
  ConformalEval e = cf.eval(p);
  Vec grad_tot = e.grad;
  if (cf.base.chart == Chart::SphereStereographic) {
    // Compose with the sphere chart factor: the change from g_E is e^{2(phi+log c)}.
    const double R2 = 1.0 / cf.base.curvature;
    grad_tot += Vec(-2.0 / (R2 + p.squaredNorm()) * p);
  }
  const Vec gF = F.grad(p);
  Mat H = F.hess(p);
  H -= grad_tot * gF.transpose() + gF * grad_tot.transpose();
  H += grad_tot.dot(gF) * Mat::Identity(n, n);
  return H;
}

double max_hessian_eigenvalue_rho(const ConformalFactorSpec& cf, const Vec& p) {
  const int n = static_cast<int>(p.size());
  ScalarField rho_field{
      [&](const Vec& q) { return cf.rho(q); },
      [&](const Vec& q) {
        const ConformalEval e = cf.eval(q);
        return Vec(2.0 * std::exp(2.0 * e.phi) * e.grad);
      },
      [&](const Vec& q) { return cf.hess_rho_chart(q); }};
  Mat H(n, n);
  double metric_scale = 1.0;
  if (cf.base.chart == Chart::SphereStereographic) {
    // Hessian w.r.t. the sphere metric: correct the chart Hessian by the chart
    // factor, then raise the index with g_S = c^2 g_E.
    ConformalFactorSpec chart_only = cf;  // reuse the composition in conformal_hessian
    chart_only.kind = ConformalKind::Zero;
    H = conformal_hessian(chart_only, rho_field, p);
    const double c = cf.base.chart_factor(p);
    metric_scale = c * c;
  } else {
    H = cf.hess_rho_chart(p);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (H + H.transpose()));
  return es.eigenvalues().maxCoeff() / metric_scale;
}

}  // namespace gapforge
