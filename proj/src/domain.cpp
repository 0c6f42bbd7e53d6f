#include "gapforge/domain.hpp"

#include <algorithm>
#include <cmath>

namespace gapforge {

Domain Domain::rectangle(const Vec& center, const Vec& half_widths, Chart chart) {
  Domain d;
  d.kind = DomainKind::AxisRectangle;
  d.chart = chart;
  d.center = center;
  d.half_widths = half_widths;
  d.validate();
  return d;
}

Domain Domain::ball(const Vec& center, double radius, Chart chart) {
  Domain d;
  d.kind = DomainKind::Ball;
  d.chart = chart;
  d.center = center;
  d.radius = radius;
  d.validate();
  return d;
}

Domain Domain::polygon(std::vector<Vec> ccw_vertices, Chart chart) {
  Domain d;
  d.kind = DomainKind::ConvexPolygon;
  d.chart = chart;
  d.vertices = std::move(ccw_vertices);
  d.validate();
  return d;
}

int Domain::dim() const {
  switch (kind) {
    case DomainKind::AxisRectangle: return static_cast<int>(center.size());
    case DomainKind::Ball: return static_cast<int>(center.size());
    case DomainKind::ConvexPolygon: return 2;
  }
  return 2;
}

void Domain::validate() const {
  auto inside_chart = [&](const Vec& p) {
    return chart != Chart::PoincareDisk || p.squaredNorm() < 1.0;
  };
  switch (kind) {
    case DomainKind::AxisRectangle: {
      if (half_widths.size() != center.size() || (half_widths.array() <= 0).any())
        throw std::invalid_argument("rectangle: bad half-widths");
      // chart check on the farthest corner
      Vec far = center;
      for (int i = 0; i < center.size(); ++i)
        far(i) += (center(i) >= 0 ? half_widths(i) : -half_widths(i));
      if (!inside_chart(far))
        throw std::invalid_argument("rectangle: not strictly inside the disk chart");
      break;
    }
    case DomainKind::Ball: {
      if (radius <= 0.0) throw std::invalid_argument("ball: radius must be positive");
      if (chart == Chart::PoincareDisk && center.norm() + radius >= 1.0)
        throw std::invalid_argument("ball: not strictly inside the disk chart");
      break;
    }
    case DomainKind::ConvexPolygon: {
      const size_t m = vertices.size();
      if (m < 3) throw std::invalid_argument("polygon: need >= 3 vertices");
      for (size_t i = 0; i < m; ++i) {
        const Vec &a = vertices[i], &b = vertices[(i + 1) % m], &c = vertices[(i + 2) % m];
        const double cross =
            (b(0) - a(0)) * (c(1) - b(1)) - (b(1) - a(1)) * (c(0) - b(0));
        if (cross <= 0.0)
          throw std::invalid_argument("polygon: vertices must be strictly convex ccw");
        if (!inside_chart(a))
          throw std::invalid_argument("polygon: vertex outside the disk chart");
      }
      break;
    }
  }
}

bool Domain::contains(const Vec& p) const {
  switch (kind) {
    case DomainKind::AxisRectangle:
      return ((p - center).array().abs() <= half_widths.array()).all();
    case DomainKind::Ball:
      return (p - center).norm() <= radius;
    case DomainKind::ConvexPolygon: {
      const size_t m = vertices.size();
      for (size_t i = 0; i < m; ++i) {
        const Vec &a = vertices[i], &b = vertices[(i + 1) % m];
        if ((b(0) - a(0)) * (p(1) - a(1)) - (b(1) - a(1)) * (p(0) - a(0)) < 0.0)
          return false;
      }
      return true;
    }
  }
  return false;
}

double Domain::boundary_distance(const Vec& p) const {
  switch (kind) {
    case DomainKind::AxisRectangle: {
      double d = std::numeric_limits<double>::infinity();
      for (int i = 0; i < center.size(); ++i)
        d = std::min(d, half_widths(i) - std::abs(p(i) - center(i)));
      return std::max(0.0, d);
    }
    case DomainKind::Ball:
      return std::max(0.0, radius - (p - center).norm());
    case DomainKind::ConvexPolygon: {
      double d = std::numeric_limits<double>::infinity();
      const size_t m = vertices.size();
      for (size_t i = 0; i < m; ++i) {
        const Vec &a = vertices[i], &b = vertices[(i + 1) % m];
        const Vec e = b - a;
        const double dist =
            (e(0) * (p(1) - a(1)) - e(1) * (p(0) - a(0))) / e.norm();
        d = std::min(d, dist);
      }
      return std::max(0.0, d);
    }
  }
  return 0.0;
}

std::pair<Vec, Vec> Domain::bounding_box() const {
  switch (kind) {
    case DomainKind::AxisRectangle:
      return {Vec(center - half_widths), Vec(center + half_widths)};
    case DomainKind::Ball:
      return {Vec(center.array() - radius), Vec(center.array() + radius)};
    case DomainKind::ConvexPolygon: {
      Vec lo = vertices[0], hi = vertices[0];
      for (const auto& v : vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
      }
      return {lo, hi};
    }
  }
  return {Vec(), Vec()};
}

double Domain::inradius() const {
  switch (kind) {
    case DomainKind::AxisRectangle:
      return half_widths.minCoeff();
    case DomainKind::Ball:
      return radius;
    case DomainKind::ConvexPolygon: {
      // coordinate-descent refinement of max_p boundary_distance(p)
      auto [lo, hi] = bounding_box();
      Vec best = 0.5 * (lo + hi);
      double r = boundary_distance(best);
      double step = 0.25 * (hi - lo).norm();
      while (step > 1e-10) {
        bool improved = false;
        for (int i = 0; i < 2; ++i)
          for (double s : {-step, step}) {
            Vec q = best;
            q(i) += s;
            const double rq = boundary_distance(q);
            if (rq > r) {
              r = rq;
              best = q;
              improved = true;
            }
          }
        if (!improved) step *= 0.5;
      }
      return r;
    }
  }
  return 0.0;
}

std::vector<Vec> Domain::boundary_samples(int count) const {
  if (dim() != 2)
    throw std::invalid_argument("boundary_samples: 2D domains only");
  std::vector<Vec> out;
  out.reserve(count);
  switch (kind) {
    case DomainKind::AxisRectangle: {
      const double w = 2.0 * half_widths(0), h = 2.0 * half_widths(1);
      const double per = 2.0 * (w + h);
      for (int i = 0; i < count; ++i) {
        double t = per * i / count;
        Vec p = center;
        if (t < w) {
          p(0) += -half_widths(0) + t;
          p(1) -= half_widths(1);
        } else if ((t -= w) < h) {
          p(0) += half_widths(0);
          p(1) += -half_widths(1) + t;
        } else if ((t -= h) < w) {
          p(0) += half_widths(0) - t;
          p(1) += half_widths(1);
        } else {
          t -= w;
          p(0) -= half_widths(0);
          p(1) += half_widths(1) - t;
        }
        out.push_back(p);
      }
      break;
    }
    case DomainKind::Ball:
      for (int i = 0; i < count; ++i) {
        const double a = 2.0 * M_PI * i / count;
        out.push_back(Vec(center + radius * vec2(std::cos(a), std::sin(a))));
      }
      break;
    case DomainKind::ConvexPolygon: {
      const size_t m = vertices.size();
      double per = 0.0;
      for (size_t i = 0; i < m; ++i) per += (vertices[(i + 1) % m] - vertices[i]).norm();
      size_t edge = 0;
      double edge_start = 0.0;
      for (int i = 0; i < count; ++i) {
        double t = per * i / count;
        while (edge < m) {
          const double len = (vertices[(edge + 1) % m] - vertices[edge]).norm();
          if (t <= edge_start + len || edge == m - 1) break;
          edge_start += len;
          ++edge;
        }
        const Vec &a = vertices[edge], &b = vertices[(edge + 1) % m];
        const double len = (b - a).norm();
        out.push_back(Vec(a + (b - a) * std::clamp((t - edge_start) / len, 0.0, 1.0)));
      }
      break;
    }
  }
  return out;
}

namespace {

// Golden-section refinement of f over [a, b].
template <typename F>
double golden_max(F f, double a, double b, int iters = 60) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

DomainMetrics diameters(const Domain& dom, int samples) {
  dom.validate();
  DomainMetrics out;

  if (dom.dim() != 2) {
    // rectangles/balls have closed-form Euclidean diameters in any dimension
    if (dom.kind == DomainKind::AxisRectangle)
      out.diameter_euclidean = 2.0 * dom.half_widths.norm();
    else if (dom.kind == DomainKind::Ball)
      out.diameter_euclidean = 2.0 * dom.radius;
    return out;
  }

  const auto pts = dom.boundary_samples(samples);
  const int n = static_cast<int>(pts.size());
  auto point_at = [&](double t) {  // periodic linear interpolation along samples
    t -= std::floor(t / n) * n;
    const int i = static_cast<int>(t) % n;
    const double f = t - std::floor(t);
    return Vec(pts[i] * (1.0 - f) + pts[(i + 1) % n] * f);
  };

  int bi = 0, bj = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; j += std::max(1, n / 512)) {
      const double d = (pts[i] - pts[j]).norm();
      if (d > best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  out.diameter_euclidean = golden_max(
      [&](double t) {
        return golden_max(
            [&](double u) { return (point_at(t) - point_at(u)).norm(); }, bj - 2.0,
            bj + 2.0, 40);
      },
      bi - 2.0, bi + 2.0, 40);
  out.diameter_euclidean = std::max(out.diameter_euclidean, best);

  if (dom.chart == Chart::PoincareDisk) {
    best = -1.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; j += std::max(1, n / 512)) {
        const double d = poincare_distance(pts[i], pts[j]);
        if (d > best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    double refined = golden_max(
        [&](double t) {
          return golden_max(
              [&](double u) { return poincare_distance(point_at(t), point_at(u)); },
              bj - 2.0, bj + 2.0, 40);
        },
        bi - 2.0, bi + 2.0, 40);
    out.diameter_hyperbolic = std::max(refined, best);
  }
  return out;
}

double inradius_from_diameter(double diam_hyperbolic) {
  if (diam_hyperbolic <= 0.0)
    throw std::domain_error("inradius_from_diameter: diameter must be positive");
  const double t = -1.0 + std::sqrt(diam_hyperbolic / 2.0 + 1.0);
  return t * t;
}

CircumradiusBound circumradius_re(int dim, double diam_hyperbolic) {
  if (dim < 2 || diam_hyperbolic <= 0.0)
    throw std::domain_error("circumradius_re: need N >= 2 and D_H > 0");
  const double factor = std::sqrt(2.0 * dim / (dim + 1.0));
  const double RH = std::asinh(factor * std::sinh(diam_hyperbolic));
  CircumradiusBound out;
  out.R_E = std::tanh(0.5 * RH);
  out.chain_lhs = 1.0 / (1.0 - out.R_E * out.R_E);
  out.chain_rhs = 1.0 + factor * factor * std::pow(std::sinh(diam_hyperbolic), 2);
  out.chain_holds = out.chain_lhs <= out.chain_rhs * (1.0 + 1e-12);
  return out;
}

HoroconvexityResult horoconvexity_check(const BoundaryCurve& curve, double tol) {
  const size_t m = curve.position.size();
  if (m < 3 || curve.d1.size() != m || curve.d2.size() != m)
    throw std::invalid_argument("horoconvexity_check: need positions with d1, d2");
  double kmin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < m; ++i) {
    const Vec &p = curve.position[i], &v = curve.d1[i], &a = curve.d2[i];
    const double speed = v.norm();
    if (speed == 0.0)
      throw std::invalid_argument("horoconvexity_check: stationary boundary point");
    const double kappa_e = (v(0) * a(1) - v(1) * a(0)) / (speed * speed * speed);
    const Vec nu_out = vec2(v(1), -v(0)) / speed;  // ccw curve, domain on the left
    const double r2 = p.squaredNorm();
    if (r2 >= 1.0)
      throw std::domain_error("horoconvexity_check: boundary outside the disk");
    const Vec grad_phi = 2.0 / (1.0 - r2) * p;
    const double kappa_g = (1.0 - r2) / 2.0 * (kappa_e + grad_phi.dot(nu_out));
    kmin = std::min(kmin, kappa_g);
  }
  return {kmin >= 1.0 - tol, kmin};
}

BoundaryCurve ball_boundary_curve(const Vec& center, double radius, int samples) {
  BoundaryCurve c;
  c.position.reserve(samples);
  c.d1.reserve(samples);
  c.d2.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double a = 2.0 * M_PI * i / samples;
    c.position.push_back(Vec(center + radius * vec2(std::cos(a), std::sin(a))));
    c.d1.push_back(Vec(radius * vec2(-std::sin(a), std::cos(a))));
    c.d2.push_back(Vec(radius * vec2(-std::cos(a), -std::sin(a))));
  }
  return c;
}

}  // namespace gapforge
