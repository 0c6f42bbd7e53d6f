#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gapforge/geometry.hpp"

namespace gapforge {

/// Bicubic (Catmull-Rom) interpolation of samples on a uniform 2D grid, with
/// derivatives obtained by differentiating the interpolant.
class BicubicField {
 public:
  struct Value {
    double value, dx, dy, dxx, dxy, dyy;
  };

  BicubicField() = default;
  BicubicField(double x0, double y0, double hx, double hy, int nx, int ny,
               std::vector<double> samples)
      : x0_(x0), y0_(y0), hx_(hx), hy_(hy), nx_(nx), ny_(ny), v_(std::move(samples)) {
    if (nx_ < 4 || ny_ < 4 || static_cast<int>(v_.size()) != nx_ * ny_)
      throw std::invalid_argument("BicubicField: bad grid");
  }

  /// True when (x, y) lies where a full 4x4 stencil of samples exists.
  bool covers(double x, double y) const {
    const double fx = (x - x0_) / hx_, fy = (y - y0_) / hy_;
    return fx >= 1.0 && fx <= nx_ - 2.0 && fy >= 1.0 && fy <= ny_ - 2.0;
  }
  bool covers(const Vec& p) const { return covers(p(0), p(1)); }

  double operator()(double x, double y) const { return eval_with_hessian(x, y).value; }

  Value eval_with_hessian(double x, double y) const {
    if (!covers(x, y)) throw std::domain_error("BicubicField: point outside grid");
    const double fx = (x - x0_) / hx_, fy = (y - y0_) / hy_;
    int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
    ix = std::min(std::max(ix, 1), nx_ - 3);
    iy = std::min(std::max(iy, 1), ny_ - 3);
    const double tx = fx - ix, ty = fy - iy;

    // Interpolate along x for the four sample rows, then along y.
    std::array<double, 4> g, gx, gxx;
    for (int j = 0; j < 4; ++j) {
      const double* row = &v_[static_cast<size_t>(iy - 1 + j) * nx_ + (ix - 1)];
      g[j] = cr(row, tx);
      gx[j] = cr_d(row, tx);
      gxx[j] = cr_dd(row, tx);
    }
    Value out;
    out.value = cr(g.data(), ty);
    out.dx = cr(gx.data(), ty) / hx_;
    out.dy = cr_d(g.data(), ty) / hy_;
    out.dxx = cr(gxx.data(), ty) / (hx_ * hx_);
    out.dxy = cr_d(gx.data(), ty) / (hx_ * hy_);
    out.dyy = cr_dd(g.data(), ty) / (hy_ * hy_);
    return out;
  }

  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  static double cr(const double* p, double t) {
    return 0.5 * (2.0 * p[1] + (-p[0] + p[2]) * t +
                  (2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3]) * t * t +
                  (-p[0] + 3.0 * p[1] - 3.0 * p[2] + p[3]) * t * t * t);
  }
  static double cr_d(const double* p, double t) {
    return 0.5 * ((-p[0] + p[2]) +
                  2.0 * (2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3]) * t +
                  3.0 * (-p[0] + 3.0 * p[1] - 3.0 * p[2] + p[3]) * t * t);
  }
  static double cr_dd(const double* p, double t) {
    return (2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3]) +
           3.0 * (-p[0] + 3.0 * p[1] - 3.0 * p[2] + p[3]) * t;
  }

  double x0_ = 0, y0_ = 0, hx_ = 1, hy_ = 1;
  int nx_ = 0, ny_ = 0;
  std::vector<double> v_;
};

/// Local cubic (4-point Lagrange) interpolation of samples on a uniform 1D grid,
/// with first derivative from the interpolant.
class Cubic1D {
 public:
  Cubic1D() = default;
  Cubic1D(double s0, double h, std::vector<double> samples)
      : s0_(s0), h_(h), v_(std::move(samples)) {
    if (v_.size() < 4) throw std::invalid_argument("Cubic1D: need >= 4 samples");
  }

  double min_arg() const { return s0_; }
  double max_arg() const { return s0_ + h_ * (static_cast<double>(v_.size()) - 1.0); }

  double value(double s) const { return eval(s).first; }
  double derivative(double s) const { return eval(s).second; }

 private:
  std::pair<double, double> eval(double s) const {
    const int n = static_cast<int>(v_.size());
    double f = (s - s0_) / h_;
    if (f < 0.0 || f > n - 1.0) throw std::domain_error("Cubic1D: out of range");
    int i = static_cast<int>(f);
    i = std::min(std::max(i, 1), n - 3);
    const double t = f - i;
    const double* p = &v_[i - 1];
    const double val = 0.5 * (2.0 * p[1] + (-p[0] + p[2]) * t +
                              (2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3]) * t * t +
                              (-p[0] + 3.0 * p[1] - 3.0 * p[2] + p[3]) * t * t * t);
    const double der = 0.5 *
                       ((-p[0] + p[2]) +
                        2.0 * (2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3]) * t +
                        3.0 * (-p[0] + 3.0 * p[1] - 3.0 * p[2] + p[3]) * t * t) /
                       h_;
    return {val, der};
  }

  double s0_ = 0, h_ = 1;
  std::vector<double> v_;
};

}  // namespace gapforge
