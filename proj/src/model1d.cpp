#include "gapforge/model1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gapforge {

double Profile1D::operator()(double s, double half_length) const {
  s = std::abs(s);
  switch (kind) {
    case Kind::Constant: return c0;
    case Kind::Quadratic: return 0.5 * sigma * s * s + c0;
    case Kind::Sampled: {
      const int m = static_cast<int>(samples.size());
      if (m == 1) return samples[0];
      const double h = half_length / (m - 1);
      Cubic1D interp(0.0, h, samples);
      return interp.value(std::min(s, half_length));
    }
  }
  return c0;
}

double Profile1D::derivative(double s, double half_length) const {
  const double sign = s < 0.0 ? -1.0 : 1.0;
  s = std::abs(s);
  switch (kind) {
    case Kind::Constant: return 0.0;
    case Kind::Quadratic: return sign * sigma * s;
    case Kind::Sampled: {
      const int m = static_cast<int>(samples.size());
      if (m == 1) return 0.0;
      const double h = half_length / (m - 1);
      Cubic1D interp(0.0, h, samples);
      return sign * interp.derivative(std::min(s, half_length));
    }
  }
  return 0.0;
}

double Profile1D::min_on(double half_length) const {
  switch (kind) {
    case Kind::Constant: return c0;
    case Kind::Quadratic: return sigma >= 0.0 ? c0 : 0.5 * sigma * half_length * half_length + c0;
    case Kind::Sampled: return *std::min_element(samples.begin(), samples.end());
  }
  return c0;
}

double Profile1D::max_on(double half_length) const {
  switch (kind) {
    case Kind::Constant: return c0;
    case Kind::Quadratic: return sigma >= 0.0 ? 0.5 * sigma * half_length * half_length + c0 : c0;
    case Kind::Sampled: return *std::max_element(samples.begin(), samples.end());
  }
  return c0;
}

void Modulus1D::validate() const {
  if (length <= 0.0) throw std::invalid_argument("Modulus1D: length must be positive");
  if (rho.min_on(length / 2.0) <= 0.0)
    throw std::invalid_argument("Modulus1D: rho must be positive on the interval");
}

namespace {

struct Tridiag {
  std::vector<double> diag, off;  // symmetric
  int n() const { return static_cast<int>(diag.size()); }

  double inf_norm() const {
    double m = 0.0;
    for (int i = 0; i < n(); ++i) {
      double row = std::abs(diag[i]);
      if (i > 0) row += std::abs(off[i - 1]);
      if (i + 1 < n()) row += std::abs(off[i]);
      m = std::max(m, row);
    }
    return m;
  }

  // Count of eigenvalues strictly below x (Sturm / LDL^T pivot count).
  int count_below(double x) const {
    const int N = n();
    int count = 0;
    double q = diag[0] - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < N; ++i) {
      const double denom = (q == 0.0) ? 1e-300 : q;
      q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
      if (q < 0.0) ++count;
    }
    return count;
  }

  // k-th eigenvalue (1-based) by bisection on the Sturm count.
  double eigenvalue(int k) const {
    const double norm = inf_norm();
    double lo = -norm, hi = norm;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(mid) >= k)
        hi = mid;
      else
        lo = mid;
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::max(std::abs(lo), std::abs(hi))))
        break;
    }
    return 0.5 * (lo + hi);
  }

  // Solve (T - shift I) x = b with partial pivoting (dgtsv-style).
  std::vector<double> solve_shifted(double shift, std::vector<double> b) const {
    const int N = n();
    std::vector<double> d(N), du(std::max(0, N - 1)), du2(std::max(0, N - 2)),
        dl(std::max(0, N - 1));
    for (int i = 0; i < N; ++i) d[i] = diag[i] - shift;
    for (int i = 0; i + 1 < N; ++i) du[i] = off[i], dl[i] = off[i];
    std::vector<int> piv(N, 0);
    for (int i = 0; i + 1 < N; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] == 0.0) d[i] = 1e-300;
        const double m = dl[i] / d[i];
        d[i + 1] -= m * du[i];
        b[i + 1] -= m * b[i];
        if (i + 2 < N) du2[i] = 0.0;
      } else {
        const double m = d[i] / dl[i];
        d[i] = dl[i];
        const double t = d[i + 1];
        d[i + 1] = du[i] - m * t;
        if (i + 2 < N) {
          du2[i] = du[i + 1];
          du[i + 1] = -m * du[i + 1];
        }
        du[i] = t;
        std::swap(b[i], b[i + 1]);
        b[i + 1] -= m * b[i];
        piv[i] = 1;
      }
    }
    std::vector<double> x(N);
    if (d[N - 1] == 0.0) d[N - 1] = 1e-300;
    x[N - 1] = b[N - 1] / d[N - 1];
    if (N > 1) x[N - 2] = (b[N - 2] - du[N - 2] * x[N - 1]) / d[N - 2];
    for (int i = N - 3; i >= 0; --i)
      x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    return x;
  }

  // Eigenvector for a converged eigenvalue by inverse iteration, optionally
  // deflated against a previously found vector.
  std::vector<double> eigenvector(double lambda, const std::vector<double>* deflate,
                                  double* residual_out) const {
    const int N = n();
    std::vector<double> v(N);
    for (int i = 0; i < N; ++i)
      v[i] = std::sin(M_PI * (i + 1) / (N + 1.0)) +
             (deflate ? std::sin(2.0 * M_PI * (i + 1) / (N + 1.0)) : 0.0);
    auto orth = [&](std::vector<double>& w) {
      if (!deflate) return;
      double dot = 0.0;
      for (int i = 0; i < N; ++i) dot += w[i] * (*deflate)[i];
      for (int i = 0; i < N; ++i) w[i] -= dot * (*deflate)[i];
    };
    auto normalize = [&](std::vector<double>& w) {
      double nn = 0.0;
      for (double t : w) nn += t * t;
      nn = std::sqrt(nn);
      for (double& t : w) t /= nn;
    };
    orth(v);
    normalize(v);
    const double shift = lambda;
    for (int it = 0; it < 4; ++it) {
      v = solve_shifted(shift, std::move(v));
      orth(v);
      normalize(v);
    }
    if (residual_out) {
      double rr = 0.0;
      for (int i = 0; i < N; ++i) {
        double Av = diag[i] * v[i];
        if (i > 0) Av += off[i - 1] * v[i - 1];
        if (i + 1 < N) Av += off[i] * v[i + 1];
        const double r = Av - lambda * v[i];
        rr += r * r;
      }
      *residual_out = std::sqrt(rr);
    }
    return v;
  }
};

struct Grid1DSolve {
  double lam1, lam2, res1, res2, norm;
  std::vector<double> v1, v2;  // symmetrized-coordinate eigenvectors, unit norm
  std::vector<double> s, rho;
  double h;
};

Grid1DSolve solve_on_grid(const Modulus1D& m, int n) {
  const double D = m.length, half = D / 2.0;
  const double h = D / (n + 1);
  Tridiag C;
  C.diag.resize(n);
  C.off.resize(n - 1);
  std::vector<double> s(n), rho(n);
  for (int i = 0; i < n; ++i) {
    s[i] = -half + (i + 1) * h;
    rho[i] = m.rho(s[i], half);
    C.diag[i] = (2.0 / (h * h) + m.V(s[i], half)) / rho[i];
  }
  for (int i = 0; i + 1 < n; ++i)
    C.off[i] = -1.0 / (h * h) / std::sqrt(rho[i] * rho[i + 1]);

  Grid1DSolve out;
  out.h = h;
  out.s = std::move(s);
  out.rho = std::move(rho);
  out.norm = C.inf_norm();
  out.lam1 = C.eigenvalue(1);
  out.lam2 = C.eigenvalue(2);
  out.v1 = C.eigenvector(out.lam1, nullptr, &out.res1);
  out.v2 = C.eigenvector(out.lam2, &out.v1, &out.res2);
  return out;
}

}  // namespace

Spectrum1D solve_1d(const Modulus1D& m, int n) {
  m.validate();
  if (n < 32) throw std::invalid_argument("solve_1d: need n >= 32");
  if (n % 2 == 0) ++n;  // keep a node at s = 0

  const Grid1DSolve coarse = solve_on_grid(m, n);
  const Grid1DSolve fine = solve_on_grid(m, 2 * n + 1);

  Spectrum1D sp;
  sp.length = m.length;
  sp.n = 2 * n + 1;
  sp.h = fine.h;
  sp.lam1_coarse = coarse.lam1;
  sp.lam2_coarse = coarse.lam2;
  sp.lam1_raw = fine.lam1;
  sp.lam2_raw = fine.lam2;
  sp.lam1 = (4.0 * fine.lam1 - coarse.lam1) / 3.0;
  sp.lam2 = (4.0 * fine.lam2 - coarse.lam2) / 3.0;
  sp.gap_raw = fine.lam2 - fine.lam1;
  sp.gap = sp.lam2 - sp.lam1;
  sp.s = fine.s;
  sp.rho_nodes = fine.rho;
  sp.residual1 = fine.res1;
  sp.residual2 = fine.res2;
  sp.noise_floor = fine.norm * 1e-13;
  sp.gap_resolved = sp.gap_raw > sp.noise_floor;

  // back to the weighted problem and L^2(rho) normalization
  const int N = sp.n;
  sp.phi1.resize(N);
  sp.phi2.resize(N);
  const double scale = 1.0 / std::sqrt(sp.h);
  for (int i = 0; i < N; ++i) {
    const double w = std::sqrt(fine.rho[i]);
    sp.phi1[i] = scale * fine.v1[i] / w;
    sp.phi2[i] = scale * fine.v2[i] / w;
  }
  // sign conventions: phi1 positive, phi2 positive on (0, D/2)
  double mass1 = 0.0;
  for (double t : sp.phi1) mass1 += t;
  if (mass1 < 0.0)
    for (double& t : sp.phi1) t = -t;
  double mass2 = 0.0;
  for (int i = (N + 1) / 2; i < N; ++i) mass2 += sp.phi2[i];
  if (mass2 < 0.0)
    for (double& t : sp.phi2) t = -t;

  if (sp.gap_resolved) {
    if (!(sp.lam1_raw < sp.lam2_raw))
      throw std::runtime_error("solve_1d: eigenvalue ordering violated");
    double min1 = std::numeric_limits<double>::infinity();
    for (double t : sp.phi1) min1 = std::min(min1, t);
    if (min1 <= 0.0) throw std::runtime_error("solve_1d: phi1 not positive");
    int sign_changes = 0;
    for (int i = 0; i + 1 < N; ++i)
      if (sp.phi2[i] * sp.phi2[i + 1] < 0.0) ++sign_changes;
    if (sign_changes != 1)
      throw std::runtime_error("solve_1d: phi2 must change sign exactly once");
  }
  return sp;
}

Cubic1D Spectrum1D::phi1_interp() const {
  std::vector<double> with_ends;
  with_ends.reserve(n + 2);
  with_ends.push_back(0.0);
  with_ends.insert(with_ends.end(), phi1.begin(), phi1.end());
  with_ends.push_back(0.0);
  return Cubic1D(-length / 2.0, h, std::move(with_ends));
}

double Spectrum1D::log_derivative_phi1(double at) const {
  const Cubic1D f = phi1_interp();
  const double v = f.value(at);
  if (v <= 0.0) throw std::domain_error("log_derivative_phi1: phi1 <= 0 here");
  return f.derivative(at) / v;
}

double Spectrum1D::phi_ratio(double at) const {
  std::vector<double> w1(phi1), w2(phi2);
  w1.insert(w1.begin(), 0.0);
  w1.push_back(0.0);
  w2.insert(w2.begin(), 0.0);
  w2.push_back(0.0);
  const Cubic1D f1(-length / 2.0, h, std::move(w1));
  const Cubic1D f2(-length / 2.0, h, std::move(w2));
  const double denom = f1.value(at);
  if (std::abs(at) >= length / 2.0 - 2.0 * h || denom <= 0.0) {
    // near the ends the ratio extends by the slope quotient
    const double edge = (at >= 0.0 ? 1.0 : -1.0) * (length / 2.0);
    return f2.derivative(edge) / f1.derivative(edge);
  }
  return f2.value(at) / denom;
}

LogDerivative log_derivative_psi(const Spectrum1D& sp) {
  LogDerivative out;
  const int N = sp.n;
  out.s.reserve(N);
  out.psi.reserve(N);
  for (int i = 0; i < N; ++i) {
    const double prev = (i == 0) ? 0.0 : sp.phi1[i - 1];
    const double next = (i == N - 1) ? 0.0 : sp.phi1[i + 1];
    out.s.push_back(sp.s[i]);
    out.psi.push_back((next - prev) / (2.0 * sp.h) / sp.phi1[i]);
  }
  out.psi[(N - 1) / 2] = 0.0;  // evenness pins psi(0)
  out.max_odd_defect = 0.0;
  for (int i = 0; i < N; ++i)
    out.max_odd_defect =
        std::max(out.max_odd_defect, std::abs(out.psi[i] + out.psi[N - 1 - i]));
  return out;
}

Bracket eigenvalue_bracket(const Modulus1D& m, int k) {
  m.validate();
  const double half = m.length / 2.0;
  const double base = k * k * M_PI * M_PI / (m.length * m.length);
  const double vmin = m.V.min_on(half), vmax = m.V.max_on(half);
  if (vmin < -base)
    throw std::domain_error("eigenvalue_bracket: min V below -k^2 pi^2/D^2");
  return {(base + vmin) / m.rho.max_on(half), (base + vmax) / m.rho.min_on(half)};
}

double closed_form_gap_bound(const Modulus1D& m) {
  m.validate();
  const double half = m.length / 2.0;
  if (m.V.min_on(half) < 0.0)
    throw std::domain_error("closed_form_gap_bound: requires V >= 0");
  const double rmin = m.rho.min_on(half), rmax = m.rho.max_on(half);
  return 3.0 * M_PI * M_PI / (m.length * m.length) * rmin / (rmax * rmax) -
         (m.V.max_on(half) / rmin - m.V.min_on(half) / rmax);
}

namespace {

double neumann_on_grid(const Modulus1D& m, int n) {
  const Spectrum1D sp = solve_1d(m, n);
  const int N = sp.n;
  const double h = sp.h;
  // divergence form (phi1^2 w')' = -mu phi1^2 w, natural ends
  Tridiag K;
  K.diag.assign(N, 0.0);
  K.off.assign(N - 1, 0.0);
  std::vector<double> mass(N);
  for (int i = 0; i < N; ++i) mass[i] = sp.phi1[i] * sp.phi1[i];
  std::vector<double> face(N - 1);
  for (int i = 0; i + 1 < N; ++i) face[i] = sp.phi1[i] * sp.phi1[i + 1];  // ~ phi1^2 midpoint
  for (int i = 0; i < N; ++i) {
    const double wl = (i > 0) ? face[i - 1] : 0.0;
    const double wr = (i + 1 < N) ? face[i] : 0.0;
    K.diag[i] = (wl + wr) / (h * h);
  }
  for (int i = 0; i + 1 < N; ++i) K.off[i] = -face[i] / (h * h);
  // symmetrize with the mass weight
  Tridiag C;
  C.diag.resize(N);
  C.off.resize(N - 1);
  for (int i = 0; i < N; ++i) C.diag[i] = K.diag[i] / mass[i];
  for (int i = 0; i + 1 < N; ++i)
    C.off[i] = K.off[i] / std::sqrt(mass[i] * mass[i + 1]);
  return C.eigenvalue(2);  // first nontrivial (the constant mode sits at 0)
}

}  // namespace

NeumannRatio neumann_ratio_eigen(const Modulus1D& m, int n) {
  m.validate();
  if (n % 2 == 0) ++n;
  NeumannRatio out;
  const double coarse = neumann_on_grid(m, (n - 1) / 2);
  out.mu_raw = neumann_on_grid(m, n);
  out.mu = (4.0 * out.mu_raw - coarse) / 3.0;

  // residual of Phi = phi2/phi1 in Phi'' + 2 (log phi1)' Phi' = -gap rho Phi
  const Spectrum1D sp = solve_1d(m, n);
  const int N = sp.n;
  double worst = 0.0;
  for (int i = 2; i + 2 < N; ++i) {
    if (std::abs(sp.s[i]) > sp.length / 2.0 - 4.0 * sp.h) continue;
    const double Phi_m = sp.phi2[i - 1] / sp.phi1[i - 1];
    const double Phi_0 = sp.phi2[i] / sp.phi1[i];
    const double Phi_p = sp.phi2[i + 1] / sp.phi1[i + 1];
    const double dPhi = (Phi_p - Phi_m) / (2.0 * sp.h);
    const double ddPhi = (Phi_p - 2.0 * Phi_0 + Phi_m) / (sp.h * sp.h);
    const double psi = (sp.phi1[i + 1] - sp.phi1[i - 1]) / (2.0 * sp.h) / sp.phi1[i];
    const double r = ddPhi + 2.0 * psi * dPhi + sp.gap_raw * sp.rho_nodes[i] * Phi_0;
    worst = std::max(worst, std::abs(r));
  }
  out.residual = worst;
  return out;
}

RiccatiComparison riccati_compare(const Modulus1D& m, double L, int n, double tol) {
  m.validate();
  const double half = m.length / 2.0;
  if (m.V.max_on(half) != 0.0 || m.V.min_on(half) != 0.0)
    throw std::domain_error("riccati_compare: requires V == 0");
  const double required = std::sqrt(m.rho.max_on(half) / m.rho.min_on(half)) * m.length;
  if (L < required * (1.0 - 1e-12))
    throw std::domain_error("riccati_compare: L below sqrt(max rho/min rho) D");

  const Spectrum1D sp = solve_1d(m, n);
  const LogDerivative ld = log_derivative_psi(sp);
  RiccatiComparison out;
  out.length_ratio = L / m.length;
  out.max_violation = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < ld.s.size(); ++i) {
    const double s = ld.s[i];
    if (s < 0.0 || s > half - 2.0 * sp.h) continue;
    const double psi_L = -(M_PI / L) * std::tan(M_PI * s / L);
    out.max_violation = std::max(out.max_violation, ld.psi[i] - psi_L);
  }
  out.holds = out.max_violation <= tol;
  return out;
}

}  // namespace gapforge
