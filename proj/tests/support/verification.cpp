#include "support/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "gapforge/diffusion.hpp"
#include "gapforge/moduli.hpp"
#include "gapforge/report_io.hpp"
#include "gapforge/rng.hpp"
#include "gapforge/twopoint.hpp"
#include "support/oracles.hpp"

namespace gapforge::verify {

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
  Clock::time_point start = Clock::now();
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start).count();
  }
};

std::string fmt(double v) { return format_double(v); }

CheckResult make_result(const std::string& name, bool pass, const std::string& detail,
                        const Timer& t) {
  return {name, pass, detail, t.seconds()};
}

// ------------------------------------------------------------------ fields

// dense polynomial in n variables up to total degree 3, analytic derivatives
struct CubicPoly {
  int n;
  std::vector<std::vector<int>> expo;  // multi-indices
  std::vector<double> coef;

  static CubicPoly random(int n, Philox& gen, double scale) {
    CubicPoly p;
    p.n = n;
    std::vector<int> e(n, 0);
    std::function<void(int, int)> walk = [&](int pos, int budget) {
      if (pos == n) {
        p.expo.push_back(e);
        p.coef.push_back(scale * (2.0 * gen.uniform() - 1.0));
        return;
      }
      for (int d = 0; d <= budget; ++d) {
        e[pos] = d;
        walk(pos + 1, budget - d);
      }
      e[pos] = 0;
    };
    walk(0, 3);
    return p;
  }

  double value(const Vec& x) const {
    double out = 0.0;
    for (size_t t = 0; t < coef.size(); ++t) {
      double term = coef[t];
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < expo[t][i]; ++k) term *= x(i);
      out += term;
    }
    return out;
  }

  Vec grad(const Vec& x) const {
    Vec g = Vec::Zero(n);
    for (size_t t = 0; t < coef.size(); ++t)
      for (int i = 0; i < n; ++i) {
        if (expo[t][i] == 0) continue;
        double term = coef[t] * expo[t][i];
        for (int j = 0; j < n; ++j) {
          const int e = expo[t][j] - (j == i ? 1 : 0);
          for (int k = 0; k < e; ++k) term *= x(j);
        }
        g(i) += term;
      }
    return g;
  }

  Mat hess(const Vec& x) const {
    Mat H = Mat::Zero(n, n);
    for (size_t t = 0; t < coef.size(); ++t)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          // differentiate the monomial by x_i then x_j
          int e_i = expo[t][i], e_j = expo[t][j];
          double factor = 1.0;
          if (i == j) {
            if (e_i < 2) continue;
            factor = e_i * (e_i - 1);
            e_i -= 2;
          } else {
            if (e_i < 1 || e_j < 1) continue;
            factor = e_i * e_j;
            e_i -= 1;
            e_j -= 1;
          }
          double term = coef[t] * factor;
          for (int q = 0; q < n; ++q) {
            int e = expo[t][q];
            if (q == i) e = e_i;
            if (q == j && i != j) e = e_j;
            for (int k = 0; k < e; ++k) term *= x(q);
          }
          H(i, j) += term;
        }
    return H;
  }

  ScalarField field() const {
    return {[p = *this](const Vec& x) { return p.value(x); },
            [p = *this](const Vec& x) { return p.grad(x); },
            [p = *this](const Vec& x) { return p.hess(x); }};
  }
};

ScalarField square_log_eigenfunction() {
  // v = log(sin pi x sin pi y) on the unit square
  return {[](const Vec& p) {
            return std::log(std::sin(M_PI * p(0)) * std::sin(M_PI * p(1)));
          },
          [](const Vec& p) {
            return vec2(M_PI / std::tan(M_PI * p(0)), M_PI / std::tan(M_PI * p(1)));
          },
          [](const Vec& p) {
            Mat H = Mat::Zero(2, 2);
            const double sx = std::sin(M_PI * p(0)), sy = std::sin(M_PI * p(1));
            H(0, 0) = -M_PI * M_PI / (sx * sx);
            H(1, 1) = -M_PI * M_PI / (sy * sy);
            return H;
          }};
}

ScalarField quadratic_well() {
  // v = -|x|^2/2 in any dimension
  return {[](const Vec& p) { return -0.5 * p.squaredNorm(); },
          [](const Vec& p) { return Vec(-p); },
          [](const Vec& p) {
            return Mat(-Mat::Identity(p.size(), p.size()));
          }};
}

ScalarField sphere_height_function() {
  // z-coordinate of the K = 1 embedding, restricted to the chart
  return {[](const Vec& p) {
            const double r2 = p.squaredNorm();
            return (r2 - 1.0) / (r2 + 1.0);
          },
          [](const Vec& p) {
            const double q = 1.0 + p.squaredNorm();
            return Vec(4.0 * p / (q * q));
          },
          [](const Vec& p) {
            const double q = 1.0 + p.squaredNorm();
            const int n = static_cast<int>(p.size());
            return Mat(4.0 / (q * q) * Mat::Identity(n, n) -
                       16.0 / (q * q * q) * p * p.transpose());
          }};
}

// ----------------------------------------------------------------- checks

CheckResult check_trig_identity(bool fast, uint64_t seed) {
  Timer t;
  Philox gen(seed, 7);
  const int trials = fast ? 2000 : 10000;
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double K = 4.0 * gen.uniform();
    const double smax = K > 0 ? 0.99 * M_PI / (2.0 * std::sqrt(std::max(K, 1e-9))) : 2.0;
    const double s = (2.0 * gen.uniform() - 1.0) * std::min(smax, 2.0);
    const TrigK tr = trig_k(K, s);
    worst = std::max(worst, std::abs(tr.cs * tr.cs + K * tr.sn * tr.sn - 1.0));
  }
  // frozen flat and high-precision anchors
  const TrigK flat = trig_k(0.0, 0.7);
  bool ok = worst <= 1e-12 && flat.cs == 1.0 && flat.sn == 0.7 && flat.tn == 0.0;
  const TrigK k4 = trig_k(4.0, 0.3);
  ok = ok && std::abs(k4.cs - 0.825335614909678297241) < 1e-15 &&
       std::abs(k4.sn - 0.2823212366975176786005) < 1e-15 &&
       std::abs(k4.tn - 1.368273616683384634142) < 1e-14;
  return make_result("trig-identity", ok,
                     "max |cs^2 + K sn^2 - 1| = " + fmt(worst), t);
}

CheckResult check_mirror_isometry(bool fast, uint64_t seed) {
  Timer t;
  Philox gen(seed, 11);
  const int trials = fast ? 200 : 1000;
  double worst_norm = 0.0, worst_invol = 0.0, worst_gram = 0.0;
  for (int i = 0; i < trials; ++i) {
    const bool sphere = (i % 2 == 1);
    const SpaceForm space =
        sphere ? SpaceForm::sphere(2, 1.0) : SpaceForm::euclidean(3);
    const int n = space.dim;
    Vec x(n), y(n), w(n);
    for (int k = 0; k < n; ++k) {
      x(k) = gen.uniform() - 0.5;
      y(k) = gen.uniform() - 0.5;
      w(k) = 2.0 * gen.uniform() - 1.0;
    }
    if ((x - y).norm() < 1e-3) continue;
    const GeodesicFrame f = geodesic_frame(space, x, y);
    const Vec mw = f.mirror(w);
    worst_norm = std::max(worst_norm, std::abs(std::sqrt(f.metric_dot(y, mw, mw)) -
                                               std::sqrt(f.metric_dot(x, w, w))));
    const GeodesicFrame back = geodesic_frame(space, y, x);
    worst_invol = std::max(worst_invol, (back.mirror(mw) - w).norm());
    worst_gram = std::max(
        {worst_gram,
         (f.gram(false) - Mat(Mat::Identity(n, n))).cwiseAbs().maxCoeff(),
         (f.gram(true) - Mat(Mat::Identity(n, n))).cwiseAbs().maxCoeff()});
  }
  const bool ok = worst_norm < 1e-10 && worst_invol < 1e-9 && worst_gram < 1e-10;
  return make_result("geom-mirror-isometry", ok,
                     "norm defect " + fmt(worst_norm) + ", involution defect " +
                         fmt(worst_invol) + ", gram defect " + fmt(worst_gram),
                     t);
}

CheckResult check_conformal_consistency(bool fast, uint64_t seed) {
  Timer t;
  Philox gen(seed, 13);
  const int trials = fast ? 100 : 400;
  double worst = 0.0, worst_fd = 0.0;
  for (int i = 0; i < trials; ++i) {
    const int pick = i % 3;
    const int dim = 3;
    ConformalFactorSpec cf = pick == 0   ? ConformalFactorSpec::poincare_disk(dim)
                             : pick == 1 ? ConformalFactorSpec::inverse_square(dim)
                                         : ConformalFactorSpec::sphere_stereo(dim, 1.3);
    Vec p(dim);
    for (int k = 0; k < dim; ++k) p(k) = 0.5 * (gen.uniform() - 0.5);
    if (pick == 1) p(0) += 1.0;  // keep clear of the puncture
    if (!cf.in_chart(p)) continue;

    // the two potential formulas must agree:
    // V = (N-2)^2/4 |grad phi|^2 + (N-2)/2 Lap phi
    //   = -(N-2)/(4(N-1)) e^{2phi} R_tilde + (N-2)/(4(N-1)) R_base
    const SchrodingerData sd = schrodinger_data(cf, dim, p);
    const double R_tilde = scalar_curvature(cf, dim, cf.base, p);
    const double R_base = base_scalar_curvature(cf.base);
    const double via_curv = -(dim - 2.0) / (4.0 * (dim - 1.0)) * sd.rho * R_tilde +
                            (dim - 2.0) / (4.0 * (dim - 1.0)) * R_base;
    worst = std::max(worst, std::abs(sd.V - via_curv));

    // analytic phi derivatives against centered differences
    const ConformalEval e = cf.eval(p);
    const double h = 1e-5;
    for (int k = 0; k < dim; ++k) {
      Vec pp = p, pm = p;
      pp(k) += h;
      pm(k) -= h;
      const double fd = (cf.eval(pp).phi - cf.eval(pm).phi) / (2.0 * h);
      worst_fd = std::max(worst_fd, std::abs(fd - e.grad(k)));
    }
  }
  const bool ok = worst <= 1e-8 && worst_fd <= 1e-7;
  return make_result("conformal-potential-consistency", ok,
                     "max |V route difference| = " + fmt(worst) +
                         ", max grad FD defect = " + fmt(worst_fd),
                     t);
}

CheckResult check_domain_metrics(bool fast, uint64_t seed) {
  Timer t;
  Philox gen(seed, 17);
  const int trials = fast ? 20 : 60;
  bool ok = true;
  std::ostringstream detail;
  double worst_ratio = 0.0;
  for (int i = 0; i < trials; ++i) {
    // random convex polygon in the disk: convex hull of a circle sample
    const int m = 3 + static_cast<int>(gen.uniform() * 5.0);
    std::vector<double> angles;
    for (int k = 0; k < m; ++k) angles.push_back(2.0 * M_PI * gen.uniform());
    std::sort(angles.begin(), angles.end());
    bool distinct = true;
    for (int k = 0; k + 1 < m; ++k)
      if (angles[k + 1] - angles[k] < 0.15) distinct = false;
    if (!distinct) continue;
    const double rad = 0.2 + 0.6 * gen.uniform();
    std::vector<Vec> verts;
    for (double a : angles) verts.push_back(vec2(rad * std::cos(a), rad * std::sin(a)));
    Domain dom;
    try {
      dom = Domain::polygon(verts, Chart::PoincareDisk);
    } catch (const std::exception&) {
      continue;
    }
    const DomainMetrics dm = diameters(dom, 1024);
    if (!dm.diameter_hyperbolic) {
      ok = false;
      break;
    }
    worst_ratio =
        std::max(worst_ratio, dm.diameter_euclidean / (*dm.diameter_hyperbolic / 2.0));
    if (dm.diameter_euclidean > *dm.diameter_hyperbolic / 2.0 * (1.0 + 1e-9)) ok = false;
  }
  // inradius_from_diameter increasing, R_E < 1
  double prev = 0.0;
  for (double d = 0.1; d <= 12.0; d += 0.37) {
    const double r = inradius_from_diameter(d);
    if (r <= prev) ok = false;
    prev = r;
    if (circumradius_re(5, d).R_E >= 1.0) ok = false;
  }
  detail << "max D_E/(D_H/2) ratio = " << fmt(worst_ratio);
  return make_result("domains-metrics", ok, detail.str(), t);
}

CheckResult check_model1d_convergence(bool fast, uint64_t) {
  Timer t;
  (void)fast;
  Modulus1D m{2.4, Profile1D::constant(1.0), Profile1D::constant(0.0)};
  const double exact = M_PI * M_PI / (2.4 * 2.4);
  // raw-eigenvalue error ratio between the (n, 2n+1) grids is ~4 at O(h^2)
  const Spectrum1D sp = solve_1d(m, 129);
  const double e_coarse = std::abs(sp.lam1_coarse - exact);
  const double e_fine = std::abs(sp.lam1_raw - exact);
  const double ratio = e_coarse / e_fine;
  const bool ok = ratio >= 3.6 && ratio <= 4.4 && std::abs(sp.lam1 - exact) < 1e-9;
  return make_result("model1d-richardson-order", ok,
                     "error ratio = " + fmt(ratio) + ", extrapolated defect = " +
                         fmt(std::abs(sp.lam1 - exact)),
                     t);
}

CheckResult check_model1d_neumann(bool fast, uint64_t seed) {
  Timer t;
  // mu = gap for the unweighted problem
  Modulus1D m{M_PI, Profile1D::constant(1.0), Profile1D::constant(0.0)};
  const NeumannRatio nr = neumann_ratio_eigen(m, fast ? 257 : 513);
  const double gap = 3.0;
  bool ok = std::abs(nr.mu - gap) < 2e-4 && nr.residual < 1e-2;
  // generic weighted case: gap >= mu / max rho
  Philox gen(seed, 23);
  double worst = 0.0;
  const int trials = fast ? 5 : 20;
  for (int i = 0; i < trials; ++i) {
    Modulus1D mm{0.8 + 2.0 * gen.uniform(),
                 Profile1D::quadratic(gen.uniform(), 0.5 + gen.uniform()),
                 Profile1D::constant(0.0)};
    const Spectrum1D sp = solve_1d(mm, 257);
    const NeumannRatio r = neumann_ratio_eigen(mm, 257);
    const double max_rho = mm.rho.max_on(mm.length / 2.0);
    worst = std::max(worst, r.mu / max_rho - sp.gap);
    if (sp.gap < r.mu / max_rho - 1e-6) ok = false;
  }
  return make_result("model1d-neumann-ratio", ok,
                     "|mu - 3| = " + fmt(std::abs(nr.mu - gap)) +
                         ", worst (mu/max rho - gap) = " + fmt(worst),
                     t);
}

CheckResult check_eigsolve_order(bool fast, uint64_t) {
  Timer t;
  (void)fast;
  // convergence order on the Euclidean unit disk, lam1 = j_{0,1}^2
  const double exact = 2.404825557695773 * 2.404825557695773;
  const Domain disk = Domain::ball(vec2(0, 0), 1.0, Chart::Euclidean);
  auto one = [](const Vec&) { return 1.0; };
  const EigenResult2D a = solve_weighted_2d(disk, one, nullptr, 1.0 / 24.0);
  const EigenResult2D b = solve_weighted_2d(disk, one, nullptr, 1.0 / 48.0);
  const double e1 = std::abs(a.lam1_raw - exact), e2 = std::abs(b.lam1_raw - exact);
  const double order = std::log2(e1 / e2);
  const bool ok = order >= 1.6 && order <= 2.4;
  return make_result("eigsolve-shortley-weller-order", ok,
                     "observed order = " + fmt(order), t);
}

CheckResult check_twopoint_quadratic(bool fast, uint64_t seed) {
  Timer t;
  Philox gen(seed, 29);
  TwoPointContext ctx{SpaceForm::euclidean(2), quadratic_well()};
  double worst = 0.0;
  const int trials = fast ? 50 : 200;
  for (int i = 0; i < trials; ++i) {
    const Vec x = vec2(gen.uniform() - 0.5, gen.uniform() - 0.5);
    const Vec y = vec2(gen.uniform() - 0.5, gen.uniform() - 0.5);
    if ((x - y).norm() < 1e-2) continue;
    const TwoPointForms f = two_point_forms(ctx, x, y, nullptr);
    worst = std::max(worst, std::abs(f.Z + f.dist));  // Z = -d for v = -|x|^2/2
  }
  // C_f with f == 1 is 2
  const TwoPointForms f1 = two_point_forms(ctx, vec2(0.1, 0.0), vec2(0.4, 0.2),
                                           [](const Vec&) { return 1.0; });
  const bool ok = worst < 1e-12 && std::abs(f1.C_f - 2.0) < 1e-15;
  return make_result("twopoint-quadratic-z", ok, "max |Z + d| = " + fmt(worst), t);
}

CheckResult check_moduli_recompute(bool fast, uint64_t) {
  Timer t;
  (void)fast;
  // reports reproduce their bound from stored intermediates
  const ConformalFactorSpec cf = ConformalFactorSpec::poincare_disk(2);
  const Domain ball = Domain::ball(vec2(0, 0), 0.35, Chart::PoincareDisk);
  const GapBoundReport rep = conformally_flat_bound(
      cf, ball, 2, Lambda1Source::InscribedBall, std::nullopt, CChoice::automatic(), 129);
  bool ok = !rep.vacuous &&
            std::abs(rep.recompute_bound() - rep.bound) <=
                1e-12 * std::max(1.0, std::abs(rep.bound));
  // trivial condition cases
  Modulus1D flat{1.0, Profile1D::constant(2.0), Profile1D::constant(0.0)};
  ok = ok && check_conditions(flat, 0.0, 1.0, 5.0, 1.0, 0.0).condition2;  // sigma = 0
  Modulus1D inc{1.0, Profile1D::quadratic(1.0, 1.0), Profile1D::constant(0.0)};
  ok = ok && check_conditions(inc, 0.0, 5.0, 1.0, 1.0, 0.0).condition2;  // lam >= lam1
  ok = ok && !check_conditions(inc, 0.0, 1.0, 5.0, 1.0, 0.0).condition2;
  return make_result("moduli-report-recompute", ok,
                     "bound " + fmt(rep.bound) + " recomputed " +
                         fmt(rep.recompute_bound()),
                     t);
}

DiffusionConfig driftless_box_config(uint64_t seed, int trajectories, double dt) {
  DiffusionConfig cfg;
  cfg.space = SpaceForm::euclidean(2);
  cfg.domain = Domain::rectangle(vec2(0, 0), vec2(8, 8));
  cfg.alpha = 0.0;
  cfg.dt = dt;
  cfg.t_max = 2.0;
  cfg.trajectories = trajectories;
  cfg.seed = seed;
  cfg.x0 = vec2(-1.0, 0.3);
  cfg.y0 = vec2(1.2, -0.4);
  return cfg;
}

CheckResult check_sde_driftless(bool fast, uint64_t seed) {
  Timer t;
  DiffusionConfig cfg = driftless_box_config(seed, fast ? 400 : 2000, 0.01);
  const TrajectoryStats stats = simulate_coupled(cfg);
  const DriftAuditReport rep = drift_audit(stats, cfg, 10, fast ? 50 : 200);
  const double qv = rep.qv_per_time;
  const bool ok = rep.worst_abs_z < 3.0 && qv > 1.8 && qv < 2.2 && stats.failures == 0;
  return make_result("sde-driftless-flat", ok,
                     "worst |z| = " + fmt(rep.worst_abs_z) + ", QV rate = " + fmt(qv),
                     t);
}

CheckResult check_sde_determinism(bool fast, uint64_t seed) {
  Timer t;
  DiffusionConfig cfg = driftless_box_config(seed, fast ? 100 : 400, 0.01);
  const TrajectoryStats a = simulate_coupled(cfg);
  const TrajectoryStats b = simulate_coupled(cfg);
  bool ok = a.tau == b.tau && a.coupled == b.coupled && a.failures == b.failures;
  ok = ok && a.increments.size() == b.increments.size();
  for (size_t i = 0; ok && i < a.increments.size(); ++i)
    ok = a.increments[i].xi == b.increments[i].xi &&
         a.increments[i].dxi == b.increments[i].dxi;
  return make_result("sde-determinism", ok,
                     ok ? "identical statistics across reruns" : "rerun mismatch", t);
}

// ------------------------------------------------------------- acceptance

CheckResult acceptance_01(bool, uint64_t) {
  Timer t;
  Modulus1D m{M_PI, Profile1D::constant(1.0), Profile1D::constant(0.0)};
  const Spectrum1D sp = solve_1d(m, 257);
  const double e1 = std::abs(sp.lam1 - 1.0), e2 = std::abs(sp.lam2 - 4.0),
               eg = std::abs(sp.gap - 3.0);
  const bool ok = e1 <= 1e-6 && e2 <= 1e-6 && eg <= 1e-6 && t.seconds() < 1.0;
  return make_result("acceptance-01-1d-exactness", ok,
                     "|lam1-1| = " + fmt(e1) + ", |lam2-4| = " + fmt(e2) +
                         ", |gap-3| = " + fmt(eg) + ", " + fmt(t.seconds()) + " s",
                     t);
}

struct Random1DInstance {
  Modulus1D m;
  double sigma, C, D, V;
};

Random1DInstance random_instance(Philox& gen, bool with_potential) {
  Random1DInstance inst;
  inst.sigma = std::max(1e-6, gen.uniform());
  inst.C = 0.5 + 1.5 * gen.uniform();
  inst.D = 0.5 + 2.5 * gen.uniform();
  inst.V = with_potential ? gen.uniform() : 0.0;
  inst.m = Modulus1D{inst.D, Profile1D::quadratic(inst.sigma, inst.C),
                     Profile1D::constant(inst.V)};
  return inst;
}

CheckResult acceptance_02(bool fast, uint64_t seed) {
  Timer t;
  Philox gen(seed, 31);
  const int trials = fast ? 50 : 200;
  int violations = 0;
  double worst = 0.0;
  for (int i = 0; i < trials; ++i) {
    const Random1DInstance inst = random_instance(gen, true);
    const Spectrum1D sp = solve_1d(inst.m, 511);
    const double bound = closed_form_gap_bound(inst.m);
    const double slack = sp.gap - bound;
    worst = std::min(worst, slack);
    if (slack < -1e-9) ++violations;
  }
  const bool ok = violations == 0 && t.seconds() < 30.0;
  return make_result("acceptance-02-prop43-dominance", ok,
                     std::to_string(trials) + " instances, " +
                         std::to_string(violations) + " violations, worst slack = " +
                         fmt(worst) + ", " + fmt(t.seconds()) + " s",
                     t);
}

CheckResult acceptance_03(bool fast, uint64_t seed) {
  Timer t;
  Philox gen(seed, 31);  // same stream as acceptance-02: same instances
  const int trials = fast ? 50 : 200;
  int violations = 0;
  for (int i = 0; i < trials; ++i) {
    const Random1DInstance inst = random_instance(gen, true);
    const Spectrum1D sp = solve_1d(inst.m, 511);
    for (int k = 1; k <= 2; ++k) {
      const Bracket br = eigenvalue_bracket(inst.m, k);
      const double lam = k == 1 ? sp.lam1 : sp.lam2;
      const double tol = 1e-7 * std::max(1.0, std::abs(lam));
      if (lam < br.lower - tol || lam > br.upper + tol) ++violations;
    }
  }
  // plus the anchor solve of criterion 1
  Modulus1D anchor{M_PI, Profile1D::constant(1.0), Profile1D::constant(0.0)};
  const Spectrum1D sp = solve_1d(anchor, 257);
  const Bracket b1 = eigenvalue_bracket(anchor, 1);
  if (sp.lam1 < b1.lower - 1e-7 || sp.lam1 > b1.upper + 1e-7) ++violations;
  const bool ok = violations == 0;
  return make_result("acceptance-03-lemma41-bracket", ok,
                     std::to_string(violations) + " bracket violations", t);
}

CheckResult acceptance_04(bool fast, uint64_t seed) {
  Timer t;
  Philox gen(seed, 37);
  const int trials = fast ? 50 : 200;
  int failures = 0;
  double worst = -1e300;
  for (int i = 0; i < trials; ++i) {
    const Random1DInstance inst = random_instance(gen, false);
    const double L =
        std::sqrt(inst.m.rho.max_on(inst.D / 2.0) / inst.m.rho.min_on(inst.D / 2.0)) *
        inst.D;
    const RiccatiComparison rc = riccati_compare(inst.m, L, 513, 1e-6);
    worst = std::max(worst, rc.max_violation);
    if (!rc.holds) ++failures;
  }
  const bool ok = failures == 0;
  return make_result("acceptance-04-riccati", ok,
                     std::to_string(failures) + " failures, worst violation = " +
                         fmt(worst) + " (negative half by oddness)",
                     t);
}

CheckResult acceptance_05(bool fast, uint64_t) {
  Timer t;
  const double h = fast ? 1.0 / 128.0 : 1.0 / 256.0;
  const Domain square = Domain::rectangle(vec2(0.5, 0.5), vec2(0.5, 0.5));
  auto one = [](const Vec&) { return 1.0; };
  const EigenResult2D res = solve_weighted_2d(square, one, nullptr, h);
  const double exact = 3.0 * M_PI * M_PI;
  const double rel = std::abs(res.gap - exact) / exact;
  const bool ok = rel <= 1e-3 && t.seconds() < 60.0;
  return make_result("acceptance-05-square-anchor", ok,
                     "gap = " + fmt(res.gap) + ", rel defect = " + fmt(rel) + ", " +
                         fmt(t.seconds()) + " s",
                     t);
}

CheckResult acceptance_06(bool fast, uint64_t) {
  Timer t;
  const double h = fast ? 1.0 / 64.0 : 1.0 / 128.0;
  const HyperbolicBallGap g = hyperbolic_ball_gap(0.5, h);
  const double S = 2.0 * std::atanh(0.5);
  const double oracle = oracle::shoot_hyperbolic_ball(S, 0);
  const double rel = std::abs(g.lam1 - oracle) / oracle;
  const bool ok = rel <= 5e-3 && g.lam1 >= 0.25 - 1e-3;
  return make_result("acceptance-06-hyperbolic-ball", ok,
                     "lam1 = " + fmt(g.lam1) + ", oracle = " + fmt(oracle) +
                         ", rel = " + fmt(rel),
                     t);
}

CheckResult acceptance_07(bool fast, uint64_t seed) {
  Timer t;
  Philox gen(seed, 41);
  const double h = 1e-3;
  auto run_substrate = [&](const SpaceForm& space, const ScalarField& v, int pairs,
                           double lo, double hi, double dmin, double dmax) {
    double rms_h = 0.0, rms_h2 = 0.0, max_h = 0.0;
    int done = 0;
    TwoPointContext ctx{space, v};
    while (done < pairs) {
      Vec x(space.dim), y(space.dim);
      for (int k = 0; k < space.dim; ++k) {
        x(k) = lo + (hi - lo) * gen.uniform();
        y(k) = lo + (hi - lo) * gen.uniform();
      }
      const double d = space.distance(x, y);
      if (d < dmin || d > dmax) continue;
      const IdentityResidual r1 = hessian_identity_residual(ctx, x, y, h);
      const IdentityResidual r2 = hessian_identity_residual(ctx, x, y, h / 2.0);
      rms_h += r1.residual * r1.residual;
      rms_h2 += r2.residual * r2.residual;
      max_h = std::max(max_h, r1.residual);
      ++done;
    }
    const double order = std::log2(std::sqrt(rms_h / pairs) / std::sqrt(rms_h2 / pairs));
    return std::pair<double, double>(order, max_h);
  };

  const CubicPoly poly = CubicPoly::random(2, gen, 0.7);
  const auto [order_e, max_e] = run_substrate(SpaceForm::euclidean(2), poly.field(),
                                              fast ? 30 : 100, -0.6, 0.6, 0.15, 1.2);
  const auto [order_s, max_s] =
      run_substrate(SpaceForm::sphere(2, 1.0), sphere_height_function(), 30, -0.45,
                    0.45, 0.1, 1.0);
  const bool ok = order_e >= 1.6 && order_e <= 2.4 && max_e <= 1e-4 &&
                  order_s >= 1.6 && order_s <= 2.4 && max_s <= 1e-4;
  return make_result("acceptance-07-twopoint-identity", ok,
                     "euclid order = " + fmt(order_e) + " max = " + fmt(max_e) +
                         "; sphere order = " + fmt(order_s) + " max = " + fmt(max_s),
                     t);
}

CheckResult acceptance_08(bool fast, uint64_t seed) {
  Timer t;
  const double DH = 2.0 * std::log(3.0);  // hyperbolic diameter of the R_E = 0.5 ball
  const GapBoundReport rep = horoconvex_gap_bound(2, DH, CChoice::automatic(), 257);
  Modulus1D modulus{rep.model_length, Profile1D::quadratic(rep.sigma, rep.C),
                    Profile1D::constant(rep.Vbar)};
  const Spectrum1D sp = solve_1d(modulus, 511);
  const HyperbolicBallGap g = hyperbolic_ball_gap(0.5, fast ? 1.0 / 64.0 : 1.0 / 128.0);
  const Domain dom = Domain::ball(vec2(0, 0), 0.5, Chart::PoincareDisk);
  const LogConcavityAudit audit = log_concavity_audit(
      g.detail, dom, sp, 0.0, fast ? 2000 : 10000, seed, 1e-4);
  const bool ok = audit.violations == 0;
  return make_result("acceptance-08-log-concavity-audit", ok,
                     std::to_string(audit.pairs_checked) + " pairs, " +
                         std::to_string(audit.violations) +
                         " violations, min slack = " + fmt(audit.min_slack),
                     t);
}

CheckResult acceptance_09(bool fast, uint64_t) {
  Timer t;
  std::ostringstream detail;
  // dominance against true gaps of hyperbolic balls (N = 2 identity)
  bool dominance_ok = true;
  for (double DH : {0.5, 1.0, 2.0}) {
    const double RE = std::tanh(DH / 4.0);
    const HyperbolicBallGap g =
        hyperbolic_ball_gap(RE, fast ? 1.0 / 64.0 : 1.0 / 128.0);
    const GapBoundReport rep = horoconvex_gap_bound(2, DH, CChoice::automatic(), 129);
    if (rep.bound > g.gap + 1e-6) dominance_ok = false;
    detail << "D_H=" << DH << ": bound=" << fmt(rep.bound) << " gap=" << fmt(g.gap)
           << "; ";
  }
  // positivity over the (N, D_H) grid
  int nonpositive = 0, total = 0;
  const int nd = fast ? 9 : 33;
  for (int N = 2; N <= 10; ++N)
    for (int i = 0; i < nd; ++i) {
      const double DH =
          0.25 * std::pow(8.0 / 0.25, nd == 1 ? 0.0 : static_cast<double>(i) / (nd - 1));
      const GapBoundReport rep =
          horoconvex_gap_bound(N, DH, CChoice::automatic(), 129);
      ++total;
      if (!(rep.bound > 0.0)) ++nonpositive;
    }
  detail << nonpositive << "/" << total << " grid entries nonpositive";
  if (nonpositive > 0)
    detail << " (model gap is a sub-resolution tunneling splitting; see "
              "gap_resolved/vacuous flags)";
  const bool ok = dominance_ok && nonpositive == 0;
  return make_result("acceptance-09-horoconvex-dominance-positivity", ok, detail.str(),
                     t);
}

CheckResult acceptance_10(bool fast, uint64_t) {
  Timer t;
  const std::vector<double> rs = {0.2, 0.1, 0.05, 0.025};
  const CollapseStudy study = appendix_collapse(0.8, rs, fast ? 0.08 : 0.05);
  bool weighted_decreasing = true, euclid_increasing = true;
  for (size_t i = 0; i + 1 < study.rows.size(); ++i) {
    if (!(study.rows[i + 1].gap_weighted < study.rows[i].gap_weighted))
      weighted_decreasing = false;
    if (!(study.rows[i + 1].gap_euclidean > study.rows[i].gap_euclidean))
      euclid_increasing = false;
  }
  const double ratio = study.rows.back().height_ratio;
  const double rel = std::abs(ratio - study.ratio_limit) / study.ratio_limit;
  const bool ok =
      weighted_decreasing && euclid_increasing && rel <= 1e-2 && t.seconds() < 300.0;
  std::ostringstream detail;
  detail << "weighted gaps:";
  for (const auto& r : study.rows) detail << " " << fmt(r.gap_weighted);
  detail << "; euclid gaps:";
  for (const auto& r : study.rows) detail << " " << fmt(r.gap_euclidean);
  detail << "; ratio defect = " << fmt(rel) << "; " << fmt(t.seconds()) << " s";
  return make_result("acceptance-10-appendix-collapse", ok, detail.str(), t);
}

CheckResult acceptance_11(bool fast, uint64_t seed) {
  Timer t;
  // part 1: quadratic-well drift slope from >= 1e5 increments
  DiffusionConfig cfg;
  cfg.space = SpaceForm::euclidean(2);
  cfg.domain = Domain::rectangle(vec2(0, 0), vec2(6, 6));
  cfg.drift_v = quadratic_well();
  cfg.alpha = 0.0;
  cfg.dt = 0.05;
  cfg.t_max = 3.0;
  cfg.trajectories = fast ? 2000 : 9000;
  cfg.seed = seed;
  cfg.x0 = vec2(2.5, 0.0);
  cfg.y0 = vec2(-2.5, 0.0);
  const TrajectoryStats stats = simulate_coupled(cfg);
  const DriftAuditReport audit = drift_audit(stats, cfg, 12, 200);
  const bool slope_ok = audit.slope_vs_xi >= -2.2 && audit.slope_vs_xi <= -1.8 &&
                        (fast || audit.increments_used >= 100000);

  // part 2: full coupling on the unit-square eigen-drift run
  DiffusionConfig sq;
  sq.space = SpaceForm::euclidean(2);
  sq.domain = Domain::rectangle(vec2(0.5, 0.5), vec2(0.5, 0.5));
  sq.drift_v = square_log_eigenfunction();
  sq.alpha = 0.0;
  sq.dt = 1e-3;
  sq.t_max = 5.0;
  sq.trajectories = fast ? 1000 : 10000;
  sq.seed = seed + 1;
  sq.x0 = vec2(0.3, 0.4);
  sq.y0 = vec2(0.7, 0.6);
  const TrajectoryStats cstats = simulate_coupled(sq);
  const double fraction = cstats.coupling_fraction();
  const bool ok =
      slope_ok && fraction == 1.0 && t.seconds() < 300.0;
  return make_result(
      "acceptance-11-sde-drift-coupling", ok,
      "slope = " + fmt(audit.slope_vs_xi) + " (" +
          std::to_string(audit.increments_used) + " increments), coupling fraction = " +
          fmt(fraction) + " (failures " + std::to_string(cstats.failures) + "), " +
          fmt(t.seconds()) + " s",
      t);
}

CheckResult acceptance_12(bool fast, uint64_t seed) {
  Timer t;
  // precondition: log-concavity audit of the unit-square configuration
  const Domain square = Domain::rectangle(vec2(0.5, 0.5), vec2(0.5, 0.5));
  auto one = [](const Vec&) { return 1.0; };
  const EigenResult2D res =
      solve_weighted_2d(square, one, nullptr, fast ? 1.0 / 64.0 : 1.0 / 128.0);
  Modulus1D m{std::sqrt(2.0), Profile1D::constant(1.0), Profile1D::constant(0.0)};
  const Spectrum1D sp = solve_1d(m, 513);
  const LogConcavityAudit audit =
      log_concavity_audit(res, square, sp, 0.0, fast ? 2000 : 10000, seed, 1e-4);

  DiffusionConfig cfg;
  cfg.space = SpaceForm::euclidean(2);
  cfg.domain = square;
  cfg.drift_v = square_log_eigenfunction();
  cfg.alpha = 0.0;
  cfg.dt = 5e-4;
  cfg.t_max = 0.1;
  cfg.trajectories = fast ? 2000 : 10000;
  cfg.seed = seed + 2;
  cfg.x0 = vec2(0.25, 0.5);
  cfg.y0 = vec2(0.75, 0.5);
  cfg.checkpoints = {0.02, 0.05, 0.1};
  const PhiDecayReport rep =
      phi_decay_audit(cfg, m, std::max(0.0, audit.max_violation), 1e-4, 513);
  std::ostringstream detail;
  for (const auto& c : rep.checkpoints)
    detail << "t=" << c.t << ": mean=" << fmt(c.mean_phi)
           << " envelope=" << fmt(c.envelope) << " (3SE " << fmt(3.0 * c.std_err)
           << "); ";
  return make_result("acceptance-12-phi-decay", rep.holds, detail.str(), t);
}

CheckResult acceptance_13(bool, uint64_t) {
  Timer t;
  // frozen 50-digit log-space anchors
  const ClosedFormBound e31 = explicit_horoconvex_bound(3, 1.0, 1.0);
  const ClosedFormBound e21 = explicit_horoconvex_bound(2, 1.0, 1.0);
  const ClosedFormBound a312 = asymptotic_horoconvex_bound(3, 12.0);
  const ClosedFormBound a31 = asymptotic_horoconvex_bound(3, 1.0);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  bool ok = rel(e31.log_value, -5821.88394875943929938) <= 1e-12;
  ok = ok && rel(e31.R, 135611713.7848307503945) <= 1e-12;
  ok = ok && rel(e21.log_value, -3069.653605743577534324) <= 1e-12;
  ok = ok && rel(a312.log_value, -8.083279771041626449869e23) <= 1e-12;
  ok = ok && rel(a31.log_value, -496.9944836460202047133) <= 1e-12;
  // positivity (finite log) and monotone decay on a 20-point grid
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    const double D = 1.0 + 11.0 * i / 19.0;
    const ClosedFormBound b = asymptotic_horoconvex_bound(3, D);
    if (!std::isfinite(b.log_value) || b.log_value >= prev) ok = false;
    prev = b.log_value;
  }
  return make_result("acceptance-13-closed-form-goldens", ok,
                     "log explicit(3,1) = " + fmt(e31.log_value) +
                         ", log asym(3,12) = " + fmt(a312.log_value),
                     t);
}

}  // namespace

const std::vector<CheckSpec>& all_checks() {
  static const std::vector<CheckSpec> checks = {
      {"trig-identity", "trig", check_trig_identity},
      {"geom-mirror-isometry", "geom", check_mirror_isometry},
      {"conformal-potential-consistency", "conformal", check_conformal_consistency},
      {"domains-metrics", "domains", check_domain_metrics},
      {"model1d-richardson-order", "model1d", check_model1d_convergence},
      {"model1d-neumann-ratio", "model1d", check_model1d_neumann},
      {"eigsolve-shortley-weller-order", "eigsolve", check_eigsolve_order},
      {"twopoint-quadratic-z", "twopoint", check_twopoint_quadratic},
      {"moduli-report-recompute", "moduli", check_moduli_recompute},
      {"sde-driftless-flat", "sde", check_sde_driftless},
      {"sde-determinism", "sde", check_sde_determinism},
      {"acceptance-01-1d-exactness", "acceptance", acceptance_01},
      {"acceptance-02-prop43-dominance", "acceptance", acceptance_02},
      {"acceptance-03-lemma41-bracket", "acceptance", acceptance_03},
      {"acceptance-04-riccati", "acceptance", acceptance_04},
      {"acceptance-05-square-anchor", "acceptance", acceptance_05},
      {"acceptance-06-hyperbolic-ball", "acceptance", acceptance_06},
      {"acceptance-07-twopoint-identity", "acceptance", acceptance_07},
      {"acceptance-08-log-concavity-audit", "acceptance", acceptance_08},
      {"acceptance-09-horoconvex-dominance-positivity", "acceptance", acceptance_09},
      {"acceptance-10-appendix-collapse", "acceptance", acceptance_10},
      {"acceptance-11-sde-drift-coupling", "acceptance", acceptance_11},
      {"acceptance-12-phi-decay", "acceptance", acceptance_12},
      {"acceptance-13-closed-form-goldens", "acceptance", acceptance_13},
  };
  return checks;
}

std::vector<CheckResult> run_suite(const std::string& suite, bool fast, uint64_t seed) {
  std::vector<CheckResult> out;
  bool found = false;
  for (const auto& check : all_checks()) {
    if (suite != "all" && check.suite != suite) continue;
    found = true;
    try {
      out.push_back(check.run(fast, seed));
    } catch (const std::exception& err) {
      out.push_back({check.name, false, std::string("exception: ") + err.what(), 0.0});
    }
  }
  if (!found) throw std::invalid_argument("unknown suite: " + suite);
  return out;
}

CheckResult run_acceptance(int criterion, uint64_t seed) {
  if (criterion < 1 || criterion > 13)
    throw std::invalid_argument("acceptance criterion must be 1..13");
  char name[64];
  std::snprintf(name, sizeof(name), "acceptance-%02d", criterion);
  for (const auto& check : all_checks()) {
    if (check.name.rfind(name, 0) == 0) {
      try {
        return check.run(false, seed);
      } catch (const std::exception& err) {
        return {check.name, false, std::string("exception: ") + err.what(), 0.0};
      }
    }
  }
  throw std::logic_error("acceptance criterion not registered");
}

std::string summary_line(const CheckResult& r) {
  std::ostringstream os;
  os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail;
  return os.str();
}

}  // namespace gapforge::verify
