#include "gapforge/moduli.hpp"

#include <algorithm>
#include <cmath>

namespace gapforge {

namespace {

constexpr double kPi = M_PI;

std::vector<Vec> domain_sample_grid(const Domain& dom, int per_axis = 48) {
  auto [lo, hi] = dom.bounding_box();
  std::vector<Vec> pts;
  if (dom.dim() == 2) {
    for (int j = 0; j <= per_axis; ++j)
      for (int i = 0; i <= per_axis; ++i) {
        const Vec p = vec2(lo(0) + (hi(0) - lo(0)) * i / per_axis,
                           lo(1) + (hi(1) - lo(1)) * j / per_axis);
        if (dom.contains(p)) pts.push_back(p);
      }
    for (const auto& b : dom.boundary_samples(4 * per_axis)) pts.push_back(b);
  } else {
    // tensor sampling gets expensive; corners + edges + a coarse lattice
    const int n = dom.dim();
    const int per = std::max(5, 24 / n);
    std::vector<int> idx(n, 0);
    while (true) {
      Vec p(n);
      for (int k = 0; k < n; ++k)
        p(k) = lo(k) + (hi(k) - lo(k)) * idx[k] / double(per);
      if (dom.contains(p)) pts.push_back(p);
      int k = 0;
      while (k < n && ++idx[k] > per) idx[k++] = 0;
      if (k == n) break;
    }
  }
  return pts;
}

struct FieldStats {
  double min_rho, max_rho, osc_Rg, osc_rho_inv, sigma_max;
};

FieldStats field_stats(const ConformalFactorSpec& cf, const Domain& dom, int dim) {
  FieldStats st;
  st.min_rho = std::numeric_limits<double>::infinity();
  st.max_rho = 0.0;
  double rg_min = std::numeric_limits<double>::infinity(), rg_max = -rg_min;
  double ri_min = rg_min, ri_max = -rg_min;
  st.sigma_max = -std::numeric_limits<double>::infinity();
  for (const auto& p : domain_sample_grid(dom)) {
    const double rho = cf.rho(p);
    st.min_rho = std::min(st.min_rho, rho);
    st.max_rho = std::max(st.max_rho, rho);
    const double rg = scalar_curvature(cf, dim, cf.base, p);
    rg_min = std::min(rg_min, rg);
    rg_max = std::max(rg_max, rg);
    ri_min = std::min(ri_min, 1.0 / rho);
    ri_max = std::max(ri_max, 1.0 / rho);
    st.sigma_max = std::max(st.sigma_max, max_hessian_eigenvalue_rho(cf, p));
  }
  st.osc_Rg = rg_max - rg_min;
  st.osc_rho_inv = ri_max - ri_min;
  st.sigma_max = std::max(0.0, st.sigma_max);
  return st;
}

// Model solve for the quadratic modulus with the constructed constant Vbar.
struct ModelRun {
  double lam0, Vbar, lam1_bar, gap_solved, gap_closed, gap_used, noise_floor;
  bool resolved, vacuous;
};

ModelRun run_model(double length, double sigma, double C, double lam1_upper,
                   int grid_n) {
  ModelRun r;
  Modulus1D m0{length, Profile1D::quadratic(sigma, C), Profile1D::constant(0.0)};
  const Spectrum1D sp0 = solve_1d(m0, grid_n);
  r.lam0 = sp0.lam1;
  r.Vbar = std::max(0.0, m0.rho.max_on(length / 2.0) * (lam1_upper - r.lam0));
  Modulus1D m{length, Profile1D::quadratic(sigma, C), Profile1D::constant(r.Vbar)};
  const Spectrum1D sp = solve_1d(m, grid_n);
  r.lam1_bar = sp.lam1;
  r.gap_solved = sp.gap;
  r.gap_closed = closed_form_gap_bound(m);
  r.noise_floor = sp.noise_floor;
  r.resolved = sp.gap_resolved && sp.gap > 0.0;
  r.gap_used = std::max(r.resolved ? r.gap_solved : 0.0, r.gap_closed);
  r.vacuous = !(r.gap_used > 0.0);
  return r;
}

std::vector<double> c_grid(double max_rho, const CChoice& choice) {
  if (choice.value) return {*choice.value};
  std::vector<double> out;
  for (int i = 0; i < 32; ++i)
    out.push_back(max_rho * std::pow(10.0, -2.0 + 4.0 * i / 31.0));
  return out;
}

double sphere_diameter(const SpaceForm& sphere, const Domain& dom, int samples = 2048) {
  const auto pts = dom.boundary_samples(samples);
  double best = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); j += std::max<size_t>(1, pts.size() / 512))
      best = std::max(best, sphere.distance(pts[i], pts[j]));
  return best;
}

}  // namespace

ConditionFlags check_conditions(const Modulus1D& m, double curvature, double lam_bar,
                                double lam1, double min_rho, double max_V,
                                double tol) {
  m.validate();
  const double half = m.length / 2.0;
  ConditionFlags out;
  out.condition2 = true;
  out.condition2_worst = 0.0;
  const int samples = 1024;
  for (int i = 0; i <= samples; ++i) {
    const double s = half * i / samples;
    const double rho = m.rho(s, half);
    const double drho = m.rho.derivative(s, half);
    double bracket_d;  // [rho_bar cs_K^2]'(s)
    if (curvature == 0.0) {
      bracket_d = drho;
    } else {
      const double cs = cs_k(curvature, s);
      bracket_d = cs * cs * (drho - 2.0 * tn_k(curvature, s) * rho);
    }
    const double prod = bracket_d * (lam_bar - lam1);
    out.condition2_worst = std::min(out.condition2_worst, prod);
    if (prod < -tol) out.condition2 = false;
  }
  if (curvature > 0.0) {
    out.kpos = m.rho.max_on(half) <= min_rho * (1.0 + 1e-12) &&
               m.V.min_on(half) >= max_V - tol;
  }
  return out;
}

GapBoundReport horoconvex_gap_bound(int dim, double diam_hyperbolic, CChoice C,
                                    int grid_n) {
  if (dim < 2 || diam_hyperbolic <= 0.0)
    throw std::invalid_argument("horoconvex_gap_bound: need N >= 2 and D_H > 0");

  GapBoundReport rep;
  rep.branch = "horoconvex";
  rep.dim = dim;
  rep.diameter = diam_hyperbolic;
  rep.curvature = 0.0;  // Poincare chart over the Euclidean base
  rep.D_E = diam_hyperbolic / 2.0;
  rep.model_length = rep.D_E;

  const CircumradiusBound cb = circumradius_re(dim, diam_hyperbolic);
  rep.R_E = cb.R_E;
  const double om = 1.0 - rep.R_E * rep.R_E;
  rep.max_rho = 4.0 / (om * om);
  rep.min_rho = 4.0;  // factor value at the chart origin; only max enters the bound
  rep.sigma = rep.max_rho * rep.max_rho * (1.0 + 5.0 * rep.R_E * rep.R_E);
  rep.r_in = inradius_from_diameter(diam_hyperbolic);
  rep.lam1_upper = 0.25 + kPi * kPi / (rep.r_in * rep.r_in) +
                   (dim * dim - 1.0) * std::pow(kPi, 4) /
                       (12.0 * std::pow(rep.r_in, 3));
  rep.lam1_source = "savo-borisenko";

  GapBoundReport best = rep;
  bool first = true;
  for (double c : c_grid(rep.max_rho, C)) {
    GapBoundReport cand = rep;
    cand.C = c;
    cand.min_rho_bar = c;
    cand.max_rho_bar = cand.sigma * cand.D_E * cand.D_E / 8.0 + c;
    const ModelRun r = run_model(cand.D_E, cand.sigma, c, cand.lam1_upper, grid_n);
    cand.Vbar = r.Vbar;
    cand.lam0_bar = r.lam0;
    cand.lam1_bar = r.lam1_bar;
    cand.gap_bar_solved = r.gap_solved;
    cand.gap_bar_closed_form = r.gap_closed;
    cand.gap_bar = r.gap_used;
    cand.noise_floor = r.noise_floor;
    cand.gap_resolved = r.resolved;
    cand.vacuous = r.vacuous;
    cand.bound = cand.vacuous ? 0.0 : cand.min_rho_bar / cand.max_rho * cand.gap_bar;

    Modulus1D m{cand.D_E, Profile1D::quadratic(cand.sigma, c),
                Profile1D::constant(cand.Vbar)};
    // V == 0 upstream, rho' >= 0: condition-2 needs lam1_bar >= lam1_upper
    const auto flags =
        check_conditions(m, 0.0, cand.lam1_bar, cand.lam1_upper, cand.min_rho, 0.0);
    cand.condition2_ok =
        flags.condition2 && cand.lam1_bar >= cand.lam1_upper * (1.0 - 1e-8);
    cand.kpos_ok = true;

    if (first || cand.bound > best.bound) {
      best = cand;
      first = false;
    }
  }
  return best;
}

ClosedFormBound explicit_horoconvex_bound(int dim, double diam, double C_N) {
  if (dim < 2 || diam <= 0.0 || C_N <= 0.0)
    throw std::invalid_argument("explicit_horoconvex_bound: bad inputs");
  const double D = diam;
  const double rt = inradius_from_diameter(D);
  const double lam_chain = 0.25 + kPi * kPi / (rt * rt) +
                           (dim * dim - 1.0) * std::pow(kPi, 4) /
                               (12.0 * std::pow(rt, 3));
  const double s2 = 1.0 + 2.0 * dim / (dim + 1.0) * std::pow(std::sinh(D), 2);
  ClosedFormBound out;
  out.R = -kPi * kPi * std::min(1.0, 4.0 / (D * D)) +
          3.0 * std::min(4.0, D * D) * std::pow(s2, 4) * lam_chain;
  const double pref = kPi * kPi / (std::min(4.0, D * D / 2.0) * s2 * s2);
  out.log_value =
      std::log(pref) - C_N * std::min(1.0, D / 2.0) * std::sqrt(std::max(out.R, 0.0));
  out.value = std::exp(out.log_value);
  return out;
}

ClosedFormBound asymptotic_horoconvex_bound(int dim, double diam) {
  if (dim < 2 || diam <= 0.0)
    throw std::invalid_argument("asymptotic_horoconvex_bound: bad inputs");
  const double D = diam;
  ClosedFormBound out;
  out.asymptotic_regime = D >= 4.0 * dim;
  const double pref = kPi * kPi * (dim - 1.0) * (dim - 1.0) * D * D / 16.0;
  double expo;
  if (2.0 * D < 350.0) {
    const double t = 1.0 + 2.0 * std::exp(2.0 * D);
    expo = (dim - 1.0) * D * D * t * t;
  } else {
    expo = std::numeric_limits<double>::infinity();
  }
  out.log_value = std::log(pref) - expo;
  out.value = std::exp(out.log_value);
  return out;
}

namespace {

double lambda1_upper_2d(const Domain& dom, const ConformalFactorSpec& cf, int grid_n) {
  (void)grid_n;
  auto rho = [&](const Vec& p) { return cf.rho(p); };
  auto [lo, hi] = dom.bounding_box();
  const double extent = std::max(hi(0) - lo(0), hi(1) - lo(1));
  const EigenResult2D res = solve_weighted_2d(dom, rho, nullptr, extent / 96.0);
  // inflate by the extrapolation step so the value stays an upper bound
  return res.lam1 + 3.0 * std::abs(res.lam1_raw - res.lam1) + 1e-9 * (1.0 + res.lam1);
}

double lambda1_upper_inscribed(const Domain& dom, double min_rho, int dim) {
  const double r = dom.inradius();
  const double j = bessel_first_zero_halfinteger(dim);
  return j * j / (r * r) / min_rho;
}

}  // namespace

GapBoundReport conformally_flat_bound(const ConformalFactorSpec& cf, const Domain& dom,
                                      int dim, Lambda1Source lam1_source,
                                      std::optional<double> lam1_user, CChoice C,
                                      int grid_n) {
  dom.validate();
  if (cf.base.chart == Chart::SphereStereographic)
    throw std::invalid_argument("conformally_flat_bound: factor must be over a flat base");

  GapBoundReport rep;
  rep.branch = "conformally-flat";
  rep.dim = dim;
  rep.curvature = 0.0;
  const DomainMetrics metrics = diameters(dom);
  rep.D_E = metrics.diameter_euclidean;
  rep.diameter = rep.D_E;
  rep.model_length = rep.D_E;

  const FieldStats st = field_stats(cf, dom, dim);
  rep.min_rho = st.min_rho;
  rep.max_rho = st.max_rho;
  rep.sigma = st.sigma_max;
  rep.osc_Rg = st.osc_Rg;
  rep.correction = (dim - 2.0) / (4.0 * (dim - 1.0)) * st.osc_Rg;
  rep.r_in = dom.inradius();

  if (rep.sigma == 0.0) {
    // concave factor: constant modulus, no lambda_1 needed
    rep.branch = "conformally-flat/concave";
    rep.C = rep.min_rho;
    rep.min_rho_bar = rep.max_rho_bar = rep.min_rho;
    rep.Vbar = 0.0;
    rep.gap_bar = 3.0 * kPi * kPi / (rep.D_E * rep.D_E * rep.min_rho);
    rep.gap_bar_closed_form = rep.gap_bar;
    rep.gap_bar_solved = NAN;
    rep.condition2_ok = true;  // [rho_bar]' == 0
    rep.gap_resolved = true;
    rep.bound = rep.min_rho_bar / rep.max_rho * rep.gap_bar - rep.correction;
    rep.vacuous = false;
    return rep;
  }

  switch (lam1_source) {
    case Lambda1Source::Computed2D:
      if (dom.dim() != 2)
        throw std::invalid_argument(
            "conformally_flat_bound: computed lambda_1 needs a 2D domain; "
            "supply a user bound in higher dimensions");
      rep.lam1_upper = lambda1_upper_2d(dom, cf, grid_n);
      rep.lam1_source = "computed-2d";
      break;
    case Lambda1Source::User:
      if (!lam1_user) throw std::invalid_argument("lambda_1 user bound missing");
      rep.lam1_upper = *lam1_user;
      rep.lam1_source = "user";
      break;
    case Lambda1Source::InscribedBall:
      rep.lam1_upper = lambda1_upper_inscribed(dom, rep.min_rho, dim);
      rep.lam1_source = "inscribed-ball";
      break;
  }

  GapBoundReport best = rep;
  bool first = true;
  for (double c : c_grid(rep.max_rho, C)) {
    GapBoundReport cand = rep;
    cand.C = c;
    cand.min_rho_bar = c;
    cand.max_rho_bar = cand.sigma * cand.D_E * cand.D_E / 8.0 + c;
    const ModelRun r = run_model(cand.D_E, cand.sigma, c, cand.lam1_upper, grid_n);
    cand.Vbar = r.Vbar;
    cand.lam0_bar = r.lam0;
    cand.lam1_bar = r.lam1_bar;
    cand.gap_bar_solved = r.gap_solved;
    cand.gap_bar_closed_form = r.gap_closed;
    cand.gap_bar = r.gap_used;
    cand.noise_floor = r.noise_floor;
    cand.gap_resolved = r.resolved;
    cand.vacuous = r.vacuous;
    cand.bound =
        cand.vacuous ? 0.0
                     : cand.min_rho_bar / cand.max_rho * cand.gap_bar - cand.correction;
    Modulus1D m{cand.D_E, Profile1D::quadratic(cand.sigma, c),
                Profile1D::constant(cand.Vbar)};
    const auto flags =
        check_conditions(m, 0.0, cand.lam1_bar, cand.lam1_upper, cand.min_rho, 0.0);
    cand.condition2_ok =
        flags.condition2 && cand.lam1_bar >= cand.lam1_upper * (1.0 - 1e-8);
    if (first || cand.bound > best.bound) {
      best = cand;
      first = false;
    }
  }
  return best;
}

GapBoundReport sphere_deformation_bound(const ConformalFactorSpec& cf, const Domain& dom,
                                        int dim, double curvature, int grid_n) {
  dom.validate();
  if (curvature <= 0.0)
    throw std::invalid_argument("sphere_deformation_bound: need K > 0");
  const SpaceForm sphere = SpaceForm::sphere(dom.dim(), curvature);

  GapBoundReport rep;
  rep.branch = "sphere-deformation";
  rep.dim = dim;
  rep.curvature = curvature;
  const double D_S = sphere_diameter(sphere, dom);
  rep.D_E = D_S;  // base-metric (sphere) diameter
  rep.diameter = D_S;

  const FieldStats st = field_stats(cf, dom, dim);
  rep.min_rho = st.min_rho;
  rep.max_rho = st.max_rho;
  rep.sigma = st.sigma_max;
  rep.osc_Rg = st.osc_Rg;
  rep.osc_rho_inv = st.osc_rho_inv;
  rep.correction = (dim - 2.0) / (4.0 * (dim - 1.0)) * st.osc_Rg +
                   dim * (dim - 2.0) / 4.0 * st.osc_rho_inv;

  rep.C = rep.min_rho - rep.sigma * D_S * D_S / 8.0;
  rep.min_rho_bar = rep.C;
  rep.max_rho_bar = rep.sigma * D_S * D_S / 8.0 + std::max(rep.C, 0.0);

  // side conditions: C > 0; tn_K defined on [0, D_S/2]; rho_bar' <= 2 tn_K rho_bar
  bool ok = rep.C > 0.0 &&
            std::sqrt(curvature) * D_S / 2.0 < M_PI / 2.0 - 1e-12;
  if (ok) {
    for (int i = 1; i <= 512 && ok; ++i) {
      const double s = D_S / 2.0 * i / 512.0;
      const double rho_bar = rep.sigma * s * s / 2.0 + rep.C;
      ok = rep.sigma * s <= 2.0 * tn_k(curvature, s) * rho_bar * (1.0 + 1e-12);
    }
  }
  rep.kpos_ok = ok && rep.max_rho_bar <= rep.min_rho * (1.0 + 1e-12);
  if (!rep.kpos_ok || rep.C <= 0.0) {
    rep.vacuous = true;
    rep.condition2_ok = false;
    rep.bound = 0.0;
    return rep;
  }

  // model on the stretched interval L = sqrt(max rho / min rho_bar) D_S
  const double L = std::sqrt(rep.max_rho / rep.min_rho_bar) * D_S;
  rep.model_length = L;
  Modulus1D m{L, Profile1D::quadratic(rep.sigma, rep.C), Profile1D::constant(0.0)};
  const Spectrum1D sp = solve_1d(m, grid_n);
  rep.Vbar = 0.0;
  rep.lam0_bar = sp.lam1;
  rep.lam1_bar = sp.lam1;
  rep.gap_bar_solved = sp.gap;
  const double max_rho_bar_L = rep.sigma * L * L / 8.0 + rep.C;
  rep.gap_bar_closed_form =
      3.0 * kPi * kPi / (L * L) * rep.C / (max_rho_bar_L * max_rho_bar_L);
  rep.noise_floor = sp.noise_floor;
  rep.gap_resolved = sp.gap_resolved && sp.gap > 0.0;
  rep.gap_bar = std::max(rep.gap_resolved ? sp.gap : 0.0, rep.gap_bar_closed_form);
  rep.vacuous = !(rep.gap_bar > 0.0);

  // condition-2 with the decreasing bracket needs lam_bar <= lam1; Ling's
  // estimate bounds lam1 below by pi^2/(max rho D_S^2) = pi^2/(C L^2)
  const double ling = kPi * kPi / (rep.max_rho * D_S * D_S);
  rep.lam1_upper = ling;  // here a *lower* bound on lambda_1; recorded for the flag
  rep.lam1_source = "ling";
  const auto flags = check_conditions(m, curvature, rep.lam1_bar, ling, rep.min_rho,
                                      0.0);
  rep.condition2_ok = flags.condition2 && rep.lam1_bar <= ling * (1.0 + 1e-8);
  rep.kpos_ok = rep.kpos_ok && flags.kpos;

  rep.bound = rep.vacuous
                  ? 0.0
                  : rep.min_rho_bar / rep.max_rho * rep.gap_bar - rep.correction;
  return rep;
}

GapBoundReport small_horoconvex_bound(const Domain& dom, int dim, int radius_grid,
                                      int grid_n) {
  dom.validate();
  auto [lo, hi] = dom.bounding_box();
  double chart_extent = 0.0;
  for (int i = 0; i < lo.size(); ++i)
    chart_extent = std::max({chart_extent, std::abs(lo(i)), std::abs(hi(i))});
  if (chart_extent >= 1.0)
    throw std::invalid_argument("small_horoconvex_bound: domain leaves the unit disk");

  GapBoundReport best;
  best.branch = "small-horoconvex";
  best.dim = dim;
  best.vacuous = true;
  bool have_valid = false;
  for (int i = 0; i < radius_grid; ++i) {
    // hemisphere condition: the chart ball |x| < R must contain the domain
    const double margin = chart_extent * (1.0 + 1e-6);
    const double R = margin + (1.0 - margin) * (i + 1.0) / (radius_grid + 1.0);
    if (R >= 1.0) break;
    const ConformalFactorSpec cf = ConformalFactorSpec::sphere_stereo(dim, R);
    GapBoundReport cand = sphere_deformation_bound(cf, dom, dim, 1.0 / (R * R), grid_n);
    cand.branch = "small-horoconvex";
    const bool valid = !cand.vacuous && cand.condition2_ok && cand.kpos_ok;
    if ((valid && (!have_valid || cand.bound > best.bound)) ||
        (!have_valid && i == 0)) {
      best = cand;
      have_valid = have_valid || valid;
    }
  }
  return best;
}

GapBoundReport s1xsn_modulus(const Domain& dom, int dim, Lambda1Source lam1_source,
                             std::optional<double> lam1_user, std::optional<double> C,
                             int grid_n) {
  dom.validate();
  // radial range of the domain: bounded away from the puncture
  double min_r = std::numeric_limits<double>::infinity(), max_r = 0.0;
  for (const auto& p : domain_sample_grid(dom)) {
    min_r = std::min(min_r, p.norm());
    max_r = std::max(max_r, p.norm());
  }
  if (!(min_r > 1e-9))
    throw std::invalid_argument("s1xsn_modulus: domain touches the puncture");

  GapBoundReport rep;
  rep.branch = "s1xsn";
  rep.dim = dim;
  rep.curvature = 0.0;
  const DomainMetrics metrics = diameters(dom);
  rep.D_E = metrics.diameter_euclidean;
  rep.diameter = rep.D_E;
  rep.model_length = rep.D_E;
  rep.min_rho = 1.0 / (max_r * max_r);
  rep.max_rho = 1.0 / (min_r * min_r);
  rep.sigma = 6.0 / std::pow(min_r, 4);
  rep.osc_Rg = 0.0;  // constant scalar curvature (N-1)(N-2); no oscillation term
  rep.correction = 0.0;
  rep.r_in = dom.inradius();

  switch (lam1_source) {
    case Lambda1Source::Computed2D: {
      if (dom.dim() != 2)
        throw std::invalid_argument("s1xsn_modulus: computed lambda_1 needs 2D");
      const ConformalFactorSpec cf = ConformalFactorSpec::inverse_square(2);
      rep.lam1_upper = lambda1_upper_2d(dom, cf, grid_n);
      rep.lam1_source = "computed-2d";
      break;
    }
    case Lambda1Source::User:
      if (!lam1_user) throw std::invalid_argument("lambda_1 user bound missing");
      rep.lam1_upper = *lam1_user;
      rep.lam1_source = "user";
      break;
    case Lambda1Source::InscribedBall:
      rep.lam1_upper = lambda1_upper_inscribed(dom, rep.min_rho, dim);
      rep.lam1_source = "inscribed-ball";
      break;
  }

  const double c = C.value_or(rep.min_rho);
  rep.C = c;
  rep.min_rho_bar = c;
  rep.max_rho_bar = rep.sigma * rep.D_E * rep.D_E / 8.0 + c;
  const ModelRun r = run_model(rep.D_E, rep.sigma, c, rep.lam1_upper, grid_n);
  rep.Vbar = r.Vbar;
  rep.lam0_bar = r.lam0;
  rep.lam1_bar = r.lam1_bar;
  rep.gap_bar_solved = r.gap_solved;
  rep.gap_bar_closed_form = r.gap_closed;
  rep.gap_bar = r.gap_used;
  rep.noise_floor = r.noise_floor;
  rep.gap_resolved = r.resolved;
  rep.vacuous = r.vacuous;
  rep.bound = rep.vacuous ? 0.0 : rep.min_rho_bar / rep.max_rho * rep.gap_bar;

  Modulus1D m{rep.D_E, Profile1D::quadratic(rep.sigma, c), Profile1D::constant(rep.Vbar)};
  const auto flags =
      check_conditions(m, 0.0, rep.lam1_bar, rep.lam1_upper, rep.min_rho, 0.0);
  rep.condition2_ok = flags.condition2 && rep.lam1_bar >= rep.lam1_upper * (1.0 - 1e-8);
  return rep;
}

double bessel_first_zero_halfinteger(int dim) {
  // first zeros of J_{N/2 - 1}, N = 2..12
  static const double table[] = {
      2.404825557695773,  // nu = 0
      3.141592653589793,  // 1/2
      3.831705970207512,  // 1
      4.493409457909064,  // 3/2
      5.135622301840683,  // 2
      5.763459196894550,  // 5/2
      6.380161895923984,  // 3
      6.987932000500519,  // 7/2
      7.588342434503802,  // 4
      8.182561452571242,  // 9/2
      8.771483815959954,  // 5
  };
  if (dim < 2 || dim > 12)
    throw std::invalid_argument("bessel_first_zero_halfinteger: N in [2, 12]");
  return table[dim - 2];
}

}  // namespace gapforge
