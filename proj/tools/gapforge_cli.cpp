// gapforge: fundamental-gap bounds for weighted Schrodinger problems on convex
// chart domains, with PDE/1D eigensolvers, a two-point identity checker and a
// mirror-coupled diffusion simulator. Subcommands mirror the library pipelines;
// every run writes a JSON report (with the resolved config embedded), CSV
// tables and a gnuplot .dat/.plt pair.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "gapforge/diffusion.hpp"
#include "gapforge/moduli.hpp"
#include "gapforge/report_io.hpp"
#include "gapforge/rng.hpp"
#include "gapforge/twopoint.hpp"
#include "support/verification.hpp"

namespace gf = gapforge;
namespace fs = std::filesystem;

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw CLI::ValidationError("empty list: " + s);
  return out;
}

std::vector<int> parse_int_range(const std::string& s) {
  // "2..5" or "2,3,7"
  const auto dots = s.find("..");
  std::vector<int> out;
  if (dots != std::string::npos) {
    const int a = std::stoi(s.substr(0, dots));
    const int b = std::stoi(s.substr(dots + 2));
    for (int v = a; v <= b; ++v) out.push_back(v);
  } else {
    for (double v : parse_list(s)) out.push_back(static_cast<int>(v));
  }
  return out;
}

gf::Chart parse_chart(const std::string& s) {
  if (s == "euclidean") return gf::Chart::Euclidean;
  if (s == "disk") return gf::Chart::PoincareDisk;
  throw CLI::ValidationError("unknown chart: " + s + " (euclidean|disk)");
}

// "rect:cx,cy,hx,hy" | "ball:cx,cy,r" | "polygon:x1,y1;x2,y2;..."
gf::Domain parse_domain(const std::string& s, gf::Chart chart) {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("domain literal needs kind: prefix: " + s);
  const std::string kind = s.substr(0, colon), body = s.substr(colon + 1);
  if (kind == "rect") {
    const auto v = parse_list(body);
    if (v.size() != 4) throw CLI::ValidationError("rect:cx,cy,hx,hy");
    return gf::Domain::rectangle(gf::vec2(v[0], v[1]), gf::vec2(v[2], v[3]), chart);
  }
  if (kind == "ball") {
    const auto v = parse_list(body);
    if (v.size() != 3) throw CLI::ValidationError("ball:cx,cy,r");
    return gf::Domain::ball(gf::vec2(v[0], v[1]), v[2], chart);
  }
  if (kind == "polygon") {
    std::vector<gf::Vec> verts;
    std::stringstream ss(body);
    std::string pt;
    while (std::getline(ss, pt, ';')) {
      const auto v = parse_list(pt);
      if (v.size() != 2) throw CLI::ValidationError("polygon vertex needs x,y");
      verts.push_back(gf::vec2(v[0], v[1]));
    }
    return gf::Domain::polygon(verts, chart);
  }
  throw CLI::ValidationError("unknown domain kind: " + kind);
}

// "const:v" | "quad:sigma,c"
gf::Profile1D parse_profile(const std::string& s) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon == std::string::npos ? s.size() : colon);
  if (kind == "const") return gf::Profile1D::constant(std::stod(s.substr(colon + 1)));
  if (kind == "quad") {
    const auto v = parse_list(s.substr(colon + 1));
    if (v.size() != 2) throw CLI::ValidationError("quad:sigma,c");
    return gf::Profile1D::quadratic(v[0], v[1]);
  }
  throw CLI::ValidationError("unknown profile: " + s + " (const:v|quad:sigma,c)");
}

// "const:v" | "disk" | "invsq"
std::function<double(const gf::Vec&)> parse_weight(const std::string& s) {
  if (s == "disk")
    return [](const gf::Vec& p) {
      const double t = 1.0 - p.squaredNorm();
      return 4.0 / (t * t);
    };
  if (s == "invsq") return [](const gf::Vec& p) { return 1.0 / p.squaredNorm(); };
  const auto colon = s.find(':');
  if (colon != std::string::npos && s.substr(0, colon) == "const") {
    const double v = std::stod(s.substr(colon + 1));
    return [v](const gf::Vec&) { return v; };
  }
  throw CLI::ValidationError("unknown weight: " + s + " (const:v|disk|invsq)");
}

struct RunOutput {
  fs::path dir;
  std::string name;
  gf::Json report;
  int exit_code = 0;

  fs::path stem() const { return dir / name; }
  void finish(const std::string& config_dump) {
    fs::create_directories(dir);
    report["config"] = config_dump;
    gf::write_text_file((dir / (name + ".json")).string(), report.dump(2) + "\n");
  }
};

void add_output_options(CLI::App* cmd, std::string* out, std::string* name) {
  cmd->add_option("--out", *out, "output directory")->capture_default_str();
  cmd->add_option("--name", *name, "output file stem")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gapforge: fundamental-gap bounds and verification experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file; flags override");
  app.allow_config_extras(false);

  int exit_code = 0;

  // ------------------------------------------------------------ model1d
  auto* cmd_m1 = app.add_subcommand("model1d", "solve the 1D comparison model");
  std::string m1_rho = "const:1", m1_V = "const:0", m1_out = "out", m1_name = "model1d";
  double m1_D = M_PI;
  int m1_n = 257;
  cmd_m1->add_option("--rho", m1_rho, "weight profile (const:v|quad:sigma,c)")
      ->capture_default_str();
  cmd_m1->add_option("--V", m1_V, "potential profile")->capture_default_str();
  cmd_m1->add_option("--D", m1_D, "interval length")->capture_default_str();
  cmd_m1->add_option("--n", m1_n, "interior grid nodes")->capture_default_str();
  add_output_options(cmd_m1, &m1_out, &m1_name);
  cmd_m1->callback([&]() {
    gf::Modulus1D m{m1_D, parse_profile(m1_rho), parse_profile(m1_V)};
    const gf::Spectrum1D sp = gf::solve_1d(m, m1_n);
    RunOutput run{m1_out, m1_name, {}};
    run.report["spectrum"] = gf::to_json(sp);
    run.report["bracket1_lower"] = gf::eigenvalue_bracket(m, 1).lower;
    run.report["bracket1_upper"] = gf::eigenvalue_bracket(m, 1).upper;
    if (m.V.min_on(m.length / 2.0) >= 0.0)
      run.report["closed_form_gap_bound"] = gf::closed_form_gap_bound(m);
    gf::CsvTable table({"s", "phi1", "phi2"});
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < sp.n; ++i) {
      table.add_row_doubles({sp.s[i], sp.phi1[i], sp.phi2[i]});
      rows.push_back({sp.s[i], sp.phi1[i], sp.phi2[i]});
    }
    gf::write_text_file(run.stem().string() + ".csv", table.str());
    gf::write_gnuplot_pair(run.stem().string(), "1D model eigenfunctions",
                           {"s", "phi1", "phi2"}, rows);
    run.finish(app.config_to_str(true, false));
    std::cout << "lam1 = " << gf::format_double(sp.lam1)
              << "  lam2 = " << gf::format_double(sp.lam2)
              << "  gap = " << gf::format_double(sp.gap) << "\n";
    if (!sp.gap_resolved) exit_code = std::max(exit_code, 2);
  });

  // ------------------------------------------------- horoconvex-bound sweep
  auto* cmd_h = app.add_subcommand("horoconvex-bound",
                                   "diameter-only horoconvex gap bound sweep");
  std::string h_dims = "2..3", h_diams = "0.5,1,2", h_C = "auto", h_out = "out",
              h_name = "horoconvex";
  int h_n = 257;
  cmd_h->add_option("--dims", h_dims, "dimensions, e.g. 2..5 or 2,4")
      ->capture_default_str();
  cmd_h->add_option("--diams", h_diams, "hyperbolic diameters, comma list")
      ->capture_default_str();
  cmd_h->add_option("--C", h_C, "modulus constant (auto|value)")->capture_default_str();
  cmd_h->add_option("--n", h_n, "1D grid nodes")->capture_default_str();
  add_output_options(cmd_h, &h_out, &h_name);
  cmd_h->callback([&]() {
    const gf::CChoice choice = h_C == "auto" ? gf::CChoice::automatic()
                                             : gf::CChoice::fixed(std::stod(h_C));
    RunOutput run{h_out, h_name, {}};
    gf::CsvTable table(gf::gap_report_csv_header());
    std::vector<std::vector<double>> rows;
    run.report["reports"] = gf::Json::array();
    bool any_vacuous = false;
    for (int N : parse_int_range(h_dims))
      for (double D : parse_list(h_diams)) {
        const gf::GapBoundReport rep = gf::horoconvex_gap_bound(N, D, choice, h_n);
        table.add_row(gf::gap_report_csv_row(rep));
        run.report["reports"].push_back(gf::to_json(rep));
        rows.push_back({D, static_cast<double>(N), rep.bound});
        any_vacuous = any_vacuous || rep.vacuous || !rep.condition2_ok;
      }
    gf::write_text_file(run.stem().string() + ".csv", table.str());
    gf::write_gnuplot_pair(run.stem().string(), "horoconvex bound sweep",
                           {"D_H", "N", "bound"}, rows);
    run.finish(app.config_to_str(true, false));
    std::cout << "wrote " << rows.size() << " reports to " << run.stem().string()
              << ".{json,csv,dat,plt}\n";
    if (any_vacuous) exit_code = std::max(exit_code, 2);
  });

  // ----------------------------------------------------------------- bound
  auto* cmd_b = app.add_subcommand("bound", "conformally-flat / sphere / s1xsn bounds");
  std::string b_pipe = "conformally-flat", b_cf = "poincare", b_dom = "ball:0,0,0.4",
              b_chart = "euclidean", b_lam1 = "inscribed", b_out = "out",
              b_name = "bound";
  int b_dim = 2, b_n = 257;
  double b_K = 1.0;
  cmd_b->add_option("--pipeline", b_pipe,
                    "conformally-flat|sphere|small-horoconvex|s1xsn")
      ->capture_default_str();
  cmd_b->add_option("--cf", b_cf, "factor: zero|poincare|invsq|sphere:R")
      ->capture_default_str();
  cmd_b->add_option("--domain", b_dom, "domain literal")->capture_default_str();
  cmd_b->add_option("--chart", b_chart, "euclidean|disk")->capture_default_str();
  cmd_b->add_option("--dim", b_dim, "ambient dimension N")->capture_default_str();
  cmd_b->add_option("--K", b_K, "sphere curvature for the sphere pipeline")
      ->capture_default_str();
  cmd_b->add_option("--lam1", b_lam1, "computed|inscribed|user:value")
      ->capture_default_str();
  cmd_b->add_option("--n", b_n, "1D grid nodes")->capture_default_str();
  add_output_options(cmd_b, &b_out, &b_name);
  cmd_b->callback([&]() {
    const gf::Domain dom = parse_domain(b_dom, parse_chart(b_chart));
    gf::Lambda1Source src = gf::Lambda1Source::InscribedBall;
    std::optional<double> lam1_user;
    if (b_lam1 == "computed")
      src = gf::Lambda1Source::Computed2D;
    else if (b_lam1.rfind("user:", 0) == 0) {
      src = gf::Lambda1Source::User;
      lam1_user = std::stod(b_lam1.substr(5));
    }
    gf::ConformalFactorSpec cf;
    if (b_cf == "zero")
      cf = gf::ConformalFactorSpec::zero(b_dim);
    else if (b_cf == "poincare")
      cf = gf::ConformalFactorSpec::poincare_disk(b_dim);
    else if (b_cf == "invsq")
      cf = gf::ConformalFactorSpec::inverse_square(b_dim);
    else if (b_cf.rfind("sphere:", 0) == 0)
      cf = gf::ConformalFactorSpec::sphere_stereo(b_dim, std::stod(b_cf.substr(7)));
    else
      throw CLI::ValidationError("unknown factor: " + b_cf);

    gf::GapBoundReport rep;
    if (b_pipe == "conformally-flat")
      rep = gf::conformally_flat_bound(cf, dom, b_dim, src, lam1_user,
                                       gf::CChoice::automatic(), b_n);
    else if (b_pipe == "sphere")
      rep = gf::sphere_deformation_bound(cf, dom, b_dim, b_K, b_n);
    else if (b_pipe == "small-horoconvex")
      rep = gf::small_horoconvex_bound(dom, b_dim, 24, b_n);
    else if (b_pipe == "s1xsn")
      rep = gf::s1xsn_modulus(dom, b_dim, src, lam1_user, std::nullopt, b_n);
    else
      throw CLI::ValidationError("unknown pipeline: " + b_pipe);

    RunOutput run{b_out, b_name, {}};
    run.report["report"] = gf::to_json(rep);
    gf::CsvTable table(gf::gap_report_csv_header());
    table.add_row(gf::gap_report_csv_row(rep));
    gf::write_text_file(run.stem().string() + ".csv", table.str());
    gf::write_gnuplot_pair(run.stem().string(), "gap bound",
                           {"diameter", "bound"}, {{rep.diameter, rep.bound}});
    run.finish(app.config_to_str(true, false));
    std::cout << "branch " << rep.branch << ": bound = " << gf::format_double(rep.bound)
              << (rep.vacuous ? " (vacuous)" : "") << "\n";
    if (rep.vacuous || !rep.condition2_ok || !rep.kpos_ok)
      exit_code = std::max(exit_code, 2);
  });

  // --------------------------------------------------------------- pde-gap
  auto* cmd_p = app.add_subcommand("pde-gap", "2D weighted Dirichlet eigensolve");
  std::string p_dom = "rect:0.5,0.5,0.5,0.5", p_chart = "euclidean",
              p_rho = "const:1", p_out = "out", p_name = "pde";
  double p_h = 1.0 / 128.0;
  bool p_export = false;
  cmd_p->add_option("--domain", p_dom, "domain literal")->capture_default_str();
  cmd_p->add_option("--chart", p_chart, "euclidean|disk")->capture_default_str();
  cmd_p->add_option("--rho", p_rho, "weight (const:v|disk|invsq)")
      ->capture_default_str();
  cmd_p->add_option("--h", p_h, "grid spacing")->capture_default_str();
  cmd_p->add_flag("--export-eigs", p_export, "write eigenfunction grid CSV");
  add_output_options(cmd_p, &p_out, &p_name);
  cmd_p->callback([&]() {
    const gf::Domain dom = parse_domain(p_dom, parse_chart(p_chart));
    const gf::EigenResult2D res =
        gf::solve_weighted_2d(dom, parse_weight(p_rho), nullptr, p_h);
    RunOutput run{p_out, p_name, {}};
    run.report["lam1"] = res.lam1;
    run.report["lam2"] = res.lam2;
    run.report["gap"] = res.gap;
    run.report["lam1_raw"] = res.lam1_raw;
    run.report["lam2_raw"] = res.lam2_raw;
    run.report["residual1"] = res.residual1;
    run.report["residual2"] = res.residual2;
    run.report["boundary"] = res.boundary_tag;
    run.report["interior_nodes"] = res.grid.interior_count();
    if (p_export)
      gf::write_text_file(run.stem().string() + ".csv",
                          gf::eigenfunction_csv(res).str());
    gf::write_gnuplot_pair(run.stem().string(), "eigenvalues",
                           {"which", "lambda"},
                           {{1.0, res.lam1}, {2.0, res.lam2}});
    run.finish(app.config_to_str(true, false));
    std::cout << "lam1 = " << gf::format_double(res.lam1)
              << "  lam2 = " << gf::format_double(res.lam2)
              << "  gap = " << gf::format_double(res.gap) << "\n";
  });

  // ------------------------------------------------------ appendix-collapse
  auto* cmd_a = app.add_subcommand("appendix-collapse",
                                   "collapsing disk-chart rectangles experiment");
  std::string a_r = "0.2,0.1,0.05", a_out = "out", a_name = "collapse";
  double a_L = 0.8, a_h = 0.05;
  cmd_a->add_option("--L", a_L, "half-width")->capture_default_str();
  cmd_a->add_option("--r", a_r, "half-heights, comma list")->capture_default_str();
  cmd_a->add_option("--h", a_h, "baseline grid spacing")->capture_default_str();
  add_output_options(cmd_a, &a_out, &a_name);
  cmd_a->callback([&]() {
    const gf::CollapseStudy study = gf::appendix_collapse(a_L, parse_list(a_r), a_h);
    RunOutput run{a_out, a_name, {}};
    run.report["study"] = gf::to_json(study);
    gf::CsvTable table({"r", "h_used", "gap_weighted", "gap_euclidean", "height_left",
                        "height_neck", "height_ratio"});
    std::vector<std::vector<double>> rows;
    for (const auto& r : study.rows) {
      table.add_row_doubles({r.r, r.h_used, r.gap_weighted, r.gap_euclidean,
                             r.height_left, r.height_neck, r.height_ratio});
      rows.push_back({r.r, r.gap_weighted, r.gap_euclidean, r.height_ratio});
    }
    gf::write_text_file(run.stem().string() + ".csv", table.str());
    gf::write_gnuplot_pair(run.stem().string(), "collapsing rectangles",
                           {"r", "gap_weighted", "gap_euclidean", "height_ratio"},
                           rows);
    run.finish(app.config_to_str(true, false));
    for (const auto& r : study.rows)
      std::cout << "r = " << r.r
                << ": weighted gap = " << gf::format_double(r.gap_weighted)
                << ", euclidean gap = " << gf::format_double(r.gap_euclidean) << "\n";
  });

  // -------------------------------------------------------- two-point-check
  auto* cmd_t = app.add_subcommand("two-point-check",
                                   "finite-difference check of the Z identity");
  std::string t_sub = "euclid", t_out = "out", t_name = "twopoint";
  int t_pairs = 100;
  double t_h = 1e-3;
  uint64_t t_seed = 2024;
  cmd_t->add_option("--substrate", t_sub, "euclid|sphere")->capture_default_str();
  cmd_t->add_option("--pairs", t_pairs, "pair count")->capture_default_str();
  cmd_t->add_option("--h", t_h, "FD step")->capture_default_str();
  cmd_t->add_option("--seed", t_seed, "RNG seed")->capture_default_str();
  add_output_options(cmd_t, &t_out, &t_name);
  cmd_t->callback([&]() {
    // reuse the registered acceptance-style check for the summary, but emit a
    // per-pair table here
    gf::Philox gen(t_seed, 51);
    const bool sphere = t_sub == "sphere";
    gf::SpaceForm space =
        sphere ? gf::SpaceForm::sphere(2, 1.0) : gf::SpaceForm::euclidean(2);
    gf::ScalarField v;
    if (sphere) {
      v = gf::ScalarField{
          [](const gf::Vec& p) {
            const double r2 = p.squaredNorm();
            return (r2 - 1.0) / (r2 + 1.0);
          },
          [](const gf::Vec& p) {
            const double q = 1.0 + p.squaredNorm();
            return gf::Vec(4.0 * p / (q * q));
          },
          [](const gf::Vec& p) {
            const double q = 1.0 + p.squaredNorm();
            return gf::Mat(4.0 / (q * q) * gf::Mat::Identity(2, 2) -
                           16.0 / (q * q * q) * p * p.transpose());
          }};
    } else {
      v = gf::ScalarField{
          [](const gf::Vec& p) { return -0.5 * p.squaredNorm() + p(0) * p(0) * p(1); },
          [](const gf::Vec& p) {
            return gf::Vec(gf::vec2(-p(0) + 2.0 * p(0) * p(1), -p(1) + p(0) * p(0)));
          },
          [](const gf::Vec& p) {
            gf::Mat H(2, 2);
            H << -1.0 + 2.0 * p(1), 2.0 * p(0), 2.0 * p(0), -1.0;
            return H;
          }};
    }
    gf::TwoPointContext ctx{space, v};
    RunOutput run{t_out, t_name, {}};
    gf::CsvTable table({"d", "residual_h", "residual_h2", "order"});
    std::vector<std::vector<double>> rows;
    double worst = 0.0;
    int done = 0;
    while (done < t_pairs) {
      gf::Vec x = gf::vec2(0.9 * (gen.uniform() - 0.5), 0.9 * (gen.uniform() - 0.5));
      gf::Vec y = gf::vec2(0.9 * (gen.uniform() - 0.5), 0.9 * (gen.uniform() - 0.5));
      const double d = space.distance(x, y);
      if (d < 0.1 || d > 1.2) continue;
      const auto r1 = gf::hessian_identity_residual(ctx, x, y, t_h);
      const auto r2 = gf::hessian_identity_residual(ctx, x, y, t_h / 2.0);
      const double order = std::log2(r1.residual / std::max(r2.residual, 1e-300));
      table.add_row_doubles({d, r1.residual, r2.residual, order});
      rows.push_back({d, r1.residual, r2.residual});
      worst = std::max(worst, r1.residual);
      ++done;
    }
    run.report["pairs"] = t_pairs;
    run.report["max_residual"] = worst;
    gf::write_text_file(run.stem().string() + ".csv", table.str());
    gf::write_gnuplot_pair(run.stem().string(), "two-point identity residuals",
                           {"d", "residual_h", "residual_h_over_2"}, rows);
    run.finish(app.config_to_str(true, false));
    std::cout << "max residual over " << t_pairs << " pairs: "
              << gf::format_double(worst) << "\n";
  });

  // -------------------------------------------------------------- sde-couple
  auto* cmd_s = app.add_subcommand("sde-couple", "mirror-coupled diffusion run");
  std::string s_preset = "square-eigs", s_out = "out", s_name = "sde";
  int s_M = 1000;
  double s_dt = 1e-3, s_T = 5.0, s_alpha = 0.0;
  uint64_t s_seed = 1;
  cmd_s->add_option("--preset", s_preset, "square-eigs|box-quadratic|box-driftless")
      ->capture_default_str();
  cmd_s->add_option("--M", s_M, "trajectories")->capture_default_str();
  cmd_s->add_option("--dt", s_dt, "time step")->capture_default_str();
  cmd_s->add_option("--T", s_T, "horizon")->capture_default_str();
  cmd_s->add_option("--alpha", s_alpha, "coupling drift (0 or 1)")
      ->capture_default_str();
  cmd_s->add_option("--seed", s_seed, "master seed")->capture_default_str();
  add_output_options(cmd_s, &s_out, &s_name);
  cmd_s->callback([&]() {
    gf::DiffusionConfig cfg;
    cfg.space = gf::SpaceForm::euclidean(2);
    cfg.alpha = s_alpha;
    cfg.dt = s_dt;
    cfg.t_max = s_T;
    cfg.trajectories = s_M;
    cfg.seed = s_seed;
    if (s_preset == "square-eigs") {
      cfg.domain = gf::Domain::rectangle(gf::vec2(0.5, 0.5), gf::vec2(0.5, 0.5));
      cfg.drift_v = gf::ScalarField{
          [](const gf::Vec& p) {
            return std::log(std::sin(M_PI * p(0)) * std::sin(M_PI * p(1)));
          },
          [](const gf::Vec& p) {
            return gf::Vec(gf::vec2(M_PI / std::tan(M_PI * p(0)),
                                    M_PI / std::tan(M_PI * p(1))));
          },
          [](const gf::Vec& p) {
            gf::Mat H = gf::Mat::Zero(2, 2);
            const double sx = std::sin(M_PI * p(0)), sy = std::sin(M_PI * p(1));
            H(0, 0) = -M_PI * M_PI / (sx * sx);
            H(1, 1) = -M_PI * M_PI / (sy * sy);
            return H;
          }};
      cfg.x0 = gf::vec2(0.3, 0.4);
      cfg.y0 = gf::vec2(0.7, 0.6);
    } else if (s_preset == "box-quadratic") {
      cfg.domain = gf::Domain::rectangle(gf::vec2(0, 0), gf::vec2(6, 6));
      cfg.drift_v = gf::ScalarField{
          [](const gf::Vec& p) { return -0.5 * p.squaredNorm(); },
          [](const gf::Vec& p) { return gf::Vec(-p); },
          [](const gf::Vec& p) {
            return gf::Mat(-gf::Mat::Identity(p.size(), p.size()));
          }};
      cfg.x0 = gf::vec2(2.5, 0.0);
      cfg.y0 = gf::vec2(-2.5, 0.0);
    } else if (s_preset == "box-driftless") {
      cfg.domain = gf::Domain::rectangle(gf::vec2(0, 0), gf::vec2(8, 8));
      cfg.x0 = gf::vec2(-1.0, 0.3);
      cfg.y0 = gf::vec2(1.2, -0.4);
    } else {
      throw CLI::ValidationError("unknown preset: " + s_preset);
    }
    const gf::TrajectoryStats stats = gf::simulate_coupled(cfg);
    const gf::DriftAuditReport audit = gf::drift_audit(stats, cfg, 12, 50);
    RunOutput run{s_out, s_name, {}};
    run.report["coupling_fraction"] = stats.coupling_fraction();
    run.report["failures"] = stats.failures;
    run.report["audit"] = gf::to_json(audit);
    gf::CsvTable table({"trajectory", "tau", "censored"});
    for (int i = 0; i < stats.trajectories; ++i)
      table.add_row({std::to_string(i), gf::format_double(stats.tau[i]),
                     stats.coupled[i] ? "0" : "1"});
    gf::write_text_file(run.stem().string() + ".csv", table.str());
    gf::CsvTable bins({"xi_mid", "count", "observed", "predicted", "z"});
    std::vector<std::vector<double>> rows;
    for (const auto& b : audit.bins) {
      bins.add_row_doubles(
          {b.xi_mid, static_cast<double>(b.count), b.observed, b.predicted, b.z});
      rows.push_back({b.xi_mid, b.observed, b.predicted});
    }
    gf::write_text_file(run.stem().string() + "_drift.csv", bins.str());
    gf::write_gnuplot_pair(run.stem().string(), "binned drift of xi",
                           {"xi", "observed", "predicted"}, rows);
    run.finish(app.config_to_str(true, false));
    std::cout << "coupling fraction = " << gf::format_double(stats.coupling_fraction())
              << ", worst |z| = " << gf::format_double(audit.worst_abs_z)
              << ", QV rate = " << gf::format_double(audit.qv_per_time) << "\n";
    if (stats.failures > 0) exit_code = std::max(exit_code, 2);
  });

  // ------------------------------------------------------------------ verify
  auto* cmd_v = app.add_subcommand("verify", "run named invariant/acceptance suites");
  std::string v_suite = "all", v_out = "out", v_name = "verify";
  bool v_fast = false;
  uint64_t v_seed = 2024;
  int v_criterion = 0;
  cmd_v->add_option("--suite", v_suite,
                    "all|trig|geom|conformal|domains|model1d|eigsolve|twopoint|"
                    "moduli|sde|acceptance")
      ->capture_default_str();
  cmd_v->add_flag("--fast", v_fast, "reduced sample counts");
  cmd_v->add_option("--seed", v_seed, "RNG seed")->capture_default_str();
  cmd_v->add_option("--criterion", v_criterion, "run one acceptance criterion (1..13)");
  add_output_options(cmd_v, &v_out, &v_name);
  cmd_v->callback([&]() {
    std::vector<gf::verify::CheckResult> results;
    if (v_criterion > 0)
      results.push_back(gf::verify::run_acceptance(v_criterion, v_seed));
    else
      results = gf::verify::run_suite(v_suite, v_fast, v_seed);
    RunOutput run{v_out, v_name, {}};
    run.report["results"] = gf::Json::array();
    int failures = 0;
    for (const auto& r : results) {
      std::cout << gf::verify::summary_line(r) << "\n";
      gf::Json jr;
      jr["name"] = r.name;
      jr["pass"] = r.pass;
      jr["detail"] = r.detail;
      jr["seconds"] = r.seconds;
      run.report["results"].push_back(jr);
      if (!r.pass) ++failures;
    }
    run.report["failures"] = failures;
    run.finish(app.config_to_str(true, false));
    std::cout << (failures == 0 ? "all checks passed"
                                : std::to_string(failures) + " check(s) failed")
              << "\n";
    if (failures > 0) exit_code = std::max(exit_code, 2);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
