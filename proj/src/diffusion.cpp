#include "gapforge/diffusion.hpp"

#include <algorithm>
#include <cmath>

#include "gapforge/parallel.hpp"
#include "gapforge/rng.hpp"

namespace gapforge {

void DiffusionConfig::validate() const {
  space.validate();
  domain.validate();
  if (dt <= 0.0) throw std::invalid_argument("DiffusionConfig: dt must be positive");
  if (alpha != 0.0 && alpha != 1.0)
    throw std::invalid_argument("DiffusionConfig: alpha must be 0 or 1");
  if (eps_couple > 0.0 && eps_couple < 2.0 * std::sqrt(2.0 * dt))
    throw std::invalid_argument("DiffusionConfig: eps_couple below 2 sqrt(2 dt)");
  if (!domain.contains(x0) || !domain.contains(y0))
    throw std::invalid_argument("DiffusionConfig: start points must be interior");
  for (double c : checkpoints) {
    const double k = c / dt;
    if (std::abs(k - std::round(k)) > 1e-9)
      throw std::invalid_argument("DiffusionConfig: checkpoints must be dt multiples");
  }
}

double TrajectoryStats::coupling_fraction() const {
  int ok = 0, total = 0;
  for (int i = 0; i < trajectories; ++i) {
    if (failed[i]) continue;
    ++total;
    if (coupled[i]) ++ok;
  }
  return total > 0 ? static_cast<double>(ok) / total : 0.0;
}

double TrajectoryStats::quadratic_variation_rate() const {
  double qv = 0.0;
  for (const auto& r : increments) qv += r.dxi * r.dxi;
  return increments.empty() ? 0.0 : qv / (increments.size() * dt);
}

namespace {

struct PairState {
  Vec x, y;
  bool coupled = false;
  bool failed = false;
};

struct Stepper {
  const DiffusionConfig& cfg;
  Philox& gen;

  Vec metric_grad_v(const Vec& p) const {
    if (!cfg.drift_v) return Vec(Vec::Zero(cfg.space.dim));
    const double c = cfg.space.chart_factor(p);
    return Vec(cfg.drift_v->grad(p) / (c * c));
  }

  // One proposed move of the pair with the Gaussian increment dB ~ N(0, dt I).
  // Returns false if either endpoint would exit the domain or the drift
  // displacement dominates the noise scale for this dt.
  bool propose(PairState& st, const Vec& dB, double dt) const {
    const GeodesicFrame fr = geodesic_frame(cfg.space, st.x, st.y);
    const double xi = fr.dist / 2.0;
    const double pull =
        cfg.alpha != 0.0 ? 2.0 * cfg.alpha * tn_k(cfg.space.curvature, xi) : 0.0;

    Vec noise_x = Vec::Zero(cfg.space.dim), noise_y = Vec::Zero(cfg.space.dim);
    const int n = cfg.space.dim;
    for (int i = 0; i < n; ++i) {
      noise_x += dB(i) * fr.frame_x.col(i);
      noise_y += (i == n - 1 ? -dB(i) : dB(i)) * fr.frame_y.col(i);  // mirrored
    }
    const Vec drift_x = Vec(2.0 * metric_grad_v(st.x) + pull * fr.tangent_at_x());
    const Vec drift_y = Vec(2.0 * metric_grad_v(st.y) - pull * fr.tangent_at_y());

    const double noise_scale = std::sqrt(2.0 * dt);
    if (drift_x.norm() * dt > noise_scale || drift_y.norm() * dt > noise_scale)
      return false;  // stiff; integrate on a refined bridge

    const Vec vx = Vec(std::sqrt(2.0) * noise_x + dt * drift_x);
    const Vec vy = Vec(std::sqrt(2.0) * noise_y + dt * drift_y);
    const Vec nx = cfg.space.exp_map(st.x, vx);
    const Vec ny = cfg.space.exp_map(st.y, vy);
    if (!cfg.domain.contains(nx) || !cfg.domain.contains(ny)) return false;
    st.x = nx;
    st.y = ny;
    if (cfg.space.distance(st.x, st.y) < cfg.coupling_threshold()) st.coupled = true;
    return true;
  }

  // Brownian-bridge refinement: the coarse increment is split into two halves
  // consistent in law, so rejected proposals are re-integrated, not resampled.
  bool step(PairState& st, const Vec& dB, double dt, int depth) const {
    PairState trial = st;
    if (propose(trial, dB, dt)) {
      st = trial;
      return true;
    }
    if (depth >= cfg.max_substep_depth) {
      st.failed = true;
      return false;
    }
    const int n = cfg.space.dim;
    Vec half1(n);
    for (int i = 0; i < n; ++i)
      half1(i) = 0.5 * dB(i) + 0.5 * std::sqrt(dt) * gen.normal();
    const Vec half2 = dB - half1;
    if (!step(st, half1, dt / 2.0, depth + 1)) return false;
    if (st.coupled) return true;
    return step(st, half2, dt / 2.0, depth + 1);
  }

  double z_value(const PairState& st) const {
    if (!cfg.drift_v) return 0.0;
    const GeodesicFrame fr = geodesic_frame(cfg.space, st.x, st.y);
    return cfg.drift_v->grad(st.y).dot(fr.tangent_at_y()) -
           cfg.drift_v->grad(st.x).dot(fr.tangent_at_x());
  }
};

}  // namespace

TrajectoryStats simulate_coupled(const DiffusionConfig& cfg) {
  cfg.validate();
  const int M = cfg.trajectories;
  const int n = cfg.space.dim;
  const long steps = std::lround(cfg.t_max / cfg.dt);

  std::vector<double> ckpt = cfg.checkpoints;
  std::sort(ckpt.begin(), ckpt.end());

  TrajectoryStats stats;
  stats.dt = cfg.dt;
  stats.trajectories = M;
  stats.tau.assign(M, cfg.t_max);
  stats.coupled.assign(M, 0);
  stats.failed.assign(M, 0);
  stats.xi_at_checkpoints.assign(ckpt.size(), std::vector<double>(M, 0.0));
  std::vector<std::vector<IncrementRecord>> per_traj(M);

  parallel_for(M, [&](int traj) {
    Philox gen(cfg.seed, static_cast<uint64_t>(traj) + 1);
    Stepper stepper{cfg, gen};
    PairState st;
    st.x = cfg.x0;
    st.y = cfg.y0;
    size_t next_ckpt = 0;
    auto record_checkpoints_up_to = [&](double t, double xi) {
      while (next_ckpt < ckpt.size() && t >= ckpt[next_ckpt] - 1e-12) {
        stats.xi_at_checkpoints[next_ckpt][traj] = xi;
        ++next_ckpt;
      }
    };

    for (long k = 0; k < steps; ++k) {
      const double t = k * cfg.dt;
      if (st.coupled || st.failed) break;
      const double xi_before = cfg.space.distance(st.x, st.y) / 2.0;
      const double F = stepper.z_value(st);
      Vec dB(n);
      for (int i = 0; i < n; ++i) dB(i) = std::sqrt(cfg.dt) * gen.normal();
      if (!stepper.step(st, dB, cfg.dt, 0)) {
        stats.failed[traj] = 1;
        break;
      }
      const double xi_after =
          st.coupled ? 0.0 : cfg.space.distance(st.x, st.y) / 2.0;
      per_traj[traj].push_back({xi_before, xi_after - xi_before, F});
      if (st.coupled) {
        stats.coupled[traj] = 1;
        stats.tau[traj] = t + cfg.dt;
      }
      record_checkpoints_up_to(t + cfg.dt, xi_after);
    }
    // coupled trajectories stay merged: xi == 0 at all later checkpoints
    if (st.coupled || st.failed) record_checkpoints_up_to(cfg.t_max + 1.0, 0.0);
  });

  for (int i = 0; i < M; ++i) {
    if (stats.failed[i]) {
      ++stats.failures;
      continue;
    }
    stats.increments.insert(stats.increments.end(), per_traj[i].begin(),
                            per_traj[i].end());
  }
  return stats;
}

DriftAuditReport drift_audit(const TrajectoryStats& stats, const DiffusionConfig& cfg,
                             int bins, int min_bin_count) {
  if (stats.increments.empty())
    throw std::invalid_argument("drift_audit: no increments recorded");
  const double drift_coeff = cfg.space.dim - 1.0 + 2.0 * cfg.alpha;

  double xi_min = std::numeric_limits<double>::infinity(), xi_max = 0.0;
  for (const auto& r : stats.increments) {
    xi_min = std::min(xi_min, r.xi);
    xi_max = std::max(xi_max, r.xi);
  }
  const double width = std::max(1e-12, (xi_max - xi_min) / bins);

  struct Acc {
    double sum_obs = 0, sum_obs2 = 0, sum_pred = 0, sum_xi = 0;
    int count = 0;
  };
  std::vector<Acc> acc(bins);
  double sxx = 0, sxy = 0, sx = 0, sy = 0, stt = 0, sty = 0;
  const double N = static_cast<double>(stats.increments.size());
  for (const auto& r : stats.increments) {
    const double obs = r.dxi / stats.dt;
    const double tn = tn_k(cfg.space.curvature, r.xi);
    const double pred = -drift_coeff * tn + r.F;
    int b = std::min(bins - 1, static_cast<int>((r.xi - xi_min) / width));
    acc[b].sum_obs += obs;
    acc[b].sum_obs2 += obs * obs;
    acc[b].sum_pred += pred;
    acc[b].sum_xi += r.xi;
    ++acc[b].count;
    sx += r.xi;
    sy += obs;
    sxx += r.xi * r.xi;
    sxy += r.xi * obs;
    stt += tn * tn;
    sty += tn * obs;
  }

  DriftAuditReport rep;
  rep.increments_used = static_cast<int>(stats.increments.size());
  rep.qv_per_time = stats.quadratic_variation_rate();
  const double var_xi = sxx - sx * sx / N;
  rep.slope_vs_xi = var_xi > 0.0 ? (sxy - sx * sy / N) / var_xi : 0.0;
  rep.coeff_vs_tn = stt > 0.0 ? sty / stt : 0.0;

  for (int b = 0; b < bins; ++b) {
    if (acc[b].count < min_bin_count) {
      ++rep.bins_skipped;
      continue;
    }
    DriftBin bin;
    bin.count = acc[b].count;
    bin.xi_mid = acc[b].sum_xi / acc[b].count;
    bin.observed = acc[b].sum_obs / acc[b].count;
    bin.predicted = acc[b].sum_pred / acc[b].count;
    const double var =
        std::max(0.0, acc[b].sum_obs2 / acc[b].count - bin.observed * bin.observed);
    const double se = std::sqrt(var / acc[b].count);
    bin.z = se > 0.0 ? (bin.observed - bin.predicted) / se : 0.0;
    rep.worst_abs_z = std::max(rep.worst_abs_z, std::abs(bin.z));
    rep.bins.push_back(bin);
  }
  if (rep.bins.empty())
    throw std::runtime_error("drift_audit: every bin below the sample floor");
  return rep;
}

PhiDecayReport phi_decay_audit(const DiffusionConfig& cfg, const Modulus1D& modulus,
                               double precondition_violation, double precondition_tol,
                               int grid_n) {
  if (cfg.alpha != 0.0)
    throw std::invalid_argument("phi_decay_audit: requires the alpha = 0 coupling");
  if (precondition_violation > precondition_tol)
    throw std::runtime_error(
        "phi_decay_audit: log-concavity precondition failed (violation " +
        std::to_string(precondition_violation) + ")");
  if (cfg.checkpoints.empty())
    throw std::invalid_argument("phi_decay_audit: no checkpoints configured");

  const Spectrum1D sp = solve_1d(modulus, grid_n);
  PhiDecayReport rep;
  rep.rate = modulus.rho.min_on(modulus.length / 2.0) * sp.gap;
  const double xi0 = cfg.space.distance(cfg.x0, cfg.y0) / 2.0;
  rep.phi0 = sp.phi_ratio(xi0);

  const TrajectoryStats stats = simulate_coupled(cfg);
  std::vector<double> ckpt = cfg.checkpoints;
  std::sort(ckpt.begin(), ckpt.end());
  for (size_t k = 0; k < ckpt.size(); ++k) {
    PhiDecayCheckpoint c;
    c.t = ckpt[k];
    double sum = 0.0, sum2 = 0.0;
    int count = 0;
    for (int i = 0; i < stats.trajectories; ++i) {
      if (stats.failed[i]) continue;
      const double xi = stats.xi_at_checkpoints[k][i];
      const double phi = xi <= 0.0 ? 0.0 : sp.phi_ratio(std::min(xi, sp.length / 2.0));
      sum += phi;
      sum2 += phi * phi;
      ++count;
    }
    c.mean_phi = sum / count;
    const double var = std::max(0.0, sum2 / count - c.mean_phi * c.mean_phi);
    c.std_err = std::sqrt(var / count);
    c.envelope = std::exp(-rep.rate * c.t) * rep.phi0;
    c.holds = c.mean_phi <= c.envelope + 3.0 * c.std_err;
    rep.holds = rep.holds && c.holds;
    rep.checkpoints.push_back(c);
  }
  return rep;
}

}  // namespace gapforge
