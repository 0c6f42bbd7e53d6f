#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gapforge/conformal.hpp"
#include "gapforge/domain.hpp"
#include "gapforge/geometry.hpp"
#include "gapforge/model1d.hpp"

namespace gapforge {

/// Mirror-coupled diffusion configuration. The pair (X, Y) is driven by common
/// noise at X and its mirror image at Y, plus the drift 2 grad v and, for
/// alpha = 1, the attracting tangential term 2 tn_K(xi) gamma'.
struct DiffusionConfig {
  SpaceForm space = SpaceForm::euclidean(2);
  Domain domain;
  std::optional<ScalarField> drift_v;  // nullopt: v == 0
  double alpha = 0.0;                  // 0 or 1
  double dt = 1e-3;
  double t_max = 5.0;
  int trajectories = 1000;
  uint64_t seed = 1;
  double eps_couple = 0.0;  // 0: default 2 sqrt(2 dt)
  int max_substep_depth = 12;
  Vec x0, y0;
  std::vector<double> checkpoints;  // multiples of dt; xi recorded per trajectory

  double coupling_threshold() const {
    return eps_couple > 0.0 ? eps_couple : 2.0 * std::sqrt(2.0 * dt);
  }
  void validate() const;
};

struct IncrementRecord {
  double xi;   // state before the step
  double dxi;  // realized increment over one top-level step
  double F;    // Z(X, Y) before the step (0 for v == 0)
};

struct TrajectoryStats {
  std::vector<double> tau;        // coupling time, censored at t_max
  std::vector<uint8_t> coupled;   // 1 if coupled before t_max
  std::vector<uint8_t> failed;    // 1 if sub-stepping was exhausted (excluded)
  std::vector<IncrementRecord> increments;  // pre-coupling, all trajectories
  std::vector<std::vector<double>> xi_at_checkpoints;  // [checkpoint][trajectory]
  double dt = 0.0;
  int failures = 0;
  int trajectories = 0;

  double coupling_fraction() const;       // among non-failed trajectories
  double quadratic_variation_rate() const;  // sum dxi^2 / (increments * dt)
};

/// Geodesic Euler-Maruyama simulation of the coupled pair. Steps that would
/// exit the domain (or whose drift displacement dominates the noise scale) are
/// re-integrated on Brownian-bridge halves up to max_substep_depth; exhausted
/// trajectories are flagged and excluded from statistics. After d(X,Y) drops
/// below the coupling threshold the pair is merged for good.
TrajectoryStats simulate_coupled(const DiffusionConfig& cfg);

struct DriftBin {
  double xi_mid;
  int count;
  double observed;   // mean dxi/dt
  double predicted;  // mean of -(N-1+2 alpha) tn_K(xi) + F
  double z;          // (observed - predicted)/SE
};

struct DriftAuditReport {
  std::vector<DriftBin> bins;
  double worst_abs_z = 0.0;
  double slope_vs_xi = 0.0;    // LS slope of dxi/dt against xi
  double coeff_vs_tn = 0.0;    // LS coefficient of dxi/dt against tn_K(xi)
  double qv_per_time = 0.0;
  int increments_used = 0;
  int bins_skipped = 0;  // below the per-bin sample floor
};

/// Bins pre-coupling increments by xi and compares conditional mean drift with
/// -(N-1+2 alpha) tn_K(xi) + F. Bins under min_bin_count samples are skipped;
/// throws if every bin is.
DriftAuditReport drift_audit(const TrajectoryStats& stats, const DiffusionConfig& cfg,
                             int bins = 12, int min_bin_count = 200);

struct PhiDecayCheckpoint {
  double t, mean_phi, envelope, std_err;
  bool holds;  // mean <= envelope + 3 SE
};

struct PhiDecayReport {
  double phi0 = 0.0;
  double rate = 0.0;  // min rho_bar * gap_bar
  std::vector<PhiDecayCheckpoint> checkpoints;
  bool holds = true;
};

/// Checks E[Phi(xi_t)] <= e^{-min rho_bar gap_bar t} Phi(xi_0) (1 + 3 SE) at the
/// configured checkpoints, with Phi = phi2/phi1 of the modulus spectrum.
/// `precondition_violation` is the worst violation from a prior log-concavity
/// audit of this configuration; the run refuses when it exceeds the tolerance.
PhiDecayReport phi_decay_audit(const DiffusionConfig& cfg, const Modulus1D& modulus,
                               double precondition_violation = 0.0,
                               double precondition_tol = 1e-4, int grid_n = 513);

}  // namespace gapforge
