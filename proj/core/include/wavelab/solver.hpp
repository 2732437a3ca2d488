#ifndef WAVELAB_SOLVER_HPP
#define WAVELAB_SOLVER_HPP

#include <vector>

#include "wavelab/core.hpp"
#include "wavelab/grid.hpp"

namespace wavelab {

// Nonlinear evolution of u_tt - Lap u + iota u^5 = 0 by a leapfrog on
// zeta = r u at unit Courant number (dt = h), so the linear transport is
// exact along grid characteristics. The outer boundary is a pure outgoing
// copy; callers must size r_max so nothing incoming reaches it.

struct SolverConfig {
  double h = 1.0 / 256.0;
  double t_final = 1.0;
  int snapshot_stride = 16;
  double blowup_cap = 1e6;  // sup-norm threshold on u
  int iota = 1;             // +1 defocusing, -1 focusing, 0 linear
};

struct RunStatus {
  enum Kind { Completed, BlewUp } kind = Completed;
  double t_star = 0.0;   // meaningful when kind == BlewUp
  bool hit_nan = false;  // blow-up detected through a non-finite value
};

struct Snapshot {
  double t = 0.0;
  RadialState state;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  RunStatus status;
  std::vector<EnergyRecord> energy_series;

  const RadialState& final_state() const { return snapshots.back().state; }
  double final_time() const { return snapshots.back().t; }
};

/// Exterior Neumann evolution; the boundary enforces d(zeta)/dr = zeta at
/// r = 1 through a second-order ghost node.
Trajectory evolve_neumann(const RadialState& data, const SolverConfig& cfg);

/// Whole-space radial evolution; zeta(t, 0) = 0 is pinned by oddness.
Trajectory evolve_free(const RadialState& data, const SolverConfig& cfg);

/// True iff max|u| exceeds cap or any sample is non-finite.
bool detect_blowup(const RadialState& state, double cap);

struct PerturbationReport {
  double l5l10_diff = 0.0;  // discrete L^5_t L^10_x norm of the difference
  double sup_h_diff = 0.0;  // sup over snapshots of the H-norm difference
};

/// Runs must share the grid and snapshot times.
PerturbationReport perturbation_compare(const Trajectory& a, const Trajectory& b);

/// L^10(R^3) norm of the position component (with the 4 pi factor).
double l10_norm(const RadialState& state);

}  // namespace wavelab

#endif
