#ifndef WAVELAB_DIAGNOSTICS_HPP
#define WAVELAB_DIAGNOSTICS_HPP

#include <utility>
#include <vector>

#include "wavelab/grid.hpp"
#include "wavelab/lingroup.hpp"
#include "wavelab/solver.hpp"

namespace wavelab {

// Measurable statements about flows: local energy decay, Strichartz
// accumulation, scattering fits, exterior channels of energy, the trapping
// sign, virial convexity, profile orthogonality and Pythagorean expansions,
// and the dilating-profile comparison between the exterior Neumann flow and
// the whole-space flow.

struct LocalEnergyReport {
  std::vector<std::pair<double, double>> series;  // (t, e_loc)
  double time_integral = 0.0;
};

/// Energy density (1/2) 4pi int_1^R [(du/dr)^2 + ut^2] r^2 dr over the sharp
/// window [1, R]; R snaps to a grid node.
LocalEnergyReport local_energy(const Trajectory& traj, double R);

/// Discrete L^5([0,T], L^10) norm of the run.
double strichartz_accumulate(const Trajectory& traj);

struct ScatterFit {
  RadiationField g;       // fitted outgoing profile, sampled on s = r - t
  double residual = 0.0;  // at the window's final snapshot
  std::vector<std::pair<double, double>> residual_series;
};

/// Fit G(r-t) = (1/2)(r du/dr - r du/dt) on snapshots inside [t_lo, t_hi]
/// and measure || r ut + G || + || r u_r - G || (4pi-weighted L^2(dr)).
ScatterFit scattering_fit(const Trajectory& traj, double t_lo, double t_hi);

struct ChannelReport {
  double left_limit = 0.0;
  double right_limit = 0.0;
  double rhs = 0.0;
  double defect = 0.0;
};

/// Free-wave exterior energy identity: the two +-t_probe exterior energies
/// against int_R^inf (d(r v0)/dr)^2 + r^2 v1^2 dr. t_probe snaps to the time
/// grid; a stabilization check guards against a too-short probe.
ChannelReport exterior_channel(const RadialState& data, double R, double t_probe);

struct TailGaugeReport {
  double lhs = 0.0;        // int_R^inf (d(r u0)/dr)^2 + r^2 u1^2 dr
  double rhs_bound = 0.0;  // R^5 u0(R)^10
};

/// Reported gauge for compact-flow candidates; no inequality is asserted.
TailGaugeReport exterior_tail_gauge(const RadialState& data, double R);

struct TrappingReport {
  std::vector<std::pair<double, double>> series;  // (t, grad - grad(W))
  bool sign_constant = false;
  double min_abs_gap = 0.0;
};

/// Per-snapshot sign of int |grad u|^2 - int_{R^3} |grad W|^2 for focusing
/// runs below the static threshold energy.
TrappingReport trapping_series(const Trajectory& traj);

struct VirialRow {
  double t = 0.0;
  double y = 0.0;             // 4pi int u^2 r^2 dr
  double yp = 0.0;            // 2 4pi int u ut r^2 dr
  double ypp_measured = 0.0;  // second differences of y (NaN at the ends)
  double ypp_lower = 0.0;     // 8 int ut^2 + 12 E(W,0) - 12 E(u0,u1)
};

/// Requires square-integrable (in practice compactly supported) data and
/// uniformly spaced snapshots.
std::vector<VirialRow> virial_series(const Trajectory& traj);

/// |t_jn - t_kn| / lambda_jn + |log(lambda_jn / lambda_kn)|.
double orthogonality_gauge(const std::vector<double>& lambda_j,
                           const std::vector<double>& times_j,
                           const std::vector<double>& lambda_k,
                           const std::vector<double>& times_k, int n);

struct ProfileSpec {
  enum Klass { Compact, Dilating } klass = Compact;
  RadialState psi;  // whole-space profile
  std::vector<double> lambdas;
  std::vector<double> times;
};

struct SuperposeResult {
  RadialState data;  // exterior state
  double min_gauge = 0.0;
  bool orthogonal = true;  // warning-level flag, floor 1.0
};

/// Sum_j S_N(-t_jn) sigma_{lambda_jn} psi^j restricted to the exterior grid.
SuperposeResult profile_superpose(const std::vector<ProfileSpec>& profiles,
                                  int n, const RadialGrid& grid);

struct PythagoreanDefect {
  double h_defect = 0.0;
  double l6_defect = 0.0;
};

/// Defect of the energy and L^6 Pythagorean expansions; compact profiles
/// count with their exterior norm, dilating ones with the whole-space norm.
PythagoreanDefect pythagorean_defect(const RadialState& data,
                                     const std::vector<ProfileSpec>& profiles,
                                     int n);

struct DilatingConfig {
  double h = 1.0 / 64.0;
  double r_max = 160.0;
  double t_final = 4.0;
  int snapshot_stride = 4;
  bool nonlinear = false;      // false: linear mode (iota 0), true: defocusing
  double late_window_start = 0.0;  // for the Neumann boundary-trace maximum
};

struct DilatingReport {
  double sup_h_diff = 0.0;
  double l5l10_diff = 0.0;
  // linear mode only: boundary traces of the two linear flows
  double bt_free_max = 0.0;          // max_t |dt v(t,1)| + |dr v(t,1)|
  double bt_neumann_late_max = 0.0;  // max_{t >= late start} |dt u(t,1)|
  std::vector<std::pair<double, double>> bt_free_series;
  std::vector<std::pair<double, double>> bt_neumann_series;
};

/// Evolve the scaled (and optionally time-shifted) profile under the
/// exterior Neumann flow and the whole-space flow, and measure the
/// difference norms over the common horizon.
DilatingReport dilating_compare(const RadialState& psi, double lambda,
                                double t_shift, const DilatingConfig& cfg);

}  // namespace wavelab

#endif
