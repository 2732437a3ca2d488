#include "wavelab/solver.hpp"

#include <cmath>

#include "wavelab/errors.hpp"
#include "wavelab/quadrature.hpp"

namespace wavelab {

namespace {
constexpr double kFourPi = 4.0 * 3.14159265358979323846;

inline double pow5(double x) {
  const double x2 = x * x;
  return x2 * x2 * x;
}

struct Stepper {
  const RadialGrid grid;
  const SolverConfig cfg;
  const bool neumann;  // r_min = 1 ghost versus r = 0 pin
  std::vector<double> r4inv;
  std::vector<double> prev, cur, next;

  Stepper(const RadialState& data, const SolverConfig& c, bool nm)
      : grid(data.grid), cfg(c), neumann(nm) {
    const int n = grid.n_points;
    r4inv.resize(n);
    for (int i = 0; i < n; ++i) {
      const double r = grid.r(i);
      r4inv[i] = (r > 0.0) ? 1.0 / (r * r * r * r) : 0.0;
    }
    prev.resize(n);
    cur.resize(n);
    next.resize(n);
    // first step: second-order Taylor from (zeta0, dt zeta0')
    const double h = grid.h;
    std::vector<double> z0(n), z1(n);
    for (int i = 0; i < n; ++i) {
      z0[i] = grid.r(i) * data.u[i];
      z1[i] = grid.r(i) * data.ut[i];
    }
    prev = z0;
    const int last = n - 1;
    for (int i = 1; i < last; ++i) {
      const double lap = z0[i - 1] - 2.0 * z0[i] + z0[i + 1];  // times h^-2, dt^2 cancels
      cur[i] = z0[i] + h * z1[i] +
               0.5 * (lap - h * h * cfg.iota * pow5(z0[i]) * r4inv[i]);
    }
    apply_boundary(cur);
    cur[last] = z0[last - 1];  // outgoing copy
  }

  // The boundary value is slaved to the one-sided second-order discrete
  // condition d(zeta)/dr = zeta at r = 1. A centered ghost admits a sawtooth
  // mode mu = h - sqrt(1+h^2) with |kappa| = 1 + O(h) at unit Courant and
  // blows up like e^t; the slaved form only supports the physical
  // exponential-memory layer.
  void apply_boundary(std::vector<double>& z) const {
    if (neumann) {
      z[0] = (4.0 * z[1] - z[2]) / (3.0 + 2.0 * grid.h);
    } else {
      z[0] = 0.0;  // oddness pin at r = 0
    }
  }

  void step() {
    const int n = grid.n_points;
    const int last = n - 1;
    const double h = grid.h;
    const double hh_iota = h * h * cfg.iota;
    for (int i = 1; i < last; ++i) {
      next[i] = cur[i - 1] + cur[i + 1] - prev[i] - hh_iota * pow5(cur[i]) * r4inv[i];
    }
    apply_boundary(next);
    next[last] = cur[last - 1];
    prev.swap(cur);
    cur.swap(next);
  }

  enum class LevelCheck { Ok, Capped, NonFinite };

  LevelCheck check_level(const std::vector<double>& z) const {
    // |u| > cap as |zeta| > cap * r, no divisions in the scan
    const double cap = cfg.blowup_cap;
    for (int i = 0; i < grid.n_points; ++i) {
      const double v = z[i];
      if (!std::isfinite(v)) return LevelCheck::NonFinite;
      if (std::abs(v) > cap * grid.r(i)) {
        if (i == 0 && grid.r_min == 0.0) {
          const double u0 = (4.0 * z[1] - z[2]) / (2.0 * grid.h);
          if (std::abs(u0) > cap) return LevelCheck::Capped;
          continue;
        }
        return LevelCheck::Capped;
      }
    }
    return LevelCheck::Ok;
  }

  // state at the level of `mid`, velocities centered from lo/hi
  RadialState reconstruct(const std::vector<double>& lo,
                          const std::vector<double>& mid,
                          const std::vector<double>& hi) const {
    const int n = grid.n_points;
    const double h = grid.h;
    RadialState s = zero_state(grid);
    for (int i = 0; i < n; ++i) {
      const double r = grid.r(i);
      if (r > 0.0) {
        s.u[i] = mid[i] / r;
        s.ut[i] = (hi[i] - lo[i]) / (2.0 * h * r);
      }
    }
    if (grid.r_min == 0.0) {
      s.u[0] = (4.0 * mid[1] - mid[2]) / (2.0 * h);
      const double dlo = (4.0 * lo[1] - lo[2]) / (2.0 * h);
      const double dhi = (4.0 * hi[1] - hi[2]) / (2.0 * h);
      s.ut[0] = (dhi - dlo) / (2.0 * h);
    }
    return s;
  }
};

Trajectory evolve(const RadialState& data, const SolverConfig& cfg, bool neumann) {
  if (!state_is_finite(data)) throw Error("non-finite initial data");
  if (!(cfg.t_final > 0.0)) throw Error("t_final must be positive");
  if (cfg.h != data.grid.h) throw GridMismatch("cfg.h must equal the grid spacing");

  const double h = data.grid.h;
  const int n_steps = static_cast<int>(std::round(cfg.t_final / h));
  if (data.grid.n_points < n_steps + 3) throw DomainTooSmallForHorizon();

  Trajectory traj;
  Stepper st(data, cfg, neumann);

  // levels: prev = zeta^0, cur = zeta^1. Snapshot at level k uses levels
  // k-1 and k+1 for the centered velocity, so recording trails the stepping
  // by one level; one extra level past t_final closes the last snapshot.
  std::vector<double> before = st.prev;  // level k-1 relative to cur-1
  auto record = [&](int level, const std::vector<double>& lo,
                    const std::vector<double>& mid, const std::vector<double>& hi) {
    Snapshot snap;
    snap.t = level * h;
    snap.state = st.reconstruct(lo, mid, hi);
    traj.energy_series.push_back(energy(snap.state, cfg.iota, snap.t));
    traj.snapshots.push_back(std::move(snap));
  };

  {
    // initial snapshot carries the given data verbatim
    Snapshot snap;
    snap.t = 0.0;
    snap.state = data;
    traj.energy_series.push_back(energy(data, cfg.iota, 0.0));
    traj.snapshots.push_back(std::move(snap));
  }

  for (int k = 1; k <= n_steps; ++k) {
    // advance so that levels (k-1, k, k+1) are available as before/prev/cur
    st.step();
    const auto check = st.check_level(st.cur);
    if (check != Stepper::LevelCheck::Ok) {
      traj.status.kind = RunStatus::BlewUp;
      traj.status.t_star = (k + 1) * h;
      traj.status.hit_nan = (check == Stepper::LevelCheck::NonFinite);
      return traj;
    }
    if (k % cfg.snapshot_stride == 0 || k == n_steps)
      record(k, before, st.prev, st.cur);
    before = st.prev;
  }
  traj.status.kind = RunStatus::Completed;
  return traj;
}

}  // namespace

Trajectory evolve_neumann(const RadialState& data, const SolverConfig& cfg) {
  if (!data.grid.exterior()) throw WrongDomain("evolve_neumann needs r_min = 1");
  return evolve(data, cfg, true);
}

Trajectory evolve_free(const RadialState& data, const SolverConfig& cfg) {
  if (data.grid.r_min != 0.0) throw WrongDomain("evolve_free needs r_min = 0");
  return evolve(data, cfg, false);
}

bool detect_blowup(const RadialState& state, double cap) {
  for (double v : state.u)
    if (!std::isfinite(v) || std::abs(v) > cap) return true;
  for (double v : state.ut)
    if (!std::isfinite(v)) return true;
  return false;
}

double l10_norm(const RadialState& state) {
  const RadialGrid& g = state.grid;
  std::vector<double> f(g.n_points);
  for (int i = 0; i < g.n_points; ++i) {
    const double u2 = state.u[i] * state.u[i];
    const double u10 = u2 * u2 * u2 * u2 * u2;
    f[i] = u10 * g.r(i) * g.r(i);
  }
  return std::pow(kFourPi * trapz(f, g.h), 0.1);
}

PerturbationReport perturbation_compare(const Trajectory& a, const Trajectory& b) {
  if (a.snapshots.size() != b.snapshots.size()) throw GridMismatch("snapshot counts differ");
  const size_t m = a.snapshots.size();
  std::vector<double> x5(m), times(m);
  PerturbationReport rep;
  for (size_t k = 0; k < m; ++k) {
    const Snapshot& sa = a.snapshots[k];
    const Snapshot& sb = b.snapshots[k];
    if (!(sa.state.grid == sb.state.grid) || sa.t != sb.t)
      throw GridMismatch("snapshots not aligned");
    RadialState diff = zero_state(sa.state.grid);
    for (int i = 0; i < diff.grid.n_points; ++i) {
      diff.u[i] = sa.state.u[i] - sb.state.u[i];
      diff.ut[i] = sa.state.ut[i] - sb.state.ut[i];
    }
    const double x = l10_norm(diff);
    x5[k] = x * x * x * x * x;
    times[k] = sa.t;
    rep.sup_h_diff = std::max(rep.sup_h_diff, std::sqrt(norms(diff).h_sq));
  }
  // snapshot times may be non-uniform at the tail end
  double acc = 0.0;
  for (size_t k = 0; k + 1 < m; ++k)
    acc += 0.5 * (x5[k] + x5[k + 1]) * (times[k + 1] - times[k]);
  rep.l5l10_diff = std::pow(acc, 0.2);
  return rep;
}

}  // namespace wavelab
