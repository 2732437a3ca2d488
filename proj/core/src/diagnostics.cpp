#include "wavelab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavelab/core.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/quadrature.hpp"
#include "wavelab/special.hpp"

namespace wavelab {

namespace {
constexpr double kFourPi = 4.0 * 3.14159265358979323846;

double trapz_times(const std::vector<double>& v, const std::vector<double>& t) {
  double acc = 0.0;
  for (size_t k = 0; k + 1 < v.size(); ++k)
    acc += 0.5 * (v[k] + v[k + 1]) * (t[k + 1] - t[k]);
  return acc;
}

int node_at(const RadialGrid& g, double r) {
  const int i = static_cast<int>(std::round((r - g.r_min) / g.h));
  if (i < 0 || i >= g.n_points) throw ROutOfRange();
  return i;
}
}  // namespace

LocalEnergyReport local_energy(const Trajectory& traj, double R) {
  const RadialGrid& g = traj.snapshots.front().state.grid;
  if (!(R > g.r_min)) throw ROutOfRange("window must extend past the inner radius");
  const int i_hi = node_at(g, R);

  LocalEnergyReport rep;
  std::vector<double> vals, times;
  for (const Snapshot& snap : traj.snapshots) {
    const std::vector<double> du = deriv_centered(snap.state.u, g.h);
    std::vector<double> f(i_hi + 1);
    for (int i = 0; i <= i_hi; ++i) {
      const double r2 = g.r(i) * g.r(i);
      f[i] = (du[i] * du[i] + snap.state.ut[i] * snap.state.ut[i]) * r2;
    }
    const double e = 0.5 * kFourPi * trapz(f, g.h);
    rep.series.emplace_back(snap.t, e);
    vals.push_back(e);
    times.push_back(snap.t);
  }
  rep.time_integral = trapz_times(vals, times);
  return rep;
}

double strichartz_accumulate(const Trajectory& traj) {
  std::vector<double> x5, times;
  for (const Snapshot& snap : traj.snapshots) {
    const double x = l10_norm(snap.state);
    x5.push_back(x * x * x * x * x);
    times.push_back(snap.t);
  }
  return std::pow(trapz_times(x5, times), 0.2);
}

namespace {

// || r ut + G || + || r u_r - G || at one snapshot, G taken from the
// snapshot itself
double fit_residual(const RadialState& s, std::vector<double>* g_out) {
  const RadialGrid& grid = s.grid;
  const int n = grid.n_points;
  const std::vector<double> du = deriv_centered(s.u, grid.h);
  std::vector<double> a(n), b(n);
  if (g_out) g_out->resize(n);
  for (int i = 0; i < n; ++i) {
    const double r = grid.r(i);
    const double rut = r * s.ut[i];
    const double rur = r * du[i];
    const double g = 0.5 * (rur - rut);
    if (g_out) (*g_out)[i] = g;
    a[i] = (rut + g) * (rut + g);
    b[i] = (rur - g) * (rur - g);
  }
  return std::sqrt(kFourPi * trapz(a, grid.h)) + std::sqrt(kFourPi * trapz(b, grid.h));
}

}  // namespace

ScatterFit scattering_fit(const Trajectory& traj, double t_lo, double t_hi) {
  if (traj.status.kind == RunStatus::BlewUp) throw BlowUpRun();
  ScatterFit fit;
  const Snapshot* last = nullptr;
  for (const Snapshot& snap : traj.snapshots) {
    if (snap.t < t_lo - 1e-12 || snap.t > t_hi + 1e-12) continue;
    const double res = fit_residual(snap.state, nullptr);
    fit.residual_series.emplace_back(snap.t, res);
    last = &snap;
  }
  if (!last) throw ROutOfRange("no snapshots inside the window");
  std::vector<double> g;
  fit.residual = fit_residual(last->state, &g);
  fit.g.h = last->state.grid.h;
  fit.g.s0 = last->state.grid.r_min - last->t;
  fit.g.g = std::move(g);
  return fit;
}

ChannelReport exterior_channel(const RadialState& data, double R, double t_probe) {
  const RadialGrid& g = data.grid;
  if (g.r_min != 0.0) throw WrongDomain("exterior_channel needs r_min = 0");
  const int iR = node_at(g, R);
  const int steps = static_cast<int>(std::round(t_probe / g.h));
  if (steps < 1) throw HorizonTooShort("probe time below one grid step");
  const double t = steps * g.h;

  auto exterior_energy = [&](double tt) {
    const FreeZetaDerivs d = free_zeta_derivatives(data, tt);
    const int i0 = iR + static_cast<int>(std::round(std::abs(tt) / g.h));
    if (i0 >= g.n_points - 1) throw HorizonTooShort("probe leaves the grid");
    std::vector<double> f(g.n_points - i0);
    for (int i = i0; i < g.n_points; ++i)
      f[i - i0] = d.dr[i] * d.dr[i] + d.dt[i] * d.dt[i];
    return trapz(f, g.h);
  };

  ChannelReport rep;
  rep.right_limit = exterior_energy(t);
  rep.left_limit = exterior_energy(-t);

  // rhs from the same discrete derivative of the odd extension
  const FreeZetaDerivs d0 = free_zeta_derivatives(data, 0.0);
  std::vector<double> f(g.n_points - iR);
  for (int i = iR; i < g.n_points; ++i) {
    const double z1 = g.r(i) * data.ut[i];
    f[i - iR] = d0.dr[i] * d0.dr[i] + z1 * z1;
  }
  rep.rhs = trapz(f, g.h);
  rep.defect = std::abs(rep.left_limit + rep.right_limit - rep.rhs);

  // stabilization: an earlier probe must agree
  const double t_earlier = std::max(g.h, t - 4.0 * g.h);
  const double probe2 = exterior_energy(t_earlier) + exterior_energy(-t_earlier);
  const double scale = std::max(rep.rhs, 1e-30);
  if (std::abs(probe2 - (rep.left_limit + rep.right_limit)) > 1e-8 * scale)
    throw HorizonTooShort("exterior limits not stabilized");
  return rep;
}

TailGaugeReport exterior_tail_gauge(const RadialState& data, double R) {
  const RadialGrid& g = data.grid;
  const int iR = node_at(g, R);
  std::vector<double> zeta(g.n_points);
  for (int i = 0; i < g.n_points; ++i) zeta[i] = g.r(i) * data.u[i];
  const std::vector<double> dz = deriv_centered(zeta, g.h);
  std::vector<double> f(g.n_points - iR);
  for (int i = iR; i < g.n_points; ++i) {
    const double rz1 = g.r(i) * data.ut[i];
    f[i - iR] = dz[i] * dz[i] + rz1 * rz1;
  }
  TailGaugeReport rep;
  rep.lhs = trapz(f, g.h);
  const double u0R = data.u[iR];
  const double u0R2 = u0R * u0R;
  const double Rn = g.r(iR);
  rep.rhs_bound = std::pow(Rn, 5) * u0R2 * u0R2 * u0R2 * u0R2 * u0R2;
  return rep;
}

TrappingReport trapping_series(const Trajectory& traj) {
  TrappingReport rep;
  const double threshold = w_gradient_l2_r3();
  rep.min_abs_gap = std::numeric_limits<double>::infinity();
  bool first = true;
  bool positive = false;
  rep.sign_constant = true;
  for (const EnergyRecord& rec : traj.energy_series) {
    const double gap = 2.0 * rec.gradient - threshold;
    rep.series.emplace_back(rec.time, gap);
    rep.min_abs_gap = std::min(rep.min_abs_gap, std::abs(gap));
    if (first) {
      positive = gap > 0.0;
      first = false;
    } else if ((gap > 0.0) != positive) {
      rep.sign_constant = false;
    }
  }
  return rep;
}

std::vector<VirialRow> virial_series(const Trajectory& traj) {
  const RadialGrid& g = traj.snapshots.front().state.grid;
  const double e0 = traj.energy_series.front().total;
  const double delta0 = 12.0 * (w_energy_r3() - e0);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<VirialRow> rows;
  for (const Snapshot& snap : traj.snapshots) {
    const RadialState& s = snap.state;
    std::vector<double> f2(g.n_points), fut(g.n_points), fk(g.n_points);
    double max_density = 0.0;
    for (int i = 0; i < g.n_points; ++i) {
      const double r2 = g.r(i) * g.r(i);
      f2[i] = s.u[i] * s.u[i] * r2;
      fut[i] = s.u[i] * s.ut[i] * r2;
      fk[i] = s.ut[i] * s.ut[i] * r2;
      max_density = std::max(max_density, f2[i]);
    }
    if (f2.back() > 1e-8 * std::max(max_density, 1e-300))
      throw NonSquareIntegrable("u^2 r^2 does not vanish at the outer boundary");
    VirialRow row;
    row.t = snap.t;
    row.y = kFourPi * trapz(f2, g.h);
    row.yp = 2.0 * kFourPi * trapz(fut, g.h);
    row.ypp_lower = 8.0 * kFourPi * trapz(fk, g.h) + delta0;
    row.ypp_measured = nan;
    rows.push_back(row);
  }
  // second differences need uniform snapshot spacing
  for (size_t k = 1; k + 1 < rows.size(); ++k) {
    const double dt1 = rows[k].t - rows[k - 1].t;
    const double dt2 = rows[k + 1].t - rows[k].t;
    if (std::abs(dt1 - dt2) > 1e-12 * std::max(dt1, dt2)) continue;
    rows[k].ypp_measured = (rows[k + 1].y - 2.0 * rows[k].y + rows[k - 1].y) / (dt1 * dt1);
  }
  return rows;
}

double orthogonality_gauge(const std::vector<double>& lambda_j,
                           const std::vector<double>& times_j,
                           const std::vector<double>& lambda_k,
                           const std::vector<double>& times_k, int n) {
  if (n < 0 || static_cast<size_t>(n) >= lambda_j.size() ||
      static_cast<size_t>(n) >= times_j.size() ||
      static_cast<size_t>(n) >= lambda_k.size() ||
      static_cast<size_t>(n) >= times_k.size())
    throw IndexOutOfRange();
  return std::abs(times_j[n] - times_k[n]) / lambda_j[n] +
         std::abs(std::log(lambda_j[n] / lambda_k[n]));
}

namespace {

// One term S_N(-t) sigma_lambda psi restricted to the exterior grid.
RadialState superpose_term(const ProfileSpec& p, int n, const RadialGrid& grid) {
  const double lambda = p.lambdas[n];
  const double t = p.times[n];
  RadialState scaled = (lambda == 1.0) ? p.psi : scale_critical(p.psi, lambda);
  RadialState ext = restrict_to_exterior(scaled);
  if (ext.grid.h != grid.h) throw GridMismatch("profile grid spacing differs");
  if (t != 0.0) {
    const CharPair pair = neumann_char_pair(ext, std::abs(t));
    return char_eval(pair, -t, grid);
  }
  RadialState out = zero_state(grid);
  const int m = std::min(grid.n_points, ext.grid.n_points);
  for (int i = 0; i < m; ++i) {
    out.u[i] = ext.u[i];
    out.ut[i] = ext.ut[i];
  }
  return out;
}

}  // namespace

SuperposeResult profile_superpose(const std::vector<ProfileSpec>& profiles,
                                  int n, const RadialGrid& grid) {
  SuperposeResult res;
  res.data = zero_state(grid);
  res.min_gauge = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < profiles.size(); ++j) {
    if (n < 0 || static_cast<size_t>(n) >= profiles[j].lambdas.size())
      throw IndexOutOfRange();
    const RadialState term = superpose_term(profiles[j], n, grid);
    for (int i = 0; i < grid.n_points; ++i) {
      res.data.u[i] += term.u[i];
      res.data.ut[i] += term.ut[i];
    }
    for (size_t k = j + 1; k < profiles.size(); ++k) {
      const double gauge =
          orthogonality_gauge(profiles[j].lambdas, profiles[j].times,
                              profiles[k].lambdas, profiles[k].times, n);
      res.min_gauge = std::min(res.min_gauge, gauge);
    }
  }
  if (profiles.size() < 2) res.min_gauge = std::numeric_limits<double>::infinity();
  res.orthogonal = res.min_gauge >= 1.0;
  return res;
}

PythagoreanDefect pythagorean_defect(const RadialState& data,
                                     const std::vector<ProfileSpec>& profiles,
                                     int n) {
  const NormReport dn = norms(data);
  double sum_h = 0.0, sum_l6 = 0.0;
  for (const ProfileSpec& p : profiles) {
    if (n < 0 || static_cast<size_t>(n) >= p.lambdas.size()) throw IndexOutOfRange();
    if (p.klass == ProfileSpec::Compact) {
      sum_h += norms(restrict_to_exterior(p.psi)).h_sq;
    } else {
      sum_h += norms(p.psi).h_sq;  // whole-space norm
    }
    const RadialState term = superpose_term(p, n, data.grid);
    sum_l6 += norms(term).l6_pow6;
  }
  PythagoreanDefect d;
  d.h_defect = std::abs(dn.h_sq - sum_h);
  d.l6_defect = std::abs(dn.l6_pow6 - sum_l6);
  return d;
}

namespace {

// state = free evolution of `data` to signed time t via the nonlinear (or
// linear, iota 0) leapfrog; negative times use time reflection
RadialState leapfrog_free_to(const RadialState& data, double t, int iota,
                             double cap) {
  if (t == 0.0) return data;
  RadialState start = data;
  const bool backwards = t < 0.0;
  if (backwards)
    for (double& v : start.ut) v = -v;
  SolverConfig cfg;
  cfg.h = data.grid.h;
  cfg.t_final = std::abs(t);
  cfg.snapshot_stride = 1 << 30;  // final snapshot only
  cfg.iota = iota;
  cfg.blowup_cap = cap;
  const Trajectory traj = evolve_free(start, cfg);
  if (traj.status.kind == RunStatus::BlewUp) throw BlowUpRun();
  RadialState out = traj.final_state();
  if (backwards)
    for (double& v : out.ut) v = -v;
  return out;
}

}  // namespace

DilatingReport dilating_compare(const RadialState& psi, double lambda,
                                double t_shift, const DilatingConfig& cfg) {
  const RadialGrid grid = make_grid(0.0, cfg.r_max, cfg.h);
  if (!(psi.grid.h == cfg.h)) throw GridMismatch("psi must be sampled at cfg.h");

  // scaled, optionally time-shifted data on the working grid
  RadialState data = zero_state(grid);
  {
    RadialState scaled = scale_critical(psi, lambda);
    const int m = std::min(grid.n_points, scaled.grid.n_points);
    for (int i = 0; i < m; ++i) {
      data.u[i] = scaled.u[i];
      data.ut[i] = scaled.ut[i];
    }
  }
  const int iota = cfg.nonlinear ? 1 : 0;
  if (t_shift != 0.0) data = leapfrog_free_to(data, -t_shift, iota, 1e6);

  SolverConfig scfg;
  scfg.h = cfg.h;
  scfg.t_final = cfg.t_final;
  scfg.snapshot_stride = cfg.snapshot_stride;
  scfg.iota = iota;

  const Trajectory free_run = evolve_free(data, scfg);
  const Trajectory neumann_run = evolve_neumann(restrict_to_exterior(data), scfg);

  DilatingReport rep;
  const size_t m = std::min(free_run.snapshots.size(), neumann_run.snapshots.size());
  std::vector<double> x5(m), times(m);
  for (size_t k = 0; k < m; ++k) {
    const RadialState v = restrict_to_exterior(free_run.snapshots[k].state);
    const RadialState& u = neumann_run.snapshots[k].state;
    RadialState diff = zero_state(u.grid);
    for (int i = 0; i < u.grid.n_points; ++i) {
      diff.u[i] = u.u[i] - v.u[i];
      diff.ut[i] = u.ut[i] - v.ut[i];
    }
    rep.sup_h_diff = std::max(rep.sup_h_diff, std::sqrt(norms(diff).h_sq));
    const double x = l10_norm(diff);
    x5[k] = x * x * x * x * x;
    times[k] = neumann_run.snapshots[k].t;
  }
  rep.l5l10_diff = std::pow(trapz_times(x5, times), 0.2);

  if (!cfg.nonlinear) {
    // boundary traces of the two exact linear flows
    const RadialState ext = restrict_to_exterior(data);
    const CharPair pair = neumann_char_pair(ext, cfg.t_final);
    const int i1 = static_cast<int>(std::round(1.0 / cfg.h));
    const int steps = static_cast<int>(std::round(cfg.t_final / cfg.h));
    for (int k = 0; k <= steps; ++k) {
      const double t = k * cfg.h;
      // free flow: dt v(t,1) and dr v(t,1) from the sampled evolution
      const RadialState v = free_linear_evolve(data, t);
      const double dtv = v.ut[i1];
      const double drv = (v.u[i1 + 1] - v.u[i1 - 1]) / (2.0 * cfg.h);
      const double bt_v = std::abs(dtv) + std::abs(drv);
      rep.bt_free_series.emplace_back(t, bt_v);
      rep.bt_free_max = std::max(rep.bt_free_max, bt_v);
      // Neumann flow: dt u(t,1) from the characteristic pair
      const double s0 = pair.s_min();
      const double dtu = -lerp_uniform(pair.dphi_plus, s0, pair.h, 1.0 - t) +
                         lerp_uniform(pair.dphi_minus, s0, pair.h, 1.0 + t);
      rep.bt_neumann_series.emplace_back(t, std::abs(dtu));
      if (t >= cfg.late_window_start)
        rep.bt_neumann_late_max = std::max(rep.bt_neumann_late_max, std::abs(dtu));
    }
  }
  return rep;
}

}  // namespace wavelab
