#include "wavelab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "wavelab/core.hpp"
#include "wavelab/diagnostics.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/lingroup.hpp"
#include "wavelab/quadrature.hpp"
#include "wavelab/solver.hpp"
#include "wavelab/special.hpp"

namespace wavelab {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------- parsing

bool parse_int(const std::string& s, int64_t* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

bool parse_real(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

const std::vector<std::string> kKinds = {
    "LinearGroup", "DefocusingScatter", "FocusingDichotomy",
    "Dilating",    "Channels",          "ZProfile",
    "Profiles",    "LocalDecay",        "Virial"};

const std::map<std::string, std::string> kKindBlurbs = {
    {"LinearGroup",
     "exact exterior linear flow: boundary memory u(t,1)=e^{-t} for (1/r,0) "
     "data, plus the leapfrog linear-regime match"},
    {"DefocusingScatter",
     "defocusing global run: local energy drains and the solution fits an "
     "outgoing radiation profile"},
    {"FocusingDichotomy",
     "focusing runs below the static threshold energy: subcritical gradient "
     "scatters, supercritical blows up, gradient gap keeps its sign"},
    {"Dilating",
     "dilating data: exterior and whole-space evolutions converge as the "
     "scale grows; boundary traces shed at the -3/2 power"},
    {"Channels",
     "exterior energy identity for free waves: the two time limits sum to "
     "the initial exterior channel energy"},
    {"ZProfile",
     "singular exterior elliptic profile: inward shooting, blow-up radius "
     "bracket, 1/r tail fit, scaling covariance"},
    {"Profiles",
     "two-profile superpositions: energy and L^6 Pythagorean defects fall "
     "along the scale-separation ladder"},
    {"LocalDecay",
     "linear local energy: time-integrated window energy, homogeneity under "
     "doubling, weighted-norm decay"},
    {"Virial",
     "focusing compact supercritical run: second derivative of int u^2 "
     "dominates its convexity lower bound up to blow-up"}};

Scenario parse_lines(std::istream& in) {
  Scenario sc;
  bool in_section = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[scenario]")
        throw ConfigParseError("line " + std::to_string(lineno) +
                               ": unknown section " + line);
      if (in_section)
        throw ConfigParseError("line " + std::to_string(lineno) +
                               ": duplicate [scenario] section");
      in_section = true;
      continue;
    }
    if (!in_section)
      throw ConfigParseError("line " + std::to_string(lineno) +
                             ": key outside [scenario] section");
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigParseError("line " + std::to_string(lineno) +
                             ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigParseError("line " + std::to_string(lineno) +
                             ": empty key or value");
    if (key == "name") {
      sc.name = val;
    } else if (key == "kind") {
      sc.kind = val;
    } else if (key == "output_dir") {
      sc.output_dir = val;
    } else {
      int64_t iv;
      double rv;
      if (parse_int(val, &iv))
        sc.params[key] = iv;
      else if (parse_real(val, &rv))
        sc.params[key] = rv;
      else
        sc.params[key] = val;
    }
  }
  if (!in_section) throw ConfigParseError("missing [scenario] section");
  if (sc.kind.empty()) throw ConfigParseError("missing required key: kind");
  if (std::find(kKinds.begin(), kKinds.end(), sc.kind) == kKinds.end())
    throw ConfigParseError("unknown kind: " + sc.kind);
  if (sc.output_dir.empty()) sc.output_dir = "out/" + sc.name;
  return sc;
}

double get_real(const Scenario& sc, const std::string& key, double dflt) {
  auto it = sc.params.find(key);
  if (it == sc.params.end()) return dflt;
  if (std::holds_alternative<double>(it->second)) return std::get<double>(it->second);
  if (std::holds_alternative<int64_t>(it->second))
    return static_cast<double>(std::get<int64_t>(it->second));
  throw ConfigParseError("key " + key + " must be numeric");
}

int64_t get_int(const Scenario& sc, const std::string& key, int64_t dflt) {
  auto it = sc.params.find(key);
  if (it == sc.params.end()) return dflt;
  if (std::holds_alternative<int64_t>(it->second)) return std::get<int64_t>(it->second);
  throw ConfigParseError("key " + key + " must be an integer");
}

// ------------------------------------------------------------- artifacts

struct SeriesTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void add(std::initializer_list<double> row) { rows.emplace_back(row); }
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Checks {
  std::vector<std::pair<std::string, bool>> items;
  void require(const std::string& name, bool ok) { items.emplace_back(name, ok); }
  bool all_ok() const {
    for (const auto& it : items)
      if (!it.second) return false;
    return true;
  }
};

// -------------------------------------------------------------- data kit

struct Rng {  // splitmix64, deterministic across platforms
  uint64_t s;
  explicit Rng(uint64_t seed) : s(seed) {}
  uint64_t next() {
    s += 0x9E3779B97F4A7C15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform(double a, double b) {
    const double x = (next() >> 11) * 0x1.0p-53;
    return a + (b - a) * x;
  }
};

// C^2 compactly supported bump (1-x^2)^3 on |x|<1
double bump(double r, double center, double width, double amp) {
  const double x = (r - center) / width;
  if (std::abs(x) >= 1.0) return 0.0;
  const double y = 1.0 - x * x;
  return amp * y * y * y;
}

RadialState bump_state(const RadialGrid& g, double center, double width,
                       double amp, double vel_amp = 0.0) {
  RadialState s = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) {
    s.u[i] = bump(g.r(i), center, width, amp);
    s.ut[i] = bump(g.r(i), center, width, vel_amp);
  }
  return s;
}

// linear Neumann evolution packaged as a trajectory for the diagnostics
Trajectory char_trajectory(const RadialState& data, double t_final,
                           double dt_snap, const RadialGrid& eval_grid) {
  const CharPair pair = neumann_char_pair(data, t_final);
  Trajectory traj;
  traj.status.kind = RunStatus::Completed;
  const int m = static_cast<int>(std::round(t_final / dt_snap));
  for (int k = 0; k <= m; ++k) {
    Snapshot snap;
    snap.t = k * dt_snap;
    snap.state = char_eval(pair, snap.t, eval_grid);
    traj.energy_series.push_back(energy(snap.state, 0, snap.t));
    traj.snapshots.push_back(std::move(snap));
  }
  return traj;
}

double slope_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ------------------------------------------------------------- scenarios

void run_linear_group(const Scenario& sc, SeriesTable& series, json& summary,
                      Checks& checks) {
  const double h = get_real(sc, "h", 1.0 / 1024.0);
  const double r_max = get_real(sc, "r_max", 8.0);
  const double t_final = get_real(sc, "t_final", 5.0);

  const RadialGrid grid = make_grid(1.0, r_max, h);
  RadialState data = zero_state(grid);
  for (int i = 0; i < grid.n_points; ++i) data.u[i] = 1.0 / grid.r(i);

  const CharPair pair = neumann_char_pair(data, t_final);
  const double s0 = pair.s_min();

  series.header = {"t", "u_char_at_1", "exact", "u_solver_at_1"};
  double max_err_char = 0.0;
  const int fine = 1000;
  for (int k = 0; k <= fine; ++k) {
    const double t = t_final * k / fine;
    const double u1 = lerp_uniform(pair.phi_plus, s0, h, 1.0 - t) +
                      lerp_uniform(pair.phi_minus, s0, h, 1.0 + t);
    max_err_char = std::max(max_err_char, std::abs(u1 - std::exp(-t)));
  }

  // leapfrog in the linear regime: amplitude eps, same data shape
  const double eps = get_real(sc, "epsilon", 1e-2);
  RadialState small = data;
  for (double& v : small.u) v *= eps;
  SolverConfig cfg;
  cfg.h = h;
  cfg.t_final = t_final;
  cfg.snapshot_stride = std::max<int>(1, static_cast<int>(std::round(0.05 / h)));
  cfg.iota = 1;
  const Trajectory run = evolve_neumann(small, cfg);
  double max_err_solver = 0.0;
  for (const Snapshot& snap : run.snapshots) {
    const double exact = std::exp(-snap.t);
    max_err_solver = std::max(max_err_solver, std::abs(snap.state.u[0] / eps - exact));
    const double tc = snap.t;
    const double u1 = lerp_uniform(pair.phi_plus, s0, h, 1.0 - tc) +
                      lerp_uniform(pair.phi_minus, s0, h, 1.0 + tc);
    series.add({tc, u1, exact, snap.state.u[0] / eps});
  }

  summary["max_err_char"] = max_err_char;
  summary["max_err_solver"] = max_err_solver;
  checks.require("char_matches_exp", max_err_char <= 1e-6);
  checks.require("solver_matches_exp", max_err_solver <= 1e-4);
}

void run_defocusing_scatter(const Scenario& sc, SeriesTable& series,
                            json& summary, Checks& checks) {
  const double h = get_real(sc, "h", 1.0 / 512.0);
  const double r_max = get_real(sc, "r_max", 26.0);
  const double t_final = get_real(sc, "t_final", 20.0);
  const double target_norm = get_real(sc, "h_norm", 3.0);

  const RadialGrid grid = make_grid(1.0, r_max, h);
  RadialState data = bump_state(grid, 3.0, 1.5, 1.0);
  const double raw = std::sqrt(norms(data).h_sq);
  for (double& v : data.u) v *= target_norm / raw;

  SolverConfig cfg;
  cfg.h = h;
  cfg.t_final = t_final;
  cfg.snapshot_stride = std::max<int>(1, static_cast<int>(std::round(0.125 / h)));
  cfg.iota = 1;
  const Trajectory run = evolve_neumann(data, cfg);

  const LocalEnergyReport loc = local_energy(run, 2.0);
  const double e0 = loc.series.front().second;
  const double eT = loc.series.back().second;
  const ScatterFit fit1 = scattering_fit(run, 10.0, 15.0);
  const ScatterFit fit2 = scattering_fit(run, 15.0, t_final);

  series.header = {"t", "e_loc_R2", "fit_residual"};
  for (size_t k = 0; k < loc.series.size(); ++k) {
    double res = std::numeric_limits<double>::quiet_NaN();
    const double t = loc.series[k].first;
    for (const auto& pr : fit1.residual_series)
      if (pr.first == t) res = pr.second;
    for (const auto& pr : fit2.residual_series)
      if (pr.first == t) res = pr.second;
    series.add({t, loc.series[k].second, res});
  }

  summary["h_norm"] = target_norm;
  summary["e_loc_ratio"] = eT / e0;
  summary["residual_10_15"] = fit1.residual;
  summary["residual_15_20"] = fit2.residual;
  summary["strichartz"] = strichartz_accumulate(run);
  checks.require("completed", run.status.kind == RunStatus::Completed);
  checks.require("local_energy_drained", eT / e0 <= 0.01);
  checks.require("residual_small", fit2.residual <= 0.05 * target_norm);
  checks.require("residual_decreasing", fit2.residual < fit1.residual);
}

void run_focusing_dichotomy(const Scenario& sc, SeriesTable& series,
                            json& summary, Checks& checks) {
  const double h = get_real(sc, "h", 1.0 / 256.0);
  const double t_final = get_real(sc, "t_final", 20.0);
  const double amp_low = get_real(sc, "amplitude_low", 0.8);
  const double amp_high = get_real(sc, "amplitude_high", 1.3);

  const double threshold_energy = w_energy_r3();
  const double threshold_grad = w_gradient_l2_r3();

  // each amplitude gets the compact ground-state truncation whose
  // quadrature-checked energies and gradients satisfy the dichotomy
  // hypotheses at that amplitude
  const RadialGrid grid_low = make_grid(1.0, get_real(sc, "r_max_low", 30.0), h);
  const RadialState low_data = truncated_ground_state(
      grid_low, amp_low, get_real(sc, "core_low", 1.1),
      get_real(sc, "support_low", 6.0));
  const RadialGrid grid_high = make_grid(1.0, get_real(sc, "r_max_high", 54.0), h);
  const RadialState high_data = truncated_ground_state(
      grid_high, amp_high, get_real(sc, "core_high", 8.0),
      get_real(sc, "support_high", 32.0));

  SolverConfig cfg;
  cfg.h = h;
  cfg.t_final = t_final;
  cfg.snapshot_stride = std::max<int>(1, static_cast<int>(std::round(0.125 / h)));
  cfg.iota = -1;

  series.header = {"amplitude", "t", "gradient_gap"};

  auto run_one = [&](const RadialState& data, double a, const std::string& tag) {
    const EnergyRecord e0 = energy(data, -1);
    summary[tag]["energy"] = e0.total;
    summary[tag]["gradient_sq"] = 2.0 * e0.gradient;
    checks.require(tag + "_below_threshold_energy", e0.total < threshold_energy);
    const Trajectory run = evolve_neumann(data, cfg);
    const TrappingReport trap = trapping_series(run);
    summary[tag]["sign_constant"] = trap.sign_constant;
    summary[tag]["min_abs_gap"] = trap.min_abs_gap;
    checks.require(tag + "_trapping_sign_constant", trap.sign_constant);
    checks.require(tag + "_trapping_gap_positive", trap.min_abs_gap > 0.0);
    for (const auto& pr : trap.series) series.add({a, pr.first, pr.second});
    return run;
  };

  const Trajectory low = run_one(low_data, amp_low, "subcritical");
  checks.require("subcritical_gradient_below",
                 2.0 * low.energy_series.front().gradient < threshold_grad);
  checks.require("subcritical_completed", low.status.kind == RunStatus::Completed);
  if (low.status.kind == RunStatus::Completed) {
    const double norm0 = std::sqrt(norms(low_data).h_sq);
    const ScatterFit f1 = scattering_fit(low, 0.5 * t_final, 0.75 * t_final);
    const ScatterFit f2 = scattering_fit(low, 0.75 * t_final, t_final);
    summary["subcritical"]["residual"] = f2.residual;
    summary["subcritical"]["residual_relative"] = f2.residual / norm0;
    const bool scattered = f2.residual <= 0.05 * norm0 && f2.residual < f1.residual;
    summary["subcritical"]["status"] = scattered ? "scattered" : "undecided";
    checks.require("subcritical_scattered", scattered);
  }

  const Trajectory high = run_one(high_data, amp_high, "supercritical");
  checks.require("supercritical_gradient_above",
                 2.0 * high.energy_series.front().gradient > threshold_grad);
  checks.require("supercritical_blew_up", high.status.kind == RunStatus::BlewUp);
  if (high.status.kind == RunStatus::BlewUp) {
    summary["supercritical"]["status"] = "blew_up";
    summary["supercritical"]["t_star"] = high.status.t_star;
    checks.require("supercritical_t_star_bound", high.status.t_star < 10.0);
  }
}

void run_dilating(const Scenario& sc, SeriesTable& series, json& summary,
                  Checks& checks) {
  const double h = get_real(sc, "h", 1.0 / 64.0);
  const double t_final = get_real(sc, "t_final", 4.0);
  const std::vector<double> ladder = {get_real(sc, "lambda1", 4.0),
                                      get_real(sc, "lambda2", 16.0),
                                      get_real(sc, "lambda3", 64.0)};
  const double r_max = get_real(sc, "r_max", 2.0 * ladder.back() + t_final + 4.0);

  const RadialGrid grid = make_grid(0.0, r_max, h);
  RadialState psi = bump_state(grid, 1.0, 1.0, 1.0, 0.5);

  series.header = {"lambda", "nonlinear", "sup_h_diff", "l5l10_diff",
                   "bt_free_max", "bt_neumann_late_max"};
  std::vector<double> sup_lin, sup_nl, bt_free, bt_neu;
  for (double lambda : ladder) {
    for (int mode = 0; mode < 2; ++mode) {
      DilatingConfig cfg;
      cfg.h = h;
      cfg.r_max = r_max;
      cfg.t_final = t_final;
      cfg.snapshot_stride = std::max<int>(1, static_cast<int>(std::round(0.0625 / h)));
      cfg.nonlinear = (mode == 1);
      cfg.late_window_start = std::min(std::log(lambda) + 1.0, 0.5 * t_final);
      const DilatingReport rep = dilating_compare(psi, lambda, 0.0, cfg);
      series.add({lambda, static_cast<double>(mode), rep.sup_h_diff,
                  rep.l5l10_diff, rep.bt_free_max, rep.bt_neumann_late_max});
      if (mode == 0) {
        sup_lin.push_back(rep.sup_h_diff);
        bt_free.push_back(rep.bt_free_max);
        bt_neu.push_back(rep.bt_neumann_late_max);
      } else {
        sup_nl.push_back(rep.sup_h_diff);
      }
    }
  }

  auto monotone = [](const std::vector<double>& v) {
    for (size_t i = 1; i < v.size(); ++i)
      if (!(v[i] < v[i - 1])) return false;
    return true;
  };
  const double slope_v = slope_loglog(ladder, bt_free);
  const double slope_u = slope_loglog(ladder, bt_neu);
  summary["sup_h_linear"] = sup_lin;
  summary["sup_h_nonlinear"] = sup_nl;
  summary["bt_free_slope"] = slope_v;
  summary["bt_neumann_late_slope"] = slope_u;
  checks.require("linear_monotone", monotone(sup_lin));
  checks.require("linear_final_half", sup_lin.back() <= 0.5 * sup_lin.front());
  checks.require("nonlinear_monotone", monotone(sup_nl));
  checks.require("nonlinear_final_half", sup_nl.back() <= 0.5 * sup_nl.front());
  checks.require("free_trace_exponent", std::abs(slope_v + 1.5) <= 0.3);
  checks.require("neumann_trace_exponent", std::abs(slope_u + 1.5) <= 0.3);
}

void run_channels(const Scenario& sc, SeriesTable& series, json& summary,
                  Checks& checks) {
  const double h = get_real(sc, "h", 1.0 / 256.0);
  const double r_max = get_real(sc, "r_max", 16.0);
  const int n_sets = static_cast<int>(get_int(sc, "n_sets", 20));
  const uint64_t seed = static_cast<uint64_t>(get_int(sc, "seed", 42));
  const std::vector<double> radii = {get_real(sc, "R1", 1.0),
                                     get_real(sc, "R2", 2.0),
                                     get_real(sc, "R3", 4.0)};

  const RadialGrid grid = make_grid(0.0, r_max, h);
  const double t_probe =
      std::round((2.0 * r_max / 3.0) / h) * h;

  series.header = {"set", "R", "left", "right", "rhs", "defect"};
  Rng rng(seed);
  double worst = 0.0;
  for (int set = 0; set < n_sets; ++set) {
    RadialState data = zero_state(grid);
    for (int b = 0; b < 2; ++b) {
      const double c = rng.uniform(1.0, 3.0);
      const double w = rng.uniform(0.5, 1.5);
      const double au = rng.uniform(-1.0, 1.0);
      const double av = rng.uniform(-1.0, 1.0);
      for (int i = 0; i < grid.n_points; ++i) {
        data.u[i] += bump(grid.r(i), c, w, au);
        data.ut[i] += bump(grid.r(i), c, w, av);
      }
    }
    for (double R : radii) {
      const ChannelReport rep = exterior_channel(data, R, t_probe);
      const double rel = rep.defect / std::max(rep.rhs, 1e-30);
      worst = std::max(worst, rel);
      series.add({static_cast<double>(set), R, rep.left_limit, rep.right_limit,
                  rep.rhs, rep.defect});
    }
  }
  summary["worst_relative_defect"] = worst;
  summary["t_probe"] = t_probe;
  checks.require("channel_identity", worst <= 1e-6);
}

void run_zprofile(const Scenario& sc, SeriesTable& series, json& summary,
                  Checks& checks) {
  const double step = get_real(sc, "step", 1e-3);
  const double ell = get_real(sc, "ell", 1.0);
  const double r_start = get_real(sc, "r_start", 50.0 * ell * ell);

  const StationaryProfile z1 = shoot_z(ell, r_start, step);
  summary["zhat_bracket"] = {z1.inner_limit_radius - step, z1.inner_limit_radius};

  const double residual =
      elliptic_residual(z1, +1, 2.0 * z1.inner_limit_radius, 0.5 * r_start);
  summary["elliptic_residual"] = residual;
  checks.require("elliptic_residual", residual <= 1e-5);

  // 1/r tail constant on [20, 50] (scaled by ell^2 for general ell)
  double tail_c = 0.0;
  const double lo = 20.0 * ell * ell, hi = std::min(50.0 * ell * ell, r_start);
  for (double r = lo; r <= hi; r += 64.0 * step) {
    const double d = std::abs(z1.value_at(r) - ell / r);
    tail_c = std::max(tail_c, d * r * r * r);
  }
  summary["tail_constant"] = tail_c;
  checks.require("tail_fit_finite", std::isfinite(tail_c) && tail_c > 0.0);

  // monotonicity: Z' never vanishes on the computed range
  bool monotone = true;
  for (int i = 1; i < z1.size(); ++i)
    if (!(z1.z[i] < z1.z[i - 1] + 1e-300) || z1.z[i] == z1.z[i - 1]) {
      if (ell > 0.0) monotone = monotone && (z1.z[i] < z1.z[i - 1]);
      else monotone = monotone && (z1.z[i] > z1.z[i - 1]);
    }
  summary["monotone"] = monotone;
  checks.require("z_monotone", monotone);

  // scaling covariance against ell' = 2 ell
  const double ell2 = 2.0 * ell;
  const StationaryProfile z2 = shoot_z(ell2, 4.0 * r_start, step);
  double cov = 0.0;
  const double clo = 2.0 * z2.inner_limit_radius;
  const double chi = 2.0 * r_start;
  for (double r = clo; r <= chi; r += 64.0 * step) {
    const double ref = 0.5 * z1.value_at(r / 4.0);
    const double rel = std::abs(z2.value_at(r) - ref) / std::max(std::abs(ref), 1e-30);
    cov = std::max(cov, rel);
  }
  summary["scaling_covariance"] = cov;
  checks.require("scaling_covariance", cov <= 1e-4);

  series.header = {"r", "Z", "Z_minus_tail"};
  for (int i = 0; i < z1.size(); i += 64)
    series.add({z1.r(i), z1.z[i], z1.z[i] - ell / z1.r(i)});
}

void run_profiles(const Scenario& sc, SeriesTable& series, json& summary,
                  Checks& checks) {
  const double h = get_real(sc, "h", 1.0 / 256.0);
  const std::vector<double> ladder = {get_real(sc, "lambda1", 16.0),
                                      get_real(sc, "lambda2", 64.0),
                                      get_real(sc, "lambda3", 256.0)};
  const double r_max = get_real(sc, "r_max", ladder.back() + 16.0);

  const RadialGrid full = make_grid(0.0, r_max, h);
  const RadialGrid ext = make_grid(1.0, r_max, h);

  // compact profile: plain bumps away from the boundary
  ProfileSpec p1;
  p1.klass = ProfileSpec::Compact;
  p1.psi = bump_state(full, 2.5, 1.2, 1.0, 0.8);
  // dilating profile: position vanishes linearly at the origin, velocity
  // does not (both matter for the defect scalings)
  ProfileSpec p2;
  p2.klass = ProfileSpec::Dilating;
  p2.psi = zero_state(full);
  for (int i = 0; i < full.n_points; ++i) {
    const double r = full.r(i);
    if (r < 1.0) {
      const double y = 1.0 - r * r;
      p2.psi.u[i] = 0.9 * r * y * y * y;
      p2.psi.ut[i] = 0.7 * y * y * y;
    }
  }
  for (size_t n = 0; n < ladder.size(); ++n) {
    p1.lambdas.push_back(1.0);
    p1.times.push_back(0.0);
    p2.lambdas.push_back(ladder[n]);
    p2.times.push_back(0.0);
  }
  const std::vector<ProfileSpec> profiles = {p1, p2};

  series.header = {"lambda", "gauge", "h_defect", "l6_defect"};
  std::vector<double> hd, l6d;
  for (size_t n = 0; n < ladder.size(); ++n) {
    const SuperposeResult sup = profile_superpose(profiles, static_cast<int>(n), ext);
    const PythagoreanDefect d =
        pythagorean_defect(sup.data, profiles, static_cast<int>(n));
    hd.push_back(d.h_defect);
    l6d.push_back(d.l6_defect);
    series.add({ladder[n], sup.min_gauge, d.h_defect, d.l6_defect});
  }

  auto monotone = [](const std::vector<double>& v) {
    for (size_t i = 1; i < v.size(); ++i)
      if (!(v[i] < v[i - 1])) return false;
    return true;
  };
  summary["h_defects"] = hd;
  summary["l6_defects"] = l6d;
  checks.require("h_defect_monotone", monotone(hd));
  checks.require("h_defect_final_quarter", hd.back() <= 0.25 * hd.front());
  checks.require("l6_defect_monotone", monotone(l6d));
  checks.require("l6_defect_final_quarter", l6d.back() <= 0.25 * l6d.front());

  // non-orthogonal control: equal parameters leave a bilinear defect
  ProfileSpec q1 = p1, q2 = p1;
  q2.psi = bump_state(full, 2.8, 1.0, 0.7, 0.4);
  const std::vector<ProfileSpec> clash = {q1, q2};
  const SuperposeResult sup0 = profile_superpose(clash, 0, ext);
  const PythagoreanDefect d0 = pythagorean_defect(sup0.data, clash, 0);
  summary["nonorthogonal_h_defect"] = d0.h_defect;
  summary["nonorthogonal_flagged"] = !sup0.orthogonal;
  checks.require("nonorthogonal_detected", !sup0.orthogonal && d0.h_defect > 1e-3);
}

void run_local_decay(const Scenario& sc, SeriesTable& series, json& summary,
                     Checks& checks) {
  const double h = get_real(sc, "h", 1.0 / 256.0);
  const double r_max = get_real(sc, "r_max", 24.0);
  const double dt_snap = get_real(sc, "dt_snap", 0.0625);

  const RadialGrid grid = make_grid(1.0, r_max, h);
  const RadialState data = bump_state(grid, 2.5, 1.0, 1.0, 0.6);
  const double support_radius = 3.5;
  const double t_final = std::min(2.0 * r_max / 3.0, r_max - support_radius - 1.0);
  const RadialGrid eval_grid = make_grid(1.0, r_max - t_final - 1.0, h);

  const Trajectory traj = char_trajectory(data, t_final, dt_snap, eval_grid);
  const double data_norm_sq = norms(data).h_sq;

  series.header = {"t", "e_loc_R2", "e_loc_R4", "e_loc_R8", "weighted_l2"};
  std::vector<LocalEnergyReport> locs;
  for (double R : {2.0, 4.0, 8.0}) locs.push_back(local_energy(traj, R));
  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    const double w = std::sqrt(norms(traj.snapshots[k].state).weighted_l2_sq);
    series.add({traj.snapshots[k].t, locs[0].series[k].second,
                locs[1].series[k].second, locs[2].series[k].second, w});
  }

  const char* names[3] = {"C_R2", "C_R4", "C_R8"};
  for (int j = 0; j < 3; ++j)
    summary[names[j]] = locs[j].time_integral / data_norm_sq;

  // homogeneity: doubling the data multiplies the integral by exactly 4
  RadialState doubled = data;
  for (double& v : doubled.u) v *= 2.0;
  for (double& v : doubled.ut) v *= 2.0;
  const Trajectory traj2 = char_trajectory(doubled, t_final, dt_snap, eval_grid);
  const double ratio = local_energy(traj2, 4.0).time_integral / locs[1].time_integral;
  summary["doubling_ratio"] = ratio;
  checks.require("doubling_homogeneity", std::abs(ratio - 4.0) <= 1e-10);

  // weighted decay at twice the support radius
  const double t_check = 2.0 * support_radius;
  double w_at = 0.0, w_0 = 0.0;
  for (size_t k = 0; k < traj.snapshots.size(); ++k) {
    const double w = std::sqrt(norms(traj.snapshots[k].state).weighted_l2_sq);
    if (k == 0) w_0 = w;
    if (std::abs(traj.snapshots[k].t - t_check) < 0.5 * dt_snap) w_at = w;
  }
  summary["weighted_decay_ratio"] = w_at / w_0;
  checks.require("weighted_decay", w_at <= 0.05 * w_0);
}

void run_virial(const Scenario& sc, SeriesTable& series, json& summary,
                Checks& checks) {
  const double h = get_real(sc, "h", 1.0 / 256.0);
  const double r_max = get_real(sc, "r_max", 44.0);
  const double t_final = get_real(sc, "t_final", 10.0);
  const double amp = get_real(sc, "amplitude", 1.3);

  const RadialGrid grid = make_grid(1.0, r_max, h);
  const RadialState data = truncated_ground_state(
      grid, amp, get_real(sc, "core", 8.0), get_real(sc, "support", 32.0));
  const EnergyRecord e0 = energy(data, -1);
  checks.require("below_threshold_energy", e0.total < w_energy_r3());
  checks.require("above_threshold_gradient", 2.0 * e0.gradient > w_gradient_l2_r3());

  SolverConfig cfg;
  cfg.h = h;
  cfg.t_final = t_final;
  cfg.snapshot_stride = std::max<int>(1, static_cast<int>(std::round(0.03125 / h)));
  cfg.iota = -1;
  const Trajectory run = evolve_neumann(data, cfg);
  checks.require("blew_up", run.status.kind == RunStatus::BlewUp);
  if (run.status.kind == RunStatus::BlewUp)
    summary["t_star"] = run.status.t_star;

  const std::vector<VirialRow> rows = virial_series(run);
  summary["delta0"] = 12.0 * (w_energy_r3() - e0.total);

  series.header = {"t", "y", "yp", "ypp_measured", "ypp_lower"};
  const double t_cut = (run.status.kind == RunStatus::BlewUp)
                           ? 0.8 * run.status.t_star
                           : run.snapshots.back().t;
  double min_margin = std::numeric_limits<double>::infinity();
  for (const VirialRow& row : rows) {
    series.add({row.t, row.y, row.yp, row.ypp_measured, row.ypp_lower});
    if (!std::isnan(row.ypp_measured) && row.t <= t_cut) {
      const double tol = 0.1 * std::max(1.0, std::abs(row.ypp_lower));
      min_margin = std::min(min_margin, row.ypp_measured - row.ypp_lower + tol);
    }
  }
  summary["min_margin_with_tol"] = min_margin;
  checks.require("virial_lower_bound", min_margin >= 0.0);
}

// --------------------------------------------------------------- runner

void write_artifacts(const std::filesystem::path& dir, const Scenario& sc,
                     const SeriesTable& series, const json& summary) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "series.csv");
    for (size_t j = 0; j < series.header.size(); ++j)
      csv << (j ? "," : "") << series.header[j];
    csv << "\n";
    for (const auto& row : series.rows) {
      for (size_t j = 0; j < row.size(); ++j)
        csv << (j ? "," : "") << fmt17(row[j]);
      csv << "\n";
    }
  }
  {
    std::ofstream js(dir / "summary.json");
    js << summary.dump(2) << "\n";
  }
  {
    json meta;
    meta["name"] = sc.name;
    meta["kind"] = sc.kind;
    meta["version"] = kVersion;
    meta["output_dir"] = dir.string();
    json params = json::object();
    for (const auto& [key, val] : sc.params) {
      if (std::holds_alternative<int64_t>(val)) params[key] = std::get<int64_t>(val);
      else if (std::holds_alternative<double>(val)) params[key] = std::get<double>(val);
      else params[key] = std::get<std::string>(val);
    }
    meta["params"] = params;
    std::ofstream js(dir / "meta.json");
    js << meta.dump(2) << "\n";
  }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  std::istringstream in(text);
  return parse_lines(in);
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot open config: " + path);
  return parse_lines(in);
}

ScenarioOutcome run_scenario(const std::string& config_path) {
  Scenario sc;
  try {
    sc = parse_scenario_file(config_path);
  } catch (const ConfigParseError& e) {
    return {2, e.what()};
  }

  std::filesystem::path out_dir = sc.output_dir;
  if (const char* env = std::getenv("WAVELAB_OUT")) out_dir = env;

  SeriesTable series;
  json summary;
  Checks checks;
  try {
    if (sc.kind == "LinearGroup") run_linear_group(sc, series, summary, checks);
    else if (sc.kind == "DefocusingScatter") run_defocusing_scatter(sc, series, summary, checks);
    else if (sc.kind == "FocusingDichotomy") run_focusing_dichotomy(sc, series, summary, checks);
    else if (sc.kind == "Dilating") run_dilating(sc, series, summary, checks);
    else if (sc.kind == "Channels") run_channels(sc, series, summary, checks);
    else if (sc.kind == "ZProfile") run_zprofile(sc, series, summary, checks);
    else if (sc.kind == "Profiles") run_profiles(sc, series, summary, checks);
    else if (sc.kind == "LocalDecay") run_local_decay(sc, series, summary, checks);
    else if (sc.kind == "Virial") run_virial(sc, series, summary, checks);
  } catch (const ConfigParseError& e) {
    return {2, e.what()};
  } catch (const Error& e) {
    json failed = json::object();
    failed["error"] = e.what();
    write_artifacts(out_dir, sc, series, failed);
    return {3, std::string("scenario failed: ") + e.what()};
  }

  json chk = json::object();
  for (const auto& [name, ok] : checks.items) chk[name] = ok;
  summary["checks"] = chk;
  summary["passed"] = checks.all_ok();
  write_artifacts(out_dir, sc, series, summary);
  if (!checks.all_ok()) {
    std::string bad;
    for (const auto& [name, ok] : checks.items)
      if (!ok) bad += (bad.empty() ? "" : ", ") + name;
    return {3, "diagnostic assertion failed: " + bad};
  }
  return {0, "ok"};
}

std::string list_scenarios(bool as_json) {
  if (as_json) {
    json out = json::array();
    for (const std::string& kind : kKinds) {
      json item;
      item["kind"] = kind;
      item["summary"] = kKindBlurbs.at(kind);
      out.push_back(item);
    }
    return out.dump(2) + "\n";
  }
  std::string out = "Scenario kinds:\n";
  for (const std::string& kind : kKinds) {
    out += "  " + kind + "\n      " + kKindBlurbs.at(kind) + "\n";
  }
  return out;
}

}  // namespace wavelab
