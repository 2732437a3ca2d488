#include "wavelab/core.hpp"

#include <cmath>

#include "wavelab/errors.hpp"
#include "wavelab/quadrature.hpp"

namespace wavelab {

namespace {
constexpr double kFourPi = 4.0 * 3.14159265358979323846;

int snap_to_node(const RadialGrid& g, double r) {
  const int i = static_cast<int>(std::round((r - g.r_min) / g.h));
  if (i < 0 || i >= g.n_points) throw ROutOfRange();
  return i;
}
}  // namespace

double trapz(const std::vector<double>& f, double h) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

std::vector<double> cumtrapz(const std::vector<double>& f, double h) {
  std::vector<double> out(f.size(), 0.0);
  for (size_t i = 1; i < f.size(); ++i)
    out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return out;
}

std::vector<double> deriv_centered(const std::vector<double>& f, double h) {
  const size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

double lerp_uniform(const std::vector<double>& f, double x0, double h, double x) {
  const double pos = (x - x0) / h;
  if (pos <= 0.0) return f.front();
  const double last = static_cast<double>(f.size() - 1);
  if (pos >= last) return f.back();
  const size_t j = static_cast<size_t>(pos);
  const double w = pos - static_cast<double>(j);
  return f[j] + w * (f[j + 1] - f[j]);
}

NormReport norms(const RadialState& state) {
  const RadialGrid& g = state.grid;
  const int n = g.n_points;
  const std::vector<double> du = deriv_centered(state.u, g.h);
  std::vector<double> grad(n), kin(n), six(n), wgt(n);
  for (int i = 0; i < n; ++i) {
    const double r2 = g.r(i) * g.r(i);
    grad[i] = du[i] * du[i] * r2;
    kin[i] = state.ut[i] * state.ut[i] * r2;
    const double u2 = state.u[i] * state.u[i];
    six[i] = u2 * u2 * u2 * r2;
    wgt[i] = u2;
  }
  NormReport rep;
  rep.h_sq = kFourPi * (trapz(grad, g.h) + trapz(kin, g.h));
  rep.l6_pow6 = kFourPi * trapz(six, g.h);
  rep.weighted_l2_sq = kFourPi * trapz(wgt, g.h);
  return rep;
}

HardyReport hardy_check(const RadialState& state) {
  const RadialGrid& g = state.grid;
  if (!g.exterior()) throw WrongDomain("hardy_check needs r_min = 1");
  const int n = g.n_points;
  const std::vector<double> du = deriv_centered(state.u, g.h);
  std::vector<double> usq(n), grad(n);
  for (int i = 0; i < n; ++i) {
    usq[i] = state.u[i] * state.u[i];
    grad[i] = du[i] * du[i] * g.r(i) * g.r(i);
  }
  HardyReport rep;
  rep.lhs = trapz(usq, g.h);
  rep.rhs = 4.0 * trapz(grad, g.h);
  rep.boundary_sq = state.u[0] * state.u[0];
  return rep;
}

EnergyRecord energy(const RadialState& state, int iota, double time) {
  const RadialGrid& g = state.grid;
  const int n = g.n_points;
  const std::vector<double> du = deriv_centered(state.u, g.h);
  std::vector<double> grad(n), kin(n), six(n);
  for (int i = 0; i < n; ++i) {
    const double r2 = g.r(i) * g.r(i);
    grad[i] = du[i] * du[i] * r2;
    kin[i] = state.ut[i] * state.ut[i] * r2;
    const double u2 = state.u[i] * state.u[i];
    six[i] = u2 * u2 * u2 * r2;
  }
  EnergyRecord rec;
  rec.gradient = 0.5 * kFourPi * trapz(grad, g.h);
  rec.kinetic = 0.5 * kFourPi * trapz(kin, g.h);
  rec.potential = iota * kFourPi * trapz(six, g.h) / 6.0;
  rec.total = rec.gradient + rec.kinetic + rec.potential;
  rec.time = time;
  return rec;
}

RadialState extend_to_origin(const RadialState& state) {
  const RadialGrid& g = state.grid;
  if (!g.exterior()) throw WrongDomain("extend_to_origin needs r_min = 1");
  const double cells = 1.0 / g.h;
  const double k = std::round(cells);
  if (std::abs(cells - k) > 1e-9 * std::max(1.0, cells)) throw NonIntegralSpan();
  const int extra = static_cast<int>(k);

  RadialState out;
  out.grid = RadialGrid{0.0, g.h, g.n_points + extra};
  out.u.resize(out.grid.n_points);
  out.ut.assign(out.grid.n_points, 0.0);
  for (int i = 0; i < extra; ++i) out.u[i] = state.u[0];
  for (int i = 0; i < g.n_points; ++i) {
    out.u[extra + i] = state.u[i];
    out.ut[extra + i] = state.ut[i];
  }
  return out;
}

RadialState scale_critical(const RadialState& state, double lambda) {
  const RadialGrid& g = state.grid;
  if (g.r_min != 0.0) throw WrongDomain("scale_critical needs r_min = 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw NonPositiveLambda();

  const double au = 1.0 / std::sqrt(lambda);
  const double ag = au / lambda;  // lambda^{-3/2}
  RadialState out = zero_state(g);
  const double rmax = g.r_max();
  for (int i = 0; i < g.n_points; ++i) {
    const double rs = g.r(i) / lambda;
    if (rs > rmax) continue;  // treated as decayed to zero
    out.u[i] = au * lerp_uniform(state.u, g.r_min, g.h, rs);
    out.ut[i] = ag * lerp_uniform(state.ut, g.r_min, g.h, rs);
  }
  return out;
}

IbpReport ibp_identity(const RadialState& state, double R) {
  const RadialGrid& g = state.grid;
  const int i0 = snap_to_node(g, R);
  const int n = g.n_points;

  std::vector<double> zeta(n);
  for (int i = 0; i < n; ++i) zeta[i] = g.r(i) * state.u[i];
  const std::vector<double> dz = deriv_centered(zeta, g.h);
  const std::vector<double> du = deriv_centered(state.u, g.h);

  std::vector<double> a(n - i0), b(n - i0);
  for (int i = i0; i < n; ++i) {
    a[i - i0] = dz[i] * dz[i];
    b[i - i0] = du[i] * du[i] * g.r(i) * g.r(i);
  }
  IbpReport rep;
  const double Rnode = g.r(i0);
  rep.lhs = trapz(a, g.h) + Rnode * state.u[i0] * state.u[i0];
  rep.rhs = trapz(b, g.h);
  return rep;
}

}  // namespace wavelab
