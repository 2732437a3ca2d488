#include "wavelab/lingroup.hpp"

#include <algorithm>
#include <cmath>

#include "wavelab/errors.hpp"
#include "wavelab/quadrature.hpp"

namespace wavelab {

CharPair neumann_char_pair(const RadialState& data, double t_max) {
  const RadialGrid& g = data.grid;
  if (!g.exterior()) throw WrongDomain("neumann_char_pair needs r_min = 1");
  if (!(t_max >= 0.0)) throw NegativeTime("t_max must be >= 0");
  const double h = g.h;
  const int n = g.n_points;
  const int T = static_cast<int>(std::ceil(t_max / h - 1e-9));
  // the s<=1 formulas read zeta data at 2-s, up to radius 1 + T h
  if (T >= n) throw HorizonExceedsGrid();

  std::vector<double> z0(n), z1(n);
  for (int i = 0; i < n; ++i) {
    z0[i] = g.r(i) * data.u[i];
    z1[i] = g.r(i) * data.ut[i];
  }
  const std::vector<double> dz0 = deriv_centered(z0, h);
  const std::vector<double> i1 = cumtrapz(z1, h);

  CharPair p;
  p.h = h;
  p.idx_one = T;
  const int ns = T + n;
  p.phi_plus.assign(ns, 0.0);
  p.phi_minus.assign(ns, 0.0);
  p.dphi_plus.assign(ns, 0.0);
  p.dphi_minus.assign(ns, 0.0);

  // s >= 1: direct formulas in (zeta0, zeta1)
  for (int i = 0; i < n; ++i) {
    const int j = T + i;
    p.phi_plus[j] = 0.5 * (z0[i] - i1[i]);
    p.phi_minus[j] = 0.5 * (z0[i] + i1[i]);
    p.dphi_plus[j] = 0.5 * (dz0[i] - z1[i]);
    p.dphi_minus[j] = 0.5 * (dz0[i] + z1[i]);
  }

  // s = 1 - k h: exponential kernel integrals accumulated right to left,
  // K(s-h) = e^{-h} K(s) + trapezoid increment
  const double eh = std::exp(-h);
  double ka = 0.0, kb = 0.0;  // int_1^{2-s} e^{s+sigma-2} dz0, same for z1
  for (int k = 1; k <= T; ++k) {
    ka = eh * ka + 0.5 * h * (eh * dz0[k - 1] + dz0[k]);
    kb = eh * kb + 0.5 * h * (eh * z1[k - 1] + z1[k]);
    const int j = T - k;
    const double mem = std::exp(-k * h) * z0[0];
    p.phi_plus[j] = ka + kb - 0.5 * z0[k] - 0.5 * i1[k] + mem;
    p.phi_minus[j] = ka - kb - 0.5 * z0[k] + 0.5 * i1[k] + mem;
    p.dphi_plus[j] = ka + kb + mem - 0.5 * dz0[k] - 0.5 * z1[k];
    p.dphi_minus[j] = ka - kb + mem - 0.5 * dz0[k] + 0.5 * z1[k];
  }
  return p;
}

RadialState char_eval(const CharPair& pair, double t, const RadialGrid& grid) {
  if (!grid.exterior()) throw WrongDomain("char_eval needs r_min = 1");
  const double slack = 1e-9 * std::max(1.0, std::abs(t));
  if (grid.r_min - std::abs(t) < pair.s_min() - slack ||
      grid.r_max() + std::abs(t) > pair.s_max() + slack)
    throw TimeOutOfHorizon();

  const double s0 = pair.s_min();
  RadialState out = zero_state(grid);
  for (int i = 0; i < grid.n_points; ++i) {
    const double r = grid.r(i);
    const double sm = r - t, sp = r + t;
    const double fp = lerp_uniform(pair.phi_plus, s0, pair.h, sm);
    const double fm = lerp_uniform(pair.phi_minus, s0, pair.h, sp);
    const double dfp = lerp_uniform(pair.dphi_plus, s0, pair.h, sm);
    const double dfm = lerp_uniform(pair.dphi_minus, s0, pair.h, sp);
    out.u[i] = (fp + fm) / r;
    out.ut[i] = (-dfp + dfm) / r;
  }
  return out;
}

namespace {

// Per-slice cumulative tables over sigma >= 1: plain int sigma f and the
// kernel-weighted int e^{sigma-1} sigma f. The kernel table is only ever
// read at sigma <= 1 + t, so it is kept short to avoid exp overflow.
struct SliceTables {
  double h = 0.0;
  std::vector<double> plain;   // int_1^x sigma f
  std::vector<double> kernel;  // int_1^x e^{sigma-1} sigma f
};

SliceTables build_slice(const std::function<double(double, double)>& f,
                        double tau, double sigma_max, double kernel_max,
                        double h) {
  const int m = std::max(2, static_cast<int>(std::ceil((sigma_max - 1.0) / h - 1e-9)) + 1);
  const int mk = std::min(m, std::max(2, static_cast<int>(std::ceil((kernel_max - 1.0) / h - 1e-9)) + 1));
  std::vector<double> a(m), b(mk);
  for (int j = 0; j < m; ++j) {
    const double sigma = 1.0 + j * h;
    a[j] = sigma * f(tau, sigma);
    if (j < mk) b[j] = std::exp(sigma - 1.0) * a[j];
  }
  SliceTables t;
  t.h = h;
  t.plain = cumtrapz(a, h);
  t.kernel = cumtrapz(b, h);
  return t;
}

double table_at(const std::vector<double>& c, double h, double x) {
  return lerp_uniform(c, 1.0, h, x);
}

// u(j dt, r) of the Duhamel integral, integrating the slice values over
// tau_k = k dt, k = 0..j.
double duhamel_value(const std::vector<SliceTables>& slices, double dt,
                     int j, double r) {
  const double t = j * dt;
  std::vector<double> integrand(j + 1, 0.0);
  for (int k = 0; k <= j; ++k) {
    const double tau = k * dt;
    const double lo = r - t + tau;
    const double hi = r + t - tau;
    if (hi <= lo) continue;
    const SliceTables& tb = slices[k];
    if (lo >= 1.0) {
      // pure d'Alembert average
      integrand[k] = 0.5 * (table_at(tb.plain, tb.h, hi) - table_at(tb.plain, tb.h, lo));
    } else {
      // backward cone meets the boundary: exponential kernel up to 2-r+t-tau,
      // then half the plain integral from there
      const double brk = 2.0 - r + t - tau;
      const double kern = std::exp(lo - 1.0) * table_at(tb.kernel, tb.h, brk);
      const double plain = table_at(tb.plain, tb.h, hi) - table_at(tb.plain, tb.h, brk);
      integrand[k] = kern + 0.5 * plain;
    }
  }
  return trapz(integrand, dt) / r;
}

}  // namespace

RadialState duhamel_neumann(const std::function<double(double, double)>& f,
                            double t, const RadialGrid& grid) {
  if (!grid.exterior()) throw WrongDomain("duhamel_neumann needs r_min = 1");
  if (t < 0.0) throw NegativeTime();
  if (t == 0.0) return zero_state(grid);

  const double h = grid.h;
  const int m = std::max(1, static_cast<int>(std::round(t / h)));
  const double dt = t / m;  // slice spacing, t lands exactly on slice m
  const double sigma_max = grid.r_max() + t + 2.0 * dt + 2.0 * h;
  const double kernel_max = 1.0 + t + 2.0 * dt + 2.0 * h;

  std::vector<SliceTables> slices(m + 2);
  for (int k = 0; k <= m + 1; ++k)
    slices[k] = build_slice(f, k * dt, sigma_max, kernel_max, h);

  RadialState out = zero_state(grid);
  for (int i = 0; i < grid.n_points; ++i) {
    const double r = grid.r(i);
    out.u[i] = duhamel_value(slices, dt, m, r);
    const double up = duhamel_value(slices, dt, m + 1, r);
    if (m >= 2) {
      out.ut[i] = (up - duhamel_value(slices, dt, m - 1, r)) / (2.0 * dt);
    } else {
      out.ut[i] = (up - out.u[i]) / dt;
    }
  }
  return out;
}

namespace {

// Odd extension of zeta = r u through r = 0, sampled on [-rmax, rmax].
struct OddExtension {
  double h = 0.0;
  double s0 = 0.0;  // = -rmax
  std::vector<double> z0, z1, dz0, i1;

  double at_z0(double s) const { return lerp_uniform(z0, s0, h, s); }
  double at_z1(double s) const { return lerp_uniform(z1, s0, h, s); }
  double at_dz0(double s) const { return lerp_uniform(dz0, s0, h, s); }
  double at_i1(double s) const { return lerp_uniform(i1, s0, h, s); }
};

OddExtension odd_extend(const RadialState& data) {
  const RadialGrid& g = data.grid;
  const int n = g.n_points;
  OddExtension e;
  e.h = g.h;
  e.s0 = -g.r_max();
  e.z0.assign(2 * n - 1, 0.0);
  e.z1.assign(2 * n - 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const double z0 = g.r(i) * data.u[i];
    const double z1 = g.r(i) * data.ut[i];
    e.z0[n - 1 + i] = z0;
    e.z0[n - 1 - i] = -z0;
    e.z1[n - 1 + i] = z1;
    e.z1[n - 1 - i] = -z1;
  }
  e.dz0 = deriv_centered(e.z0, g.h);
  e.i1 = cumtrapz(e.z1, g.h);
  return e;
}

}  // namespace

RadialState free_linear_evolve(const RadialState& data, double t) {
  const RadialGrid& g = data.grid;
  if (g.r_min != 0.0) throw WrongDomain("free_linear_evolve needs r_min = 0");
  if (std::abs(t) > 2.0 * g.r_max()) throw TimeOutOfHorizon();

  const OddExtension e = odd_extend(data);
  RadialState out = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) {
    const double r = g.r(i);
    const double sm = r - t, sp = r + t;
    const double zeta = 0.5 * (e.at_z0(sm) + e.at_z0(sp)) +
                        0.5 * (e.at_i1(sp) - e.at_i1(sm));
    const double zt = 0.5 * (e.at_dz0(sp) - e.at_dz0(sm)) +
                      0.5 * (e.at_z1(sp) + e.at_z1(sm));
    if (i == 0) {
      // r -> 0 limits by oddness: u = dzeta/dr, ut = d2zeta/drdt
      out.u[0] = e.at_dz0(t) + e.at_z1(t);
      const double hh = g.h;
      const double d2z0 = (e.at_z0(t + hh) - 2.0 * e.at_z0(t) + e.at_z0(t - hh)) / (hh * hh);
      const double dz1 = (e.at_z1(t + hh) - e.at_z1(t - hh)) / (2.0 * hh);
      out.ut[0] = d2z0 + dz1;
    } else {
      out.u[i] = zeta / r;
      out.ut[i] = zt / r;
    }
  }
  return out;
}

FreeZetaDerivs free_zeta_derivatives(const RadialState& data, double t) {
  const RadialGrid& g = data.grid;
  if (g.r_min != 0.0) throw WrongDomain("free_zeta_derivatives needs r_min = 0");
  const OddExtension e = odd_extend(data);
  FreeZetaDerivs d;
  d.dr.resize(g.n_points);
  d.dt.resize(g.n_points);
  for (int i = 0; i < g.n_points; ++i) {
    const double r = g.r(i);
    const double sm = r - t, sp = r + t;
    d.dr[i] = 0.5 * (e.at_dz0(sm) + e.at_dz0(sp)) + 0.5 * (e.at_z1(sp) - e.at_z1(sm));
    d.dt[i] = 0.5 * (e.at_dz0(sp) - e.at_dz0(sm)) + 0.5 * (e.at_z1(sp) + e.at_z1(sm));
  }
  return d;
}

RadiationField radiation_extract(const CharPair& pair) {
  RadiationField f;
  f.s0 = pair.s_min();
  f.h = pair.h;
  f.g.resize(pair.size());
  for (int j = 0; j < pair.size(); ++j) f.g[j] = -pair.dphi_plus[j];
  return f;
}

RadialState free_data_from_radiation(const RadiationField& field,
                                     const RadialGrid& grid) {
  if (grid.r_min != 0.0)
    throw WrongDomain("free_data_from_radiation needs r_min = 0");
  double gmax = 0.0;
  for (double v : field.g) {
    if (!std::isfinite(v)) throw NonIntegrableField();
    gmax = std::max(gmax, std::abs(v));
  }
  // the exterior memory tail decays like e^{s}, so the left end is small but
  // rarely exactly zero
  if (gmax > 0.0 && std::abs(field.g.front()) > 1e-2 * gmax)
    throw NonIntegrableField("field does not vanish at the left end");

  // phi(s) = -int_{-inf}^s G; phi' = -G exactly
  std::vector<double> neg_g(field.g.size());
  for (size_t j = 0; j < field.g.size(); ++j) neg_g[j] = -field.g[j];
  const std::vector<double> phi = cumtrapz(neg_g, field.h);
  const std::vector<double> dg = deriv_centered(field.g, field.h);

  auto phi_at = [&](double s) { return lerp_uniform(phi, field.s0, field.h, s); };
  auto g_at = [&](double s) { return lerp_uniform(field.g, field.s0, field.h, s); };

  RadialState out = zero_state(grid);
  out.u[0] = -2.0 * g_at(0.0);
  out.ut[0] = 2.0 * lerp_uniform(dg, field.s0, field.h, 0.0);
  for (int i = 1; i < grid.n_points; ++i) {
    const double r = grid.r(i);
    out.u[i] = (phi_at(r) - phi_at(-r)) / r;
    out.ut[i] = (g_at(r) - g_at(-r)) / r;  // (-phi'(r) + phi'(-r))/r
  }
  return out;
}

RadialState restrict_to_exterior(const RadialState& state) {
  const RadialGrid& g = state.grid;
  if (g.r_min != 0.0) throw WrongDomain("restrict_to_exterior needs r_min = 0");
  const double cells = 1.0 / g.h;
  const double k = std::round(cells);
  if (std::abs(cells - k) > 1e-9 * std::max(1.0, cells)) throw NonIntegralSpan();
  const int skip = static_cast<int>(k);
  if (skip + 2 >= g.n_points) throw DomainTooSmall();

  RadialState out;
  out.grid = RadialGrid{1.0, g.h, g.n_points - skip};
  out.u.assign(state.u.begin() + skip, state.u.end());
  out.ut.assign(state.ut.begin() + skip, state.ut.end());
  return out;
}

}  // namespace wavelab
