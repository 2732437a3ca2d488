#include <doctest.h>

#include <cmath>
#include <functional>

#include "test_util.hpp"
#include "wavelab/core.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/lingroup.hpp"
#include "wavelab/quadrature.hpp"

using namespace wavelab;
using namespace wavelab_test;

namespace {

RadialState inverse_r_state(const RadialGrid& g) {
  RadialState s = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) s.u[i] = 1.0 / g.r(i);
  return s;
}

// test-side oracle: zeta leapfrog for zeta_tt - zeta_rr = r f(t,r) with the
// same Neumann ghost, zero data, unit Courant
RadialState forced_leapfrog(const std::function<double(double, double)>& f,
                            double t_final, const RadialGrid& g) {
  const double h = g.h;
  const int n = g.n_points;
  const int steps = static_cast<int>(std::round(t_final / h));
  std::vector<double> prev(n, 0.0), cur(n, 0.0), next(n, 0.0);
  auto src = [&](int i, double t) { return g.r(i) * f(t, g.r(i)); };
  for (int i = 1; i < n - 1; ++i) cur[i] = 0.5 * h * h * src(i, 0.0);
  cur[0] = 0.5 * h * h * src(0, 0.0);
  cur[n - 1] = 0.0;
  std::vector<double> before = prev;
  for (int k = 1; k <= steps; ++k) {
    const double t = k * h;
    for (int i = 1; i < n - 1; ++i)
      next[i] = cur[i - 1] + cur[i + 1] - prev[i] + h * h * src(i, t);
    const double ghost = cur[1] - 2.0 * h * cur[0];
    next[0] = ghost + cur[1] - prev[0] + h * h * src(0, t);
    next[n - 1] = cur[n - 2];
    before = prev;
    prev = cur;
    cur = next;
  }
  // levels: before = steps-1, prev = steps, cur = steps+1
  RadialState out = zero_state(g);
  for (int i = 0; i < n; ++i) {
    out.u[i] = prev[i] / g.r(i);
    out.ut[i] = (cur[i] - before[i]) / (2.0 * h * g.r(i));
  }
  return out;
}

}  // namespace

TEST_CASE("neumann_char_pair: closed forms for (1/r, 0)") {
  const double h = 1.0 / 256.0;
  const RadialGrid g = make_grid(1.0, 9.0, h);
  const CharPair pair = neumann_char_pair(inverse_r_state(g), 4.0);

  for (int j = 0; j < pair.size(); ++j) {
    const double s = pair.s(j);
    if (s >= 1.0) {
      CHECK(pair.phi_plus[j] == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(pair.phi_minus[j] == doctest::Approx(0.5).epsilon(1e-12));
    } else {
      CHECK(pair.phi_plus[j] ==
            doctest::Approx(std::exp(s - 1.0) - 0.5).epsilon(1e-12));
    }
  }

  const CharPair zero = neumann_char_pair(zero_state(g), 4.0);
  for (double v : zero.phi_plus) CHECK(v == 0.0);
  for (double v : zero.phi_minus) CHECK(v == 0.0);

  CHECK_THROWS_AS(neumann_char_pair(inverse_r_state(g), 100.0), HorizonExceedsGrid);
}

TEST_CASE("neumann_char_pair: running integral of the velocity") {
  const double h = 1.0 / 256.0;
  const RadialGrid g = make_grid(1.0, 9.0, h);
  RadialState s = zero_state(g);
  for (int i = 0; i < g.n_points; ++i)
    s.ut[i] = (g.r(i) <= 2.0) ? 1.0 / g.r(i) : 0.0;
  const CharPair pair = neumann_char_pair(s, 2.0);
  for (int j = pair.idx_one; j < pair.size(); j += 32) {
    const double sv = pair.s(j);
    const double expect = std::min(sv, 2.0) - 1.0;
    // the sharp cutoff in the velocity costs one trapezoid cell
    CHECK(std::abs((pair.phi_minus[j] - pair.phi_plus[j]) - expect) <= h);
  }

  // consistency: phi+ + phi- = zeta0 on s >= 1
  for (int j = pair.idx_one; j < pair.size(); j += 64) {
    const int i = j - pair.idx_one;
    CHECK(pair.phi_plus[j] + pair.phi_minus[j] ==
          doctest::Approx(g.r(i) * s.u[i]).epsilon(1e-12));
  }
}

TEST_CASE("char_eval: boundary memory u(t,1) = e^{-t} and static region") {
  const double h = 1.0 / 512.0;
  const RadialGrid g = make_grid(1.0, 9.0, h);
  const CharPair pair = neumann_char_pair(inverse_r_state(g), 4.0);
  const RadialGrid eval = make_grid(1.0, 5.0, h);

  const RadialState at0 = char_eval(pair, 0.0, eval);
  for (int i = 0; i < eval.n_points; i += 100)
    CHECK(at0.u[i] == doctest::Approx(1.0 / eval.r(i)).epsilon(1e-12));

  const RadialState at05 = char_eval(pair, 0.5, eval);
  CHECK(at05.u[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-10));

  const RadialState at2 = char_eval(pair, 2.0, eval);
  const int i4 = static_cast<int>(std::round(3.0 / h));
  CHECK(at2.u[i4] == doctest::Approx(0.25).epsilon(1e-12));

  // velocity: du/dt (t,1) = -e^{-t}
  CHECK(at05.ut[0] == doctest::Approx(-std::exp(-0.5)).epsilon(1e-8));

  CHECK_THROWS_AS(char_eval(pair, 6.0, eval), TimeOutOfHorizon);
}

TEST_CASE("char_eval: energy conservation") {
  // closed-form data (1/r, 0): H-norm^2 on [1, R] equals 4pi (1 - 1/R) for
  // every t; check the analytic pieces by fine Simpson quadrature
  const double R = 5.0;
  auto h_norm_sq = [&](double t) {
    const double wave = simpson(
        [&](double r) {
          const double e = std::exp(r - t - 1.0);
          const double ur = e * (1.0 / r - 1.0 / (r * r));
          const double ut = -e / r;
          return (ur * ur + ut * ut) * r * r;
        },
        1.0, 1.0 + t, 40000);
    const double stat = simpson([](double r) { return 1.0 / (r * r); },
                                1.0 + t, R, 40000);
    return kFourPi * (wave + stat);
  };
  const double e0 = kFourPi * (1.0 - 1.0 / R);
  for (double t : {0.5, 1.5, 3.0}) {
    CHECK(std::abs(h_norm_sq(t) - e0) <= 1e-10 * e0);
  }

  // sampled-data path: discrete drift is O(h^2)
  const double h = 1.0 / 256.0;
  const RadialGrid g = make_grid(1.0, 17.0, h);
  Rng rng(11);
  const RadialState data = random_state(g, rng, 1.5, 6.0, true);
  const CharPair pair = neumann_char_pair(data, 4.0);
  const RadialGrid eval = make_grid(1.0, 13.0, h);
  const double n0 = norms(char_eval(pair, 0.0, eval)).h_sq;
  for (double t : {1.0, 2.0, 4.0}) {
    const double nt = norms(char_eval(pair, t, eval)).h_sq;
    CHECK(std::abs(nt - n0) <= 100.0 * h * h * n0);
  }
}

TEST_CASE("char_eval: Neumann boundary condition holds after startup") {
  const double h = 1.0 / 256.0;
  const RadialGrid g = make_grid(1.0, 9.0, h);
  const CharPair pair = neumann_char_pair(inverse_r_state(g), 4.0);
  const RadialGrid eval = make_grid(1.0, 4.0, h);
  for (double t : {0.1, 0.5, 1.0, 2.0}) {
    const RadialState s = char_eval(pair, t, eval);
    CHECK(std::abs(boundary_derivative(s)) <= 10.0 * h);
  }
}

TEST_CASE("free and Neumann evolutions agree away from the obstacle") {
  const double h = 1.0 / 128.0;
  const double T = 3.0;
  const RadialGrid ext = make_grid(1.0, 25.0, h);
  const RadialGrid full = make_grid(0.0, 25.0, h);
  Rng rng(5);
  // data supported in r >= 1 + T
  RadialState data_ext = random_state(ext, rng, 1.0 + T + 0.5, 9.0, true);
  RadialState data_full = zero_state(full);
  for (int i = 0; i < ext.n_points; ++i) {
    data_full.u[128 + i] = data_ext.u[i];
    data_full.ut[128 + i] = data_ext.ut[i];
  }
  const CharPair pair = neumann_char_pair(data_ext, T);
  const RadialGrid eval = make_grid(1.0, 20.0, h);
  const double scale = std::sqrt(norms(data_ext).h_sq);
  for (double t : {1.0, 2.0, 3.0}) {
    const RadialState un = char_eval(pair, t, eval);
    const RadialState vf = restrict_to_exterior(free_linear_evolve(data_full, t));
    RadialState diff = zero_state(eval);
    for (int i = 0; i < eval.n_points; ++i) {
      diff.u[i] = un.u[i] - vf.u[i];
      diff.ut[i] = un.ut[i] - vf.ut[i];
    }
    CHECK(std::sqrt(norms(diff).h_sq) <= 1e-3 * scale);
  }
}

TEST_CASE("free_linear_evolve: strong Huygens support and zero data") {
  const double h = 1.0 / 128.0;
  const RadialGrid g = make_grid(0.0, 16.0, h);
  const RadialState zero = free_linear_evolve(zero_state(g), 3.0);
  for (double v : zero.u) CHECK(v == 0.0);

  const RadialState data = bump_state(g, 0.0, 1.0, 1.0);
  const RadialState at10 = free_linear_evolve(data, 10.0);
  for (int i = 0; i < g.n_points; ++i) {
    const double r = g.r(i);
    if (r < 9.0 - 2.0 * h || r > 11.0 + 2.0 * h) {
      CHECK(std::abs(at10.u[i]) <= 1e-12);
      CHECK(std::abs(at10.ut[i]) <= 1e-12);
    }
  }
}

TEST_CASE("free_linear_evolve: ground-state data conserves the char energy") {
  const double h = 1.0 / 64.0;
  const RadialGrid g = make_grid(0.0, 128.0, h);
  RadialState w = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) w.u[i] = w_exact(g.r(i));

  auto char_energy = [&](double t) {
    const FreeZetaDerivs d = free_zeta_derivatives(w, t);
    std::vector<double> f(g.n_points);
    for (int i = 0; i < g.n_points; ++i)
      f[i] = d.dr[i] * d.dr[i] + d.dt[i] * d.dt[i];
    return trapz(f, h);
  };
  const double e0 = char_energy(0.0);
  for (double t : {0.25, 0.5, 1.0}) {
    CHECK(std::abs(char_energy(t) - e0) <= 1e-10 * e0);
  }

  // symmetric decrease at the origin for small time
  const RadialState at = free_linear_evolve(w, 0.5);
  CHECK(at.u[0] < 1.0);
  CHECK(at.u[0] > 0.8);
}

TEST_CASE("radiation_extract: closed form and zero field") {
  const double h = 1.0 / 256.0;
  const RadialGrid g = make_grid(1.0, 9.0, h);
  const CharPair pair = neumann_char_pair(inverse_r_state(g), 4.0);
  const RadiationField field = radiation_extract(pair);
  for (int j = 0; j < pair.size(); j += 64) {
    const double s = field.s(j);
    if (std::abs(s - 1.0) < 2.0 * h) continue;  // derivative jump node
    const double expect = (s < 1.0) ? -std::exp(s - 1.0) : 0.0;
    CHECK(field.g[j] == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
  }
  const RadiationField zf = radiation_extract(neumann_char_pair(zero_state(g), 2.0));
  for (double v : zf.g) CHECK(v == 0.0);
}

TEST_CASE("free_data_from_radiation: bump field radiates back") {
  const double h = 1.0 / 256.0;
  // G: unit bump on [0, 1]
  RadiationField field;
  field.h = h;
  field.s0 = -4.0;
  const int ns = static_cast<int>(std::round(8.0 / h)) + 1;
  field.g.resize(ns);
  for (int j = 0; j < ns; ++j) field.g[j] = bump(field.s(j), 0.5, 0.5, 1.0);

  const RadialGrid g = make_grid(0.0, 32.0, h);
  const RadialState v = free_data_from_radiation(field, g);

  // late-time check: r dv/dt matches G(r - t) in L^2(dr)
  const double t = 20.0;
  const FreeZetaDerivs d = free_zeta_derivatives(v, t);
  std::vector<double> err(g.n_points);
  for (int i = 0; i < g.n_points; ++i) {
    const double gs = lerp_uniform(field.g, field.s0, field.h, g.r(i) - t);
    err[i] = (d.dt[i] - gs) * (d.dt[i] - gs);
  }
  CHECK(trapz(err, h) <= 1e-4);

  const RadialState z = free_data_from_radiation(
      RadiationField{-2.0, h, std::vector<double>(1024, 0.0)}, g);
  for (double x : z.u) CHECK(x == 0.0);

  RadiationField bad = field;
  bad.g[0] = 0.5;  // does not vanish on the left
  CHECK_THROWS_AS(free_data_from_radiation(bad, g), NonIntegrableField);
}

TEST_CASE("linear scattering: Neumann flow approaches a free flow") {
  const double h = 1.0 / 512.0;
  const RadialGrid g = make_grid(1.0, 24.0, h);
  Rng rng(3);
  const RadialState data = random_state(g, rng, 1.5, 3.0, true);
  const double data_norm = std::sqrt(norms(data).h_sq);

  const double t = 8.0;
  const CharPair pair = neumann_char_pair(data, t);
  const RadialState v0 = free_data_from_radiation(radiation_extract(pair),
                                                  make_grid(0.0, 24.0, h));
  const RadialGrid eval = make_grid(1.0, 14.0, h);
  const RadialState un = char_eval(pair, t, eval);
  const RadialState vf = restrict_to_exterior(free_linear_evolve(v0, t));
  RadialState diff = zero_state(eval);
  for (int i = 0; i < eval.n_points; ++i) {
    diff.u[i] = un.u[i] - vf.u[i];
    diff.ut[i] = un.ut[i] - vf.ut[i];
  }
  CHECK(std::sqrt(norms(diff).h_sq) <= 1e-2 * data_norm);
}

TEST_CASE("weighted norm decays along the linear flow") {
  const double h = 1.0 / 128.0;
  const RadialGrid g = make_grid(1.0, 33.0, h);
  const RadialState data = bump_state(g, 2.0, 0.5, 1.0, 0.4);
  const CharPair pair = neumann_char_pair(data, 24.0);
  const RadialGrid eval = make_grid(1.0, 9.0, h);

  const double w0 = std::sqrt(norms(char_eval(pair, 0.0, eval)).weighted_l2_sq);
  double prev = w0;
  for (double t : {4.0, 8.0, 12.0, 16.0, 20.0}) {
    const double wt = std::sqrt(norms(char_eval(pair, t, eval)).weighted_l2_sq);
    CHECK(wt < prev);
    prev = wt;
  }
  CHECK(prev <= 0.05 * w0);
}

TEST_CASE("duhamel_neumann: zero source, free region, constant forcing") {
  const double h = 1.0 / 128.0;
  const RadialGrid g = make_grid(1.0, 13.0, h);

  const RadialState zero = duhamel_neumann(
      [](double, double) { return 0.0; }, 1.0, g);
  for (double v : zero.u) CHECK(v == 0.0);

  // smooth space-time bump, checked against a direct double quadrature in
  // the pure d'Alembert region r - t >= 1
  auto f = [](double tau, double sigma) {
    return bump(sigma, 3.0, 0.8, 1.0) * bump(tau, 0.4, 0.4, 1.0);
  };
  const double t = 0.75;
  const RadialState s = duhamel_neumann(f, t, g);
  for (double r : {2.0, 3.0, 4.0, 5.5}) {
    const double direct = simpson(
        [&](double tau) {
          return simpson([&](double sig) { return sig * f(tau, sig); },
                         r - t + tau, r + t - tau, 400);
        },
        0.0, t, 400) / (2.0 * r);
    const int i = static_cast<int>(std::round((r - 1.0) / h));
    CHECK(s.u[i] == doctest::Approx(direct).epsilon(5e-4).scale(0.01));
  }

  // f = M inside a wide truncation: w = M t^2 / 2 exactly until the edge
  // effect arrives, and bounded by it everywhere
  const double M = 1.0;
  auto fM = [&](double, double sigma) { return sigma <= 9.0 ? M : 0.0; };
  for (double tc : {1.0, 2.0}) {
    const RadialState w = duhamel_neumann(fM, tc, g);
    double sup = 0.0;
    for (int i = 0; i < g.n_points; ++i) sup = std::max(sup, std::abs(w.u[i]));
    CHECK(sup <= 0.5 * M * tc * tc + 10.0 * h * h);
    // interior equality region, up to the trapezoid error of the kernel
    const int i2 = static_cast<int>(std::round(1.0 / h));
    CHECK(std::abs(w.u[i2] - 0.5 * M * tc * tc) <= 10.0 * h * h);
  }
}

TEST_CASE("duhamel_neumann: cross-oracle against the forced leapfrog") {
  const double h = 1.0 / 128.0;
  const RadialGrid g = make_grid(1.0, 9.0, h);
  auto f = [](double tau, double sigma) {
    return bump(sigma, 2.0, 0.7, 1.0) * std::cos(2.0 * tau);
  };
  const double t = 2.0;
  const RadialState a = duhamel_neumann(f, t, g);
  const RadialState b = forced_leapfrog(f, t, g);
  double sup = 0.0, supv = 0.0;
  for (int i = 0; i < g.n_points - 4; ++i) {
    sup = std::max(sup, std::abs(a.u[i] - b.u[i]));
    supv = std::max(supv, std::abs(a.ut[i] - b.ut[i]));
  }
  CHECK(sup <= 100.0 * h * h);
  CHECK(supv <= 300.0 * h * h);

  CHECK_THROWS_AS(duhamel_neumann(f, -1.0, g), NegativeTime);
}
