#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wavelab/core.hpp"
#include "wavelab/errors.hpp"
#include "wavelab/special.hpp"

using namespace wavelab;
using namespace wavelab_test;

TEST_CASE("make_grid basic construction") {
  const RadialGrid g = make_grid(1.0, 2.0, 0.5);
  CHECK(g.n_points == 3);
  CHECK(g.r(0) == doctest::Approx(1.0));
  CHECK(g.r(1) == doctest::Approx(1.5));
  CHECK(g.r(2) == doctest::Approx(2.0));

  CHECK(make_grid(0.0, 1.0, 0.25).n_points == 5);

  CHECK_THROWS_AS(make_grid(1.0, 1.1, 0.5), DomainTooSmall);
  CHECK_THROWS_AS(make_grid(1.0, 2.0, -0.1), NonPositiveSpacing);
  CHECK_THROWS_AS(make_grid(1.0, 2.0, 0.0), NonPositiveSpacing);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.2999), NonIntegralSpan);
  CHECK_THROWS_AS(make_grid(0.5, 2.0, 0.25), WrongDomain);
}

TEST_CASE("norms: zero state and 1/r tail") {
  const RadialGrid g = make_grid(1.0, 101.0, 1.0 / 256.0);
  const NormReport zero = norms(zero_state(g));
  CHECK(zero.h_sq == 0.0);
  CHECK(zero.l6_pow6 == 0.0);
  CHECK(zero.weighted_l2_sq == 0.0);

  RadialState s = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) s.u[i] = 1.0 / g.r(i);
  const double R = g.r_max();
  const NormReport rep = norms(s);
  // int_1^R r^-2 dr = 1 - 1/R for both the gradient and the weighted term
  CHECK(rep.h_sq == doctest::Approx(kFourPi * (1.0 - 1.0 / R)).epsilon(1e-4));
  CHECK(rep.weighted_l2_sq == doctest::Approx(kFourPi * (1.0 - 1.0 / R)).epsilon(1e-5));
  CHECK(rep.l6_pow6 == doctest::Approx(kFourPi * (1.0 - std::pow(R, -3.0)) / 3.0).epsilon(1e-4));
}

TEST_CASE("norms: ground state gradient against the quadrature oracle") {
  const double h = 1e-3;
  const RadialGrid g = make_grid(0.0, 50.0, h);
  RadialState s = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) s.u[i] = w_exact(g.r(i));
  const NormReport rep = norms(s);

  // oracle: Simpson on the closed-form derivative over the same window
  const double grad50 = kFourPi * simpson(
      [](double r) { return w_deriv_exact(r) * w_deriv_exact(r) * r * r; },
      0.0, 50.0, 200000);
  CHECK(rep.h_sq == doctest::Approx(grad50).epsilon(1e-6));
  // same value from the closed-form antiderivative
  CHECK(w_gradient_integral(50.0) == doctest::Approx(grad50).epsilon(1e-10));

  // full-space value (3 sqrt3/4) pi^2: add the substituted tail integral
  const double tail = kFourPi * simpson(
      [](double x) {
        const double r = 1.0 / x;
        const double d = w_deriv_exact(r);
        return d * d * r * r / (x * x);
      },
      1e-9, 1.0 / 50.0, 200000);
  CHECK(grad50 + tail == doctest::Approx(0.75 * std::sqrt(3.0) * kPi * kPi).epsilon(1e-6));
}

TEST_CASE("hardy_check: 1/r and zero") {
  const double h = 1.0 / 256.0;
  const RadialGrid g = make_grid(1.0, 201.0, h);
  RadialState s = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) s.u[i] = 1.0 / g.r(i);
  const double R = g.r_max();
  const HardyReport rep = hardy_check(s);
  CHECK(rep.lhs == doctest::Approx(1.0 - 1.0 / R).epsilon(1e-5));
  CHECK(rep.rhs == doctest::Approx(4.0 * (1.0 - 1.0 / R)).epsilon(1e-4));
  CHECK(rep.boundary_sq == doctest::Approx(1.0));

  const HardyReport zero = hardy_check(zero_state(g));
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.boundary_sq == 0.0);

  const RadialGrid full = make_grid(0.0, 2.0, 0.25);
  CHECK_THROWS_AS(hardy_check(zero_state(full)), WrongDomain);
}

TEST_CASE("hardy_check: property over seeded random states") {
  const double h = 1.0 / 128.0;
  const RadialGrid g = make_grid(1.0, 17.0, h);
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const RadialState s = random_state(g, rng, 1.0 + 4.0 * h, 15.0, false);
    const HardyReport rep = hardy_check(s);
    const double tol = 1e-4 * std::max(rep.rhs, 1e-12);
    CHECK(rep.lhs <= rep.rhs + tol);
    CHECK(rep.boundary_sq <= rep.rhs + tol);
  }
}

TEST_CASE("energy: ground state values") {
  const double h = 1e-3;
  const RadialGrid g = make_grid(0.0, 50.0, h);
  RadialState s = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) s.u[i] = w_exact(g.r(i));

  CHECK(energy(zero_state(g), -1).total == 0.0);

  // truncated closed form on [0, 50]
  const double expect50 =
      0.5 * w_gradient_integral(50.0) - w_sixth_integral(50.0) / 6.0;
  const EnergyRecord rec = energy(s, -1);
  CHECK(rec.total == doctest::Approx(expect50).epsilon(1e-6));
  CHECK(rec.total == rec.kinetic + rec.gradient + rec.potential);

  // full-space identity E(W,0) = (1/3) int |grad W|^2, via the closed forms
  const double e_full = 0.5 * w_gradient_integral(INFINITY) -
                        w_sixth_integral(INFINITY) / 6.0;
  CHECK(e_full == doctest::Approx(w_gradient_l2_r3() / 3.0).epsilon(1e-12));
  CHECK(w_energy_r3() == doctest::Approx((std::sqrt(3.0) / 4.0) * kPi * kPi).epsilon(1e-12));

  // exterior restriction: E(W|_{r>=1}, 0) = sqrt3 pi^2/6 + 9 pi/16 > E(W,0)
  const RadialGrid ge = make_grid(1.0, 50.0, h);
  RadialState se = zero_state(ge);
  for (int i = 0; i < ge.n_points; ++i) se.u[i] = w_exact(ge.r(i));
  const double expect_ext_50 =
      0.5 * (w_gradient_integral(50.0) - w_gradient_integral(1.0)) -
      (w_sixth_integral(50.0) - w_sixth_integral(1.0)) / 6.0;
  CHECK(energy(se, -1).total == doctest::Approx(expect_ext_50).epsilon(1e-6));
  const double e_ext_full =
      0.5 * (w_gradient_l2_r3() - w_gradient_integral(1.0)) -
      (w_sixth_integral(INFINITY) - w_sixth_integral(1.0)) / 6.0;
  const double closed = std::sqrt(3.0) * kPi * kPi / 6.0 + 9.0 * kPi / 16.0;
  CHECK(e_ext_full == doctest::Approx(closed).epsilon(1e-12));
  CHECK(e_ext_full > w_energy_r3());
}

TEST_CASE("extend_to_origin: formula, norms, energy comparison") {
  const double h = 1.0 / 128.0;
  const RadialGrid g = make_grid(1.0, 9.0, h);

  RadialState inv = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) inv.u[i] = 1.0 / g.r(i);
  const RadialState ext = extend_to_origin(inv);
  CHECK(ext.grid.r_min == 0.0);
  CHECK(ext.grid.n_points == g.n_points + 128);
  CHECK(ext.u[0] == doctest::Approx(1.0));
  CHECK(ext.u[64] == doctest::Approx(1.0));  // constant inside the ball
  CHECK(ext.u[128] == doctest::Approx(1.0));
  CHECK(ext.u[128 + 128] == doctest::Approx(0.5));
  CHECK(ext.ut[5] == 0.0);

  // gradient preserved exactly for states vanishing near the boundary
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const RadialState s = random_state(g, rng, 1.5, 8.0, true);
    const NormReport a = norms(s);
    const RadialState es = extend_to_origin(s);
    const NormReport b = norms(es);
    CHECK(b.h_sq == doctest::Approx(a.h_sq).epsilon(1e-13));
    CHECK(b.l6_pow6 >= a.l6_pow6 - 1e-13);
    // focusing energy can only drop under the extension
    CHECK(energy(es, -1).total <= energy(s, -1).total + 1e-12);
  }

  // boundary-touching states: the L^6 mass grows, energy still drops
  RadialState w = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) w.u[i] = w_exact(g.r(i));
  const RadialState we = extend_to_origin(w);
  CHECK(norms(we).l6_pow6 > norms(w).l6_pow6);
  CHECK(norms(we).h_sq == doctest::Approx(norms(w).h_sq).epsilon(1e-3));
  CHECK(energy(we, -1).total < energy(w, -1).total);

  CHECK_THROWS_AS(extend_to_origin(zero_state(make_grid(0.0, 2.0, 0.25))), WrongDomain);
}

TEST_CASE("scale_critical: identity, norm preservation, pointwise value") {
  const double h = 1.0 / 128.0;
  const RadialGrid g = make_grid(0.0, 160.0, h);
  RadialState s = bump_state(g, 1.2, 0.8, 1.0, 0.5);

  const RadialState same = scale_critical(s, 1.0);
  for (int i = 0; i < g.n_points; i += 1000) {
    CHECK(same.u[i] == doctest::Approx(s.u[i]).epsilon(1e-14));
    CHECK(same.ut[i] == doctest::Approx(s.ut[i]).epsilon(1e-14));
  }

  const double base = norms(s).h_sq;
  for (double lambda : {2.0, 4.0, 16.0, 64.0}) {
    const double scaled = norms(scale_critical(s, lambda)).h_sq;
    CHECK(std::abs(scaled - base) <= 10.0 * h * h * base);
  }

  // sigma_4 (W, 0) at r = 4 equals W(1)/2
  RadialState w = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) w.u[i] = w_exact(g.r(i));
  const RadialState w4 = scale_critical(w, 4.0);
  const int i4 = static_cast<int>(std::round(4.0 / h));
  CHECK(w4.u[i4] == doctest::Approx(0.5 * w_exact(1.0)).epsilon(1e-10));

  CHECK_THROWS_AS(scale_critical(s, 0.0), NonPositiveLambda);
  CHECK_THROWS_AS(scale_critical(s, -2.0), NonPositiveLambda);
  CHECK_THROWS_AS(scale_critical(zero_state(make_grid(1.0, 3.0, 0.25)), 2.0), WrongDomain);
}

TEST_CASE("ibp_identity: 1/r, zero, random property") {
  const double h = 1.0 / 128.0;
  const RadialGrid g = make_grid(1.0, 201.0, 1.0 / 16.0);
  RadialState inv = zero_state(g);
  for (int i = 0; i < g.n_points; ++i) inv.u[i] = 1.0 / g.r(i);
  const IbpReport rep = ibp_identity(inv, 1.0);
  // d(r 1/r)/dr vanishes exactly on the sampled zeta
  CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.rhs == doctest::Approx(1.0 - 1.0 / 201.0).epsilon(2e-3));

  const RadialGrid gf = make_grid(1.0, 17.0, h);
  const IbpReport zero = ibp_identity(zero_state(gf), 2.0);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);

  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const RadialState s = random_state(gf, rng, 1.5, 15.0, false);
    const double R = rng.uniform(1.0, 6.0);
    const IbpReport r2 = ibp_identity(s, R);
    const double scale = 1.0 + norms(s).h_sq;
    CHECK(std::abs(r2.lhs - r2.rhs) <= 10.0 * h * h * scale);
  }

  CHECK_THROWS_AS(ibp_identity(inv, 5000.0), ROutOfRange);
}
