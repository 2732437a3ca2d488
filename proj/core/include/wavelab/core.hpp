#ifndef WAVELAB_CORE_HPP
#define WAVELAB_CORE_HPP

#include "wavelab/grid.hpp"

namespace wavelab {

// All 3-D integrals carry the explicit 4*pi solid-angle factor so printed
// numbers match integrals over R^3 or {r>=1}. Quadrature is composite
// trapezoid; radial derivatives are centered, one-sided second order at the
// ends.

struct NormReport {
  double h_sq = 0.0;          // 4pi ( int (du/dr)^2 r^2 dr + int ut^2 r^2 dr )
  double l6_pow6 = 0.0;       // 4pi int u^6 r^2 dr
  double weighted_l2_sq = 0.0;  // 4pi int u^2 dr  ( = || u/r ||_{L^2}^2 )
};

NormReport norms(const RadialState& state);

struct HardyReport {
  double lhs = 0.0;          // int_1^inf u^2 dr
  double rhs = 0.0;          // 4 int_1^inf (du/dr)^2 r^2 dr
  double boundary_sq = 0.0;  // u(1)^2
};

/// Exterior-domain states only. Callers assert lhs <= rhs and
/// boundary_sq <= rhs.
HardyReport hardy_check(const RadialState& state);

struct EnergyRecord {
  double kinetic = 0.0;    // (1/2) 4pi int ut^2 r^2 dr
  double gradient = 0.0;   // (1/2) 4pi int (du/dr)^2 r^2 dr
  double potential = 0.0;  // (iota/6) 4pi int u^6 r^2 dr, sign folded in
  double total = 0.0;
  double time = 0.0;
};

/// iota = +1 defocusing, -1 focusing, 0 linear.
EnergyRecord energy(const RadialState& state, int iota, double time = 0.0);

/// Extend an exterior state across the unit ball: u by the constant u(1),
/// ut by zero; the grid is re-based at r_min = 0 with the same spacing
/// (1/h must be integral).
RadialState extend_to_origin(const RadialState& state);

/// Energy-critical rescaling (f,g) -> (f(./l)/sqrt(l), g(./l)/l^{3/2}) on a
/// whole-space state, resampled on the same grid by linear interpolation.
/// Samples needed beyond the grid are taken as zero.
RadialState scale_critical(const RadialState& state, double lambda);

struct IbpReport {
  double lhs = 0.0;  // int_R^rmax (d(ru)/dr)^2 dr + R u(R)^2
  double rhs = 0.0;  // int_R^rmax (du/dr)^2 r^2 dr
};

/// Integration-by-parts identity for decaying u; R snaps to the nearest
/// grid node.
IbpReport ibp_identity(const RadialState& state, double R);

}  // namespace wavelab

#endif
