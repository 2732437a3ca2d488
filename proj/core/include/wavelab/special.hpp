#ifndef WAVELAB_SPECIAL_HPP
#define WAVELAB_SPECIAL_HPP

#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

// Stationary objects: the ground state W(r) = (1 + r^2/3)^{-1/2} of
// -Lap W = W^5 on R^3, its rescalings W_l = (sqrt3/l) W(3r/l^2), and the
// exterior singular solution Z of Lap Z = Z^5 with Z ~ 1/r at infinity and a
// finite blow-up radius.

/// Plain ground state W(r).
double ground_state_w(double r);

/// W_l(r); l = sqrt(3) gives plain W. l may be negative (sign change).
double ground_state(double r, double ell);

/// Analytic d/dr of W_l.
double ground_state_deriv(double r, double ell);

/// Closed-form 3-D integrals of W over a ball of radius R (R = +inf allowed):
/// int |grad W|^2 and int W^6, both with the 4 pi factor.
double w_gradient_integral(double R);
double w_sixth_integral(double R);

/// int_{R^3} |grad W|^2 = (3 sqrt3 / 4) pi^2 and the static energy
/// E(W,0) = (1/3) of it.
double w_gradient_l2_r3();
double w_energy_r3();

struct StationaryProfile {
  enum Kind { GroundStateW, ScaledW, SingularZ } kind = GroundStateW;
  double ell = 0.0;
  double r_first = 0.0;  // innermost sampled radius
  double h = 0.0;
  std::vector<double> z;         // profile samples, increasing radius
  double inner_limit_radius = 0.0;  // 0 for W; blow-up radius bracket top for Z

  double r(int i) const { return r_first + i * h; }
  int size() const { return static_cast<int>(z.size()); }
  double value_at(double r) const;  // linear interpolation
};

/// Sample W_l on [0, r_max].
StationaryProfile w_profile(double ell, double r_max, double h);

/// amplitude * W with the 1/r tail replaced by the harmonic (capacity)
/// bridge alpha (1/r - 1/support_radius) beyond core_radius, zero outside.
/// Keeps the W core, is compactly supported, and has the minimal gradient
/// surcharge for a tail truncation; velocities are zero.
RadialState truncated_ground_state(const RadialGrid& grid, double amplitude,
                                   double core_radius, double support_radius);

/// Integrate g'' = g^5 / r^4 (g = r Z) inward from g(r_start) = ell,
/// g'(r_start) = 0 by classic RK4, halving the step near the singularity.
/// inner_limit_radius brackets the blow-up radius from above.
StationaryProfile shoot_z(double ell, double r_start, double h);

/// max over interior nodes of |Lap f - sign f^5| relative to max |f^5|,
/// over radii [r_lo, r_hi]. sign=+1 checks Z, sign=-1 checks W.
double elliptic_residual(const StationaryProfile& profile, int sign,
                         double r_lo, double r_hi);

}  // namespace wavelab

#endif
