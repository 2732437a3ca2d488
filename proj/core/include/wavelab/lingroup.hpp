#ifndef WAVELAB_LINGROUP_HPP
#define WAVELAB_LINGROUP_HPP

#include <functional>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

// Exact linear flows in the characteristic variable s. A Neumann solution on
// {r>=1} is u(t,r) = (phi_plus(r-t) + phi_minus(r+t))/r; for s>=1 the pair
// comes directly from (zeta0, zeta1) = (r u0, r u1), for s<=1 from the
// exponential boundary-memory integrals. Both functions and their
// derivatives are sampled on a uniform s-axis aligned with the radial grid.

struct CharPair {
  double h = 0.0;
  int idx_one = 0;  // index of the node s = 1
  std::vector<double> phi_plus, phi_minus;
  std::vector<double> dphi_plus, dphi_minus;

  int size() const { return static_cast<int>(phi_plus.size()); }
  double s(int j) const { return 1.0 + (j - idx_one) * h; }
  double s_min() const { return s(0); }
  double s_max() const { return s(size() - 1); }
};

/// Build the characteristic pair of an exterior state for horizon t_max
/// (rounded up to a whole number of grid steps). Needs data out to radius
/// 1 + t_max.
CharPair neumann_char_pair(const RadialState& data, double t_max);

/// Evaluate the linear Neumann solution at time t on the given exterior
/// grid. Valid for any t (either sign) with r-t and r+t inside the s-axis.
RadialState char_eval(const CharPair& pair, double t, const RadialGrid& grid);

/// Inhomogeneous solution int_0^t S_N(t-tau)(0, f(tau)) dtau by nested
/// trapezoid over the characteristic regions (exponential kernel where the
/// backward cone meets the boundary, d'Alembert average elsewhere).
RadialState duhamel_neumann(const std::function<double(double, double)>& f,
                            double t, const RadialGrid& grid);

/// Free radial evolution on r>=0 via the odd extension of zeta = r u.
/// Samples beyond the grid are continued by their end values, which is exact
/// for compactly supported data and for 1/r tails.
RadialState free_linear_evolve(const RadialState& data, double t);

/// d(r u)/dr and d(r u)/dt of the free evolution, from the characteristic
/// representation itself (raw zeta1 samples, no re-differencing). These make
/// the discrete exterior-energy identities telescope exactly.
struct FreeZetaDerivs {
  std::vector<double> dr;
  std::vector<double> dt;
};
FreeZetaDerivs free_zeta_derivatives(const RadialState& data, double t);

struct RadiationField {
  double s0 = 0.0;
  double h = 0.0;
  std::vector<double> g;

  double s(int j) const { return s0 + j * h; }
};

/// Outgoing radiation profile G = -phi_plus' of a linear Neumann solution:
/// r du/dt -> G(r-t) in L^2 as t -> +infinity.
RadiationField radiation_extract(const CharPair& pair);

/// Free data whose evolution radiates G: r dv/dt -> G(r-t). Requires an
/// integrable (in practice compactly supported) field.
RadialState free_data_from_radiation(const RadiationField& field,
                                     const RadialGrid& grid);

/// Restriction of a whole-space state to the exterior grid (1/h integral).
RadialState restrict_to_exterior(const RadialState& state);

}  // namespace wavelab

#endif
