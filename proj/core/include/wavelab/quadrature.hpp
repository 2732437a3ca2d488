#ifndef WAVELAB_QUADRATURE_HPP
#define WAVELAB_QUADRATURE_HPP

#include <cstddef>
#include <vector>

namespace wavelab {

/// Composite trapezoid of uniformly sampled values.
double trapz(const std::vector<double>& f, double h);

/// Running trapezoid: out[i] = integral from x0 to x_i.
std::vector<double> cumtrapz(const std::vector<double>& f, double h);

/// Centered differences in the interior, one-sided second order at the ends.
std::vector<double> deriv_centered(const std::vector<double>& f, double h);

/// Linear interpolation on a uniform axis starting at x0; samples outside
/// the axis are continued by the end values.
double lerp_uniform(const std::vector<double>& f, double x0, double h, double x);

}  // namespace wavelab

#endif
