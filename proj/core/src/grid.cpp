#include "wavelab/grid.hpp"

#include <cmath>

#include "wavelab/errors.hpp"

namespace wavelab {

RadialGrid make_grid(double r_min, double r_max, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw NonPositiveSpacing();
  if (r_min != 0.0 && r_min != 1.0) throw WrongDomain("r_min must be 0 or 1");
  if (r_max - r_min < 2.0 * h * (1.0 - 1e-12)) throw DomainTooSmall();
  const double span = (r_max - r_min) / h;
  const double cells = std::round(span);
  if (std::abs(span - cells) > 1e-9 * std::max(1.0, span)) throw NonIntegralSpan();
  RadialGrid g;
  g.r_min = r_min;
  g.h = h;
  g.n_points = static_cast<int>(cells) + 1;
  return g;
}

RadialState zero_state(const RadialGrid& grid) {
  RadialState s;
  s.grid = grid;
  s.u.assign(grid.n_points, 0.0);
  s.ut.assign(grid.n_points, 0.0);
  return s;
}

bool state_is_finite(const RadialState& s) {
  const size_t n = static_cast<size_t>(s.grid.n_points);
  if (s.u.size() != n || s.ut.size() != n) return false;
  for (double v : s.u)
    if (!std::isfinite(v)) return false;
  for (double v : s.ut)
    if (!std::isfinite(v)) return false;
  return true;
}

double boundary_derivative(const RadialState& s) {
  const double h = s.grid.h;
  return (-3.0 * s.u[0] + 4.0 * s.u[1] - s.u[2]) / (2.0 * h);
}

}  // namespace wavelab
