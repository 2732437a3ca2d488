#ifndef WAVELAB_GRID_HPP
#define WAVELAB_GRID_HPP

#include <vector>

namespace wavelab {

/// Uniform 1-D radial mesh. r_min = 1 is the exterior domain {r >= 1},
/// r_min = 0 is the whole-space radial domain.
struct RadialGrid {
  double r_min = 1.0;
  double h = 0.0;
  int n_points = 0;

  double r(int i) const { return r_min + i * h; }
  double r_max() const { return r_min + (n_points - 1) * h; }
  bool exterior() const { return r_min == 1.0; }
  bool operator==(const RadialGrid& o) const {
    return r_min == o.r_min && h == o.h && n_points == o.n_points;
  }
};

/// r_min must be 0 or 1; the span (r_max-r_min) must be an integral
/// multiple of h and at least 2h wide.
RadialGrid make_grid(double r_min, double r_max, double h);

/// Sampled pair (u, du/dt) on a radial grid.
struct RadialState {
  RadialGrid grid;
  std::vector<double> u;
  std::vector<double> ut;
};

RadialState zero_state(const RadialGrid& grid);

/// True iff every sample is finite and array sizes match the grid.
bool state_is_finite(const RadialState& s);

/// Discrete one-sided second-order estimate of du/dr at the inner node.
double boundary_derivative(const RadialState& s);

}  // namespace wavelab

#endif
