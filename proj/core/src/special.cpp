#include "wavelab/special.hpp"

#include <cmath>

#include "wavelab/errors.hpp"
#include "wavelab/quadrature.hpp"

namespace wavelab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;
constexpr double kSqrt3 = 1.7320508075688772935;
}  // namespace

double ground_state_w(double r) { return 1.0 / std::sqrt(1.0 + r * r / 3.0); }

double ground_state(double r, double ell) {
  if (ell == 0.0) throw ZeroEll();
  const double l2 = ell * ell;
  return kSqrt3 / (ell * std::sqrt(1.0 + 3.0 * r * r / (l2 * l2)));
}

double ground_state_deriv(double r, double ell) {
  if (ell == 0.0) throw ZeroEll();
  const double l4 = ell * ell * ell * ell;
  const double base = 1.0 + 3.0 * r * r / l4;
  return -3.0 * kSqrt3 * r / (ell * l4 * std::pow(base, 1.5));
}

// With r = sqrt(3) tan(theta):
//   int_0^R W'^2 r^2 dr   = sqrt(3)   [3 th/8 - sin(2 th)/4 + sin(4 th)/32]
//   int_0^R W^6  r^2 dr   = 3 sqrt(3) [th/8 - sin(4 th)/32]
double w_gradient_integral(double R) {
  const double th = std::isinf(R) ? 0.5 * kPi : std::atan(R / kSqrt3);
  return kFourPi * kSqrt3 *
         (3.0 * th / 8.0 - std::sin(2.0 * th) / 4.0 + std::sin(4.0 * th) / 32.0);
}

double w_sixth_integral(double R) {
  const double th = std::isinf(R) ? 0.5 * kPi : std::atan(R / kSqrt3);
  return kFourPi * 3.0 * kSqrt3 * (th / 8.0 - std::sin(4.0 * th) / 32.0);
}

double w_gradient_l2_r3() { return 0.75 * kSqrt3 * kPi * kPi; }
double w_energy_r3() { return w_gradient_l2_r3() / 3.0; }

double StationaryProfile::value_at(double rr) const {
  return lerp_uniform(z, r_first, h, rr);
}

StationaryProfile w_profile(double ell, double r_max, double h) {
  if (ell == 0.0) throw ZeroEll();
  StationaryProfile p;
  p.kind = (ell == kSqrt3) ? StationaryProfile::GroundStateW : StationaryProfile::ScaledW;
  p.ell = ell;
  p.r_first = 0.0;
  p.h = h;
  p.inner_limit_radius = 0.0;
  const int n = static_cast<int>(std::round(r_max / h)) + 1;
  p.z.resize(n);
  for (int i = 0; i < n; ++i) p.z[i] = ground_state(i * h, ell);
  return p;
}

RadialState truncated_ground_state(const RadialGrid& grid, double amplitude,
                                   double core_radius, double support_radius) {
  if (!(0.0 < core_radius && core_radius < support_radius))
    throw ROutOfRange("need 0 < core_radius < support_radius");
  const double alpha =
      ground_state_w(core_radius) / (1.0 / core_radius - 1.0 / support_radius);
  RadialState s = zero_state(grid);
  for (int i = 0; i < grid.n_points; ++i) {
    const double r = grid.r(i);
    double u = 0.0;
    if (r <= core_radius) u = ground_state_w(r);
    else if (r < support_radius) u = alpha * (1.0 / r - 1.0 / support_radius);
    s.u[i] = amplitude * u;
  }
  return s;
}

namespace {

struct OdeState {
  double g, dg;
};

// g'' = g^5 / r^4
inline double rhs(double r, double g) {
  const double g2 = g * g;
  return g2 * g2 * g / (r * r * r * r);
}

// one RK4 step of size -dr (inward)
OdeState rk4_inward(double r, OdeState s, double dr) {
  const double k1g = s.dg, k1d = rhs(r, s.g);
  const double k2g = s.dg - 0.5 * dr * k1d, k2d = rhs(r - 0.5 * dr, s.g - 0.5 * dr * k1g);
  const double k3g = s.dg - 0.5 * dr * k2d, k3d = rhs(r - 0.5 * dr, s.g - 0.5 * dr * k2g);
  const double k4g = s.dg - dr * k3d, k4d = rhs(r - dr, s.g - dr * k3g);
  OdeState out;
  out.g = s.g - dr / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
  out.dg = s.dg - dr / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
  return out;
}

}  // namespace

StationaryProfile shoot_z(double ell, double r_start, double h) {
  if (ell == 0.0) throw ZeroEll();
  if (!(h > 0.0)) throw NonPositiveSpacing();
  const double sign = (ell > 0.0) ? 1.0 : -1.0;
  const double cap = 1e6;

  // shoot the positive branch, flip at the end (Z -> -Z is a symmetry)
  std::vector<double> samples;  // Z at r_start - k h, collected inward
  OdeState s{std::abs(ell), 0.0};
  double r = r_start;
  samples.push_back(s.g / r);

  bool exploded = false;
  int whole_steps = 0;
  while (r - h > h) {
    // a grid step is attempted whole, then with halved substeps; when even
    // tiny substeps blow past the cap the singularity bracket is found
    OdeState trial = rk4_inward(r, s, h);
    bool good = std::isfinite(trial.g) && std::isfinite(trial.dg) &&
                trial.g < cap * (r - h);
    if (!good) {
      double sub = 0.5 * h;
      while (sub > 1e-12 * h) {
        OdeState fine = s;
        double rr = r;
        bool ok = true;
        for (int k = 0; k < static_cast<int>(std::round(h / sub)); ++k) {
          fine = rk4_inward(rr, fine, sub);
          rr -= sub;
          if (!std::isfinite(fine.g) || !std::isfinite(fine.dg) || fine.g >= cap * rr) {
            ok = false;
            break;
          }
        }
        if (ok) {
          trial = fine;
          good = true;
          break;
        }
        sub *= 0.5;
      }
    }
    if (!good) {
      exploded = true;
      break;
    }
    s = trial;
    r -= h;
    ++whole_steps;
    samples.push_back(s.g / r);
  }
  if (!exploded) throw NoBlowUpFound("integration reached the origin bounded");

  StationaryProfile p;
  p.kind = StationaryProfile::SingularZ;
  p.ell = ell;
  p.h = h;
  p.r_first = r_start - whole_steps * h;
  p.inner_limit_radius = p.r_first;
  p.z.resize(samples.size());
  // reverse into increasing-radius order
  for (size_t i = 0; i < samples.size(); ++i)
    p.z[i] = sign * samples[samples.size() - 1 - i];
  return p;
}

double elliptic_residual(const StationaryProfile& profile, int sign,
                         double r_lo, double r_hi) {
  const double h = profile.h;
  if (r_lo < profile.inner_limit_radius + 2.0 * h)
    throw TooCloseToSingularity();
  int i_lo = static_cast<int>(std::ceil((r_lo - profile.r_first) / h - 1e-9));
  int i_hi = static_cast<int>(std::floor((r_hi - profile.r_first) / h + 1e-9));
  i_lo = std::max(i_lo, 1);
  i_hi = std::min(i_hi, profile.size() - 2);
  if (i_hi <= i_lo) throw ROutOfRange("empty residual window");

  double worst = 0.0, scale = 0.0;
  for (int i = i_lo; i <= i_hi; ++i) {
    const double r = profile.r(i);
    if (r <= 0.0) continue;
    const double f = profile.z[i];
    const double d2 = (profile.z[i + 1] - 2.0 * f + profile.z[i - 1]) / (h * h);
    const double d1 = (profile.z[i + 1] - profile.z[i - 1]) / (2.0 * h);
    const double lap = d2 + 2.0 * d1 / r;
    const double f2 = f * f;
    const double f5 = f2 * f2 * f;
    worst = std::max(worst, std::abs(lap - sign * f5));
    scale = std::max(scale, std::abs(f5));
  }
  return (scale > 0.0) ? worst / scale : worst;
}

}  // namespace wavelab
