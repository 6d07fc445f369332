#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace kessence {

// Soliton/antisoliton pair phi(x) = pi [tanh b(x + L/2) - tanh b(x - L/2)].
// b is the wall steepness on a normalized x axis, L the wall separation.
struct WallProfile {
  double b = 10.0;
  double L = 9.0;

  friend bool operator==(const WallProfile&, const WallProfile&) = default;
};

// Throws DomainError unless b > 0 and L > 0.
void validate(const WallProfile& profile);

// Uniform grid, endpoints included.
struct GridSpec {
  double x_min = -1.0;
  double x_max = 1.0;
  std::size_t n_points = 2;

  double spacing() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// x in [-2L, 2L] with spacing no wider than min(1/(10b), L/200). The point
// count is rounded up so that both walls at +-L/2 fall on grid nodes.
GridSpec default_grid(const WallProfile& profile);

struct ProfileSample {
  std::vector<double> x;
  std::vector<double> phi;
  std::vector<double> dphi_dx;
  std::vector<double> X_mag;  // 0.5 * dphi_dx^2
};

struct SharpnessReport {
  double peak_value = 0.0;
  std::array<double, 2> peak_positions{};  // left, right
  double half_width = 0.0;                 // FWHM of the right-hand peak
  double integral = 0.0;                   // trapezoidal integral of X_mag
};

struct DerivativeCheck {
  double analytic = 0.0;
  double numeric = 0.0;
  double abs_error = 0.0;
};

double phi(const WallProfile& profile, double x);

// Analytic gradient pi b [sech^2 b(x + L/2) - sech^2 b(x - L/2)].
double dphi_dx(const WallProfile& profile, double x);

// |X| = 0.5 (dphi/dx)^2. For a static profile the signed kinetic variable is
// -|X| under a (+,-,-,-) metric; converting is left to the caller.
double kinetic_magnitude(const WallProfile& profile, double x);

// Throws InvalidGrid if x_min >= x_max or n_points < 2.
ProfileSample sample(const WallProfile& profile, const GridSpec& grid);
ProfileSample sample(const WallProfile& profile, double x_min, double x_max, std::size_t n_points);

// Delta-sequence metrics of the kinetic density. Throws GridTooCoarse when the
// grid spacing exceeds 1/(10b).
SharpnessReport sharpness(const WallProfile& profile, const GridSpec& grid);
SharpnessReport sharpness(const WallProfile& profile);

// Centered difference of phi at step h against dphi_dx.
DerivativeCheck check_derivative(const WallProfile& profile, double x, double h);

}  // namespace kessence
