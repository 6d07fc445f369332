#include "kessence/wall_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kessence/errors.hpp"

namespace kessence {

namespace {

// log cosh y without overflow.
double log_cosh(double y) {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// log sinh s for s > 0.
double log_sinh(double s) {
  if (s < 20.0) return std::log(std::sinh(s));
  return s + std::log1p(-std::exp(-2.0 * s)) - std::numbers::ln2;
}

// sech^2 y = 4 e^{-2|y|} / (1 + e^{-2|y|})^2
double sech2(double y) {
  const double e = std::exp(-2.0 * std::abs(y));
  const double d = 1.0 + e;
  return 4.0 * e / (d * d);
}

}  // namespace

void validate(const WallProfile& profile) {
  if (!(profile.b > 0.0) || !std::isfinite(profile.b)) throw DomainError("WallProfile: b must be > 0");
  if (!(profile.L > 0.0) || !std::isfinite(profile.L)) throw DomainError("WallProfile: L must be > 0");
}

GridSpec default_grid(const WallProfile& profile) {
  const double h = std::min(1.0 / (10.0 * profile.b), profile.L / 200.0);
  const double span = 4.0 * profile.L;
  auto intervals = static_cast<std::size_t>(std::ceil(span / h));
  intervals = (intervals + 7) / 8 * 8;
  return GridSpec{-2.0 * profile.L, 2.0 * profile.L, intervals + 1};
}

double phi(const WallProfile& profile, double x) {
  const double u = profile.b * (x + 0.5 * profile.L);
  const double v = profile.b * (x - 0.5 * profile.L);
  // Between the walls the two tanh terms have opposite signs and add.
  if (u >= 0.0 && v <= 0.0) return std::numbers::pi * (std::tanh(u) - std::tanh(v));
  // Outside, tanh u - tanh v = sinh(u - v) / (cosh u cosh v) with u - v = bL,
  // evaluated in log space: no cancellation in the tails, no overflow.
  const double log_ratio = log_sinh(profile.b * profile.L) - (log_cosh(u) + log_cosh(v));
  return std::numbers::pi * std::exp(log_ratio);
}

double dphi_dx(const WallProfile& profile, double x) {
  const double u = profile.b * (x + 0.5 * profile.L);
  const double v = profile.b * (x - 0.5 * profile.L);
  return std::numbers::pi * profile.b * (sech2(u) - sech2(v));
}

double kinetic_magnitude(const WallProfile& profile, double x) {
  const double g = dphi_dx(profile, x);
  return 0.5 * g * g;
}

ProfileSample sample(const WallProfile& profile, const GridSpec& grid) {
  if (!(grid.x_min < grid.x_max) || grid.n_points < 2) {
    throw InvalidGrid("sample: need x_min < x_max and n_points >= 2");
  }
  ProfileSample out;
  const std::size_t n = grid.n_points;
  out.x.resize(n);
  out.phi.resize(n);
  out.dphi_dx.resize(n);
  out.X_mag.resize(n);
  const double h = grid.spacing();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (i + 1 == n) ? grid.x_max : grid.x_min + static_cast<double>(i) * h;
    const double g = dphi_dx(profile, x);
    out.x[i] = x;
    out.phi[i] = phi(profile, x);
    out.dphi_dx[i] = g;
    out.X_mag[i] = 0.5 * g * g;
  }
  return out;
}

ProfileSample sample(const WallProfile& profile, double x_min, double x_max, std::size_t n_points) {
  return sample(profile, GridSpec{x_min, x_max, n_points});
}

SharpnessReport sharpness(const WallProfile& profile, const GridSpec& grid) {
  if (!(grid.x_min < grid.x_max) || grid.n_points < 2) {
    throw InvalidGrid("sharpness: need x_min < x_max and n_points >= 2");
  }
  if (!(grid.x_min < 0.0 && grid.x_max > 0.0)) {
    throw InvalidGrid("sharpness: grid must straddle the pair center x = 0");
  }
  const double max_spacing = 1.0 / (10.0 * profile.b);
  if (grid.spacing() > max_spacing * (1.0 + 1e-9)) {
    throw GridTooCoarse("sharpness: grid spacing exceeds 1/(10 b)");
  }

  const ProfileSample s = sample(profile, grid);
  const auto& X = s.X_mag;
  const std::size_t n = X.size();

  std::size_t left = 0;
  std::size_t right = n - 1;
  bool have_left = false;
  bool have_right = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (s.x[i] <= 0.0 && (!have_left || X[i] > X[left])) {
      left = i;
      have_left = true;
    }
    if (s.x[i] >= 0.0 && (!have_right || X[i] > X[right])) {
      right = i;
      have_right = true;
    }
  }

  SharpnessReport report;
  report.peak_value = std::max(X[left], X[right]);
  report.peak_positions = {s.x[left], s.x[right]};

  // Half-maximum crossings around the right peak, linearly interpolated.
  const double half = 0.5 * X[right];
  std::size_t lo = right;
  while (lo > 0 && X[lo - 1] > half) --lo;
  double x_lo = s.x[lo];
  if (lo > 0) {
    const double t = (half - X[lo - 1]) / (X[lo] - X[lo - 1]);
    x_lo = s.x[lo - 1] + t * (s.x[lo] - s.x[lo - 1]);
  }
  std::size_t hi = right;
  while (hi + 1 < n && X[hi + 1] > half) ++hi;
  double x_hi = s.x[hi];
  if (hi + 1 < n) {
    const double t = (X[hi] - half) / (X[hi] - X[hi + 1]);
    x_hi = s.x[hi] + t * (s.x[hi + 1] - s.x[hi]);
  }
  report.half_width = x_hi - x_lo;

  double integral = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    integral += 0.5 * (X[i] + X[i - 1]) * (s.x[i] - s.x[i - 1]);
  }
  report.integral = integral;
  return report;
}

SharpnessReport sharpness(const WallProfile& profile) { return sharpness(profile, default_grid(profile)); }

DerivativeCheck check_derivative(const WallProfile& profile, double x, double h) {
  if (!(h > 0.0)) throw DomainError("check_derivative: h must be > 0");
  DerivativeCheck c;
  c.analytic = dphi_dx(profile, x);
  c.numeric = (phi(profile, x + h) - phi(profile, x - h)) / (2.0 * h);
  c.abs_error = std::abs(c.analytic - c.numeric);
  return c;
}

}  // namespace kessence
