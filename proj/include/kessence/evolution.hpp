#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "kessence/dopri5.hpp"
#include "kessence/model_core.hpp"

namespace kessence {

// Constant expansion rate: a(t) = a_init exp(H (t - t_init)).
struct DeSitter {
  double H = 1.0;
  friend bool operator==(const DeSitter&, const DeSitter&) = default;
};

// a(t) = (t / t0)^p, H = p / t. Requires t > 0 on the integration window.
struct PowerLaw {
  double p = 0.5;
  double t0 = 1.0;
  friend bool operator==(const PowerLaw&, const PowerLaw&) = default;
};

// The expansion history is prescribed; it is not fed back through a
// Friedmann equation.
using BackgroundSpec = std::variant<DeSitter, PowerLaw>;

void validate(const BackgroundSpec& background);
double hubble_rate(const BackgroundSpec& background, double t);

struct FieldState {
  double t = 0.0;
  double a = 1.0;  // ignored for PowerLaw, where a(t) is fixed by (p, t0)
  double phi = 0.0;
  double phidot = 0.0;

  friend bool operator==(const FieldState&, const FieldState&) = default;
};

// Homogeneous state with phidot = +sqrt(2 X).
FieldState state_from_X(double t, double a, double phi, double X);

struct StepControl {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double output_dt = 0.01;
  std::size_t max_steps = 10'000'000;

  friend bool operator==(const StepControl&, const StepControl&) = default;
};

struct TrajectoryRow {
  double t = 0.0;
  double a = 1.0;
  double phi = 0.0;
  double phidot = 0.0;
  double X = 0.0;
  double w = 0.0;    // NaN where the eos_w guard trips
  double cs2 = 0.0;  // NaN where the sound_speed guard trips
  double Q = 0.0;    // X F_X^2 a^6
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  IntegratorStats stats;
};

// Full field equation
//   (F_X + 2 X F_XX) phi'' + 3 H F_X phi' + (2 X F_X - F) V_phi / V = 0
// with X = phi'^2 / 2. Throws SingularMassMatrix where the phi'' coefficient
// vanishes, DegenerateDenominator where V(phi) = 0, StepFailure when the step
// controller gives up.
Trajectory evolve_full(const KineticModel& model, const PotentialSpec& potential,
                       const BackgroundSpec& background, const FieldState& init, double t_end,
                       const StepControl& control = {});

// Same equation with the potential-gradient term dropped.
Trajectory evolve_kinetic_only(const KineticModel& model, const BackgroundSpec& background,
                               const FieldState& init, double t_end, const StepControl& control = {});

// X F_X^2 a^6. Conserved by the kinetic-only equation, because multiplying it
// by phi' gives d/dt (X F_X^2) = -6 H X F_X^2.
double invariant_Q(const KineticModel& model, double X, double a);
double invariant_Q(const KineticModel& model, const FieldState& state);

struct ScalingFit {
  double eps1 = 0.0;
  double a1 = 1.0;  // pinned to the scale factor of the first trajectory row
  double max_residual = 0.0;
  std::size_t rows_used = 0;
};

// Least-squares fit of log(X - X0) = c - 3 log a over the last tail_fraction
// of the rows. Throws FitDomain if the tail holds fewer than 10 rows or any
// row with X <= X0.
ScalingFit fit_scaling(const Trajectory& trajectory, double X0, double tail_fraction);

// Regression slope of log(X - X0) against log a over rows with
// a >= min_ratio * a(first row). Empty if fewer than two usable rows.
std::optional<double> loglog_slope(const Trajectory& trajectory, double X0, double min_ratio = 2.0);

// |V''(phi)| / H^2; slow roll wants this much less than one.
double slow_roll_metric(const PotentialSpec& potential, double H, double phi);

}  // namespace kessence
