#include "kessence/evolution.hpp"

#include <cmath>
#include <limits>

#include "kessence/errors.hpp"

namespace kessence {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double scale_factor(const BackgroundSpec& background, const FieldState& init, double t) {
  if (const auto* ds = std::get_if<DeSitter>(&background)) {
    return init.a * std::exp(ds->H * (t - init.t));
  }
  const auto& pl = std::get<PowerLaw>(background);
  return std::pow(t / pl.t0, pl.p);
}

std::vector<double> output_times(double t0, double t_end, double dt) {
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    if (t_end - t <= 1e-9 * dt) break;
    out.push_back(t);
  }
  out.push_back(t_end);
  return out;
}

// The velocity is integrated as a deviation z = phidot - v_ref from the
// extremal velocity v_ref = sign(phidot0) sqrt(2 X0), so the relative
// tolerance acts on the small deviation rather than on phidot, and
// X - X0 = z (v_ref + z/2) + (v_ref^2/2 - X0) is formed without cancellation.
// A nonzero v_ref stands for sqrt(2 X0) exactly: z = 0 is the extremum itself.
//
// The state carries zeta = z (a / a_init)^3. Without a potential the
// deviation decays like a^-3 (the first integral is X F_X^2 a^6), so zeta
// stays of order one and the absolute tolerance never dominates late rows.
struct DeviationCoordinates {
  double v_ref = 0.0;
  double offset = 0.0;  // v_ref^2 / 2 - X0

  DeviationCoordinates(const KineticModel& model, double phidot0) {
    if (phidot0 != 0.0) {
      v_ref = std::copysign(std::sqrt(2.0 * model.X0), phidot0);
    } else {
      offset = -model.X0;
    }
  }

  double phidot(double z) const { return v_ref + z; }
  double deviation(double z) const { return z * (v_ref + 0.5 * z) + offset; }
};

Trajectory evolve_impl(const KineticModel& model, const PotentialSpec* potential,
                       const BackgroundSpec& background, const FieldState& init, double t_end,
                       const StepControl& control) {
  validate(model);
  validate(background);
  if (potential != nullptr) validate(*potential);
  if (!(init.a > 0.0) && std::holds_alternative<DeSitter>(background)) {
    throw DomainError("evolve: initial scale factor must be > 0");
  }
  if (std::holds_alternative<PowerLaw>(background) && !(init.t > 0.0)) {
    throw DomainError("evolve: power-law background needs t_init > 0");
  }
  if (!(t_end > init.t)) throw DomainError("evolve: t_end must exceed the initial time");
  if (!(control.output_dt > 0.0)) throw DomainError("evolve: output_dt must be > 0");
  if (!(control.rel_tol > 0.0) || !(control.abs_tol > 0.0)) {
    throw DomainError("evolve: tolerances must be > 0");
  }

  const DeviationCoordinates coords(model, init.phidot);
  const double a_init = scale_factor(background, init, init.t);
  auto growth = [&](double t) {
    const double r = scale_factor(background, init, t) / a_init;
    return r * r * r;
  };

  auto rhs = [&](double t, const std::array<double, 2>& y) -> std::array<double, 2> {
    const double g = growth(t);
    const double H = hubble_rate(background, t);
    const double z = y[1] / g;
    const double phidot = coords.phidot(z);
    const double X = model.X0 + coords.deviation(z);
    const double fx = eval_F_X(model, X);
    const double curvature = 2.0 * X * eval_F_XX(model, X);
    const double mass = fx + curvature;
    if (!(std::abs(mass) > kDenominatorTolerance * (std::abs(fx) + std::abs(curvature)))) {
      throw SingularMassMatrix("evolve: F_X + 2 X F_XX vanishes at t = " + std::to_string(t));
    }
    double force = 3.0 * H * fx * phidot;
    if (potential != nullptr) {
      const double V = potential_value(*potential, y[0]);
      if (V == 0.0) throw DegenerateDenominator("evolve: V(phi) = 0, V_phi / V undefined");
      const double rho_factor = 2.0 * X * fx - eval_F(model, X);
      force += rho_factor * potential_slope(*potential, y[0]) / V;
    }
    const double phiddot = -force / mass;
    return {phidot, g * (phiddot + 3.0 * H * z)};
  };

  Trajectory traj;
  const auto times = output_times(init.t, t_end, control.output_dt);
  traj.rows.reserve(times.size());

  auto observe = [&](double t, const std::array<double, 2>& y) {
    TrajectoryRow row;
    row.t = t;
    row.a = scale_factor(background, init, t);
    row.phi = y[0];
    const double z = y[1] / growth(t);
    row.phidot = coords.phidot(z);
    row.X = model.X0 + coords.deviation(z);
    try {
      row.w = eos_w(model, row.X);
    } catch (const DegenerateDenominator&) {
      row.w = kNaN;
    }
    try {
      row.cs2 = sound_speed(model, row.X);
    } catch (const DegenerateDenominator&) {
      row.cs2 = kNaN;
    }
    row.Q = invariant_Q(model, row.X, row.a);
    traj.rows.push_back(row);
  };

  IntegratorOptions options;
  options.rel_tol = control.rel_tol;
  options.abs_tol = control.abs_tol;
  options.max_steps = control.max_steps;
  DormandPrince45<2> integrator(options);
  const std::array<double, 2> y0{init.phi, init.phidot - coords.v_ref};
  integrator.integrate(rhs, init.t, y0, t_end, times, observe);
  traj.stats = integrator.stats();
  return traj;
}

}  // namespace

void validate(const BackgroundSpec& background) {
  if (const auto* ds = std::get_if<DeSitter>(&background)) {
    if (!(ds->H > 0.0) || !std::isfinite(ds->H)) throw DomainError("DeSitter: H must be > 0");
    return;
  }
  const auto& pl = std::get<PowerLaw>(background);
  if (!(pl.p > 0.0) || !std::isfinite(pl.p)) throw DomainError("PowerLaw: p must be > 0");
  if (!(pl.t0 > 0.0) || !std::isfinite(pl.t0)) throw DomainError("PowerLaw: t0 must be > 0");
}

double hubble_rate(const BackgroundSpec& background, double t) {
  if (const auto* ds = std::get_if<DeSitter>(&background)) return ds->H;
  return std::get<PowerLaw>(background).p / t;
}

FieldState state_from_X(double t, double a, double phi, double X) {
  if (X < 0.0) throw DomainError("state_from_X: homogeneous X must be >= 0");
  return FieldState{t, a, phi, std::sqrt(2.0 * X)};
}

Trajectory evolve_full(const KineticModel& model, const PotentialSpec& potential,
                       const BackgroundSpec& background, const FieldState& init, double t_end,
                       const StepControl& control) {
  return evolve_impl(model, &potential, background, init, t_end, control);
}

Trajectory evolve_kinetic_only(const KineticModel& model, const BackgroundSpec& background,
                               const FieldState& init, double t_end, const StepControl& control) {
  return evolve_impl(model, nullptr, background, init, t_end, control);
}

double invariant_Q(const KineticModel& model, double X, double a) {
  const double fx = eval_F_X(model, X);
  const double a3 = a * a * a;
  return X * fx * fx * a3 * a3;
}

double invariant_Q(const KineticModel& model, const FieldState& state) {
  return invariant_Q(model, 0.5 * state.phidot * state.phidot, state.a);
}

ScalingFit fit_scaling(const Trajectory& trajectory, double X0, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw DomainError("fit_scaling: tail fraction must lie in (0, 1]");
  }
  const auto& rows = trajectory.rows;
  const auto n_tail = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(rows.size())));
  if (n_tail < 10) throw FitDomain("fit_scaling: fewer than 10 rows in the tail");
  const std::size_t first = rows.size() - n_tail;

  double sum = 0.0;
  for (std::size_t i = first; i < rows.size(); ++i) {
    const double d = rows[i].X - X0;
    if (!(d > 0.0)) throw FitDomain("fit_scaling: tail contains X <= X0");
    sum += std::log(d) + 3.0 * std::log(rows[i].a);
  }
  const double intercept = sum / static_cast<double>(n_tail);

  ScalingFit fit;
  fit.a1 = rows.front().a;
  fit.eps1 = std::exp(intercept - std::log(X0) - 3.0 * std::log(fit.a1));
  fit.rows_used = n_tail;
  for (std::size_t i = first; i < rows.size(); ++i) {
    const double d = rows[i].X - X0;
    const double r = fit.a1 / rows[i].a;
    const double d_fit = X0 * fit.eps1 * r * r * r;
    fit.max_residual = std::max(fit.max_residual, std::abs(d_fit - d) / d);
  }
  return fit;
}

std::optional<double> loglog_slope(const Trajectory& trajectory, double X0, double min_ratio) {
  const auto& rows = trajectory.rows;
  if (rows.empty()) return std::nullopt;
  const double a_min = min_ratio * rows.front().a;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    const double d = r.X - X0;
    if (r.a < a_min || !(d > 0.0)) continue;
    const double lx = std::log(r.a);
    const double ly = std::log(d);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double m = static_cast<double>(n);
  const double var = sxx - sx * sx / m;
  if (!(var > 0.0)) return std::nullopt;
  return (sxy - sx * sy / m) / var;
}

double slow_roll_metric(const PotentialSpec& potential, double H, double phi) {
  if (!(H > 0.0)) throw DomainError("slow_roll_metric: H must be > 0");
  return std::abs(potential_curvature(potential, phi)) / (H * H);
}

}  // namespace kessence
