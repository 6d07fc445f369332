#include "kessence/model_core.hpp"

#include <cmath>
#include <string>

#include "kessence/errors.hpp"

namespace kessence {

namespace {

// Throws unless |den| clears the pole tolerance relative to `scale`. NaN
// denominators are rejected as well.
void guard_denominator(double den, double scale, const char* what) {
  if (!(std::abs(den) > kDenominatorTolerance * scale)) {
    throw DegenerateDenominator(std::string(what) + ": denominator vanishes");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void validate(const KineticModel& model) {
  if (!std::isfinite(model.F0) || !std::isfinite(model.F2) || !std::isfinite(model.X0) ||
      !std::isfinite(model.eps0)) {
    throw DomainError("KineticModel: parameters must be finite");
  }
  if (model.F2 < 0.0) throw DomainError("KineticModel: F2 must be >= 0");
  if (model.X0 <= 0.0) throw DomainError("KineticModel: X0 must be > 0");
  if (model.F0 == 0.0) throw DomainError("KineticModel: F0 must be nonzero");
  if (model.eps0 < 0.0) throw DomainError("KineticModel: eps0 must be >= 0");
}

void validate(const PotentialSpec& potential) {
  std::visit(Overloaded{
                 [](const QuadraticPotential& p) {
                   if (!(p.m2 > 0.0) || !std::isfinite(p.m2)) {
                     throw DomainError("QuadraticPotential: m2 must be > 0");
                   }
                 },
                 [](const ConstantPotential& p) {
                   if (!(p.V0 > 0.0) || !std::isfinite(p.V0)) {
                     throw DomainError("ConstantPotential: V0 must be > 0");
                   }
                 },
             },
             potential);
}

double potential_value(const PotentialSpec& potential, double phi) {
  return std::visit(Overloaded{
                        [phi](const QuadraticPotential& p) { return p.m2 * phi * phi; },
                        [](const ConstantPotential& p) { return p.V0; },
                    },
                    potential);
}

double potential_slope(const PotentialSpec& potential, double phi) {
  return std::visit(Overloaded{
                        [phi](const QuadraticPotential& p) { return 2.0 * p.m2 * phi; },
                        [](const ConstantPotential&) { return 0.0; },
                    },
                    potential);
}

double potential_curvature(const PotentialSpec& potential, double /*phi*/) {
  return std::visit(Overloaded{
                        [](const QuadraticPotential& p) { return 2.0 * p.m2; },
                        [](const ConstantPotential&) { return 0.0; },
                    },
                    potential);
}

std::string_view to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::RadiationLike:
      return "RadiationLike";
    case RegimeLabel::DarkMatterLike:
      return "DarkMatterLike";
    case RegimeLabel::DarkEnergyMix:
      return "DarkEnergyMix";
    case RegimeLabel::CosmologicalConstant:
      return "CosmologicalConstant";
    case RegimeLabel::Unclassified:
      return "Unclassified";
  }
  return "Unclassified";
}

double eval_F(const KineticModel& model, double X) {
  const double d = X - model.X0;
  return model.F0 + model.F2 * d * d;
}

double eval_F_X(const KineticModel& model, double X) { return 2.0 * model.F2 * (X - model.X0); }

double eval_F_XX(const KineticModel& model, double /*X*/) { return 2.0 * model.F2; }

double pressure(const KineticModel& model, const PotentialSpec& potential, double phi, double X) {
  return potential_value(potential, phi) * eval_F(model, X);
}

double density(const KineticModel& model, const PotentialSpec& potential, double phi, double X) {
  return potential_value(potential, phi) * (2.0 * X * eval_F_X(model, X) - eval_F(model, X));
}

double eos_w(const KineticModel& model, double X) {
  const double F = eval_F(model, X);
  const double kinetic = 2.0 * X * eval_F_X(model, X);
  const double den = kinetic - F;
  guard_denominator(den, std::abs(kinetic) + std::abs(F), "eos_w");
  return F / den;
}

double sound_speed(const KineticModel& model, double X) {
  const double fx = eval_F_X(model, X);
  const double curvature = 2.0 * X * eval_F_XX(model, X);
  const double den = fx + curvature;
  guard_denominator(den, std::abs(fx) + std::abs(curvature), "sound_speed");
  return fx / den;
}

double sound_speed_perturbed(const KineticModel& model) {
  if (!(model.eps0 > 0.0)) throw DomainError("sound_speed_perturbed: eps0 must be > 0");
  return 1.0 / (1.0 + 2.0 * (1.0 + model.X0 / model.eps0));
}

double w_perturbed_exact(const KineticModel& model) {
  const double e = model.eps0;
  const double F = model.F0 + model.F2 * e * e;
  const double correction = 4.0 * (model.X0 + e) * (model.F2 / F * e);
  const double den = 1.0 - correction;
  // F = 0 sends the correction to infinity and w to zero; not a pole.
  if (std::isinf(correction)) return -1.0 / den;
  guard_denominator(den, 1.0 + std::abs(correction), "w_perturbed_exact");
  return -1.0 / den;
}

double w_paper_thinwall(double X0, double eps0, double F2) {
  if (!(F2 > 0.0)) throw DomainError("w_paper_thinwall: F2 must be > 0");
  const double ratio = 4.0 * X0 * eps0 / F2;
  const double den = 1.0 - ratio;
  guard_denominator(den, 1.0 + std::abs(ratio), "w_paper_thinwall");
  return -1.0 / den;
}

double cs2_paper_thinwall(double X0, double eps0) {
  if (X0 < 0.0 || eps0 < 0.0 || (X0 == 0.0 && eps0 == 0.0)) {
    throw DomainError("cs2_paper_thinwall: requires X0 >= 0, eps0 >= 0, not both zero");
  }
  return 1.0 / (1.0 + 4.0 * X0 * (1.0 + X0 / (2.0 * eps0)));
}

double scaling_X_of_a(const ScalingSolution& s, double a) {
  if (!(a > 0.0) || !(s.a1 > 0.0)) throw DomainError("scaling_X_of_a: a and a1 must be > 0");
  const double r = s.a1 / a;
  return s.X0 * (1.0 + s.eps1 * (r * r * r));
}

double scaling_cs2_of_a(const ScalingSolution& s, double a, ScalingMode mode) {
  if (!(a > 0.0) || !(s.a1 > 0.0)) throw DomainError("scaling_cs2_of_a: a and a1 must be > 0");
  if (mode == ScalingMode::FirstOrder) {
    const double r = s.a1 / a;
    return 0.5 * s.eps1 * (r * r * r);
  }
  const double X = scaling_X_of_a(s, a);
  const double den = 3.0 * X - s.X0;
  guard_denominator(den, 3.0 * std::abs(X) + std::abs(s.X0), "scaling_cs2_of_a");
  return (X - s.X0) / den;
}

Regime classify_regime(double w, double cs2) {
  using T = RegimeThresholds;
  Regime r{RegimeLabel::Unclassified, w, cs2};
  if (!std::isfinite(w) || !std::isfinite(cs2)) return r;
  if (std::abs(w + 1.0) <= T::w_band && cs2 <= T::cs2_max) {
    r.label = RegimeLabel::CosmologicalConstant;
  } else if (std::abs(w) <= T::w_band && cs2 <= T::cs2_max) {
    r.label = RegimeLabel::DarkMatterLike;
  } else if (std::abs(w - 1.0 / 3.0) <= T::w_band) {
    r.label = RegimeLabel::RadiationLike;
  } else if (w > -1.0 + T::w_band && w < -T::w_band) {
    r.label = RegimeLabel::DarkEnergyMix;
  }
  return r;
}

}  // namespace kessence
