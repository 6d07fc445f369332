#pragma once

#include <string_view>
#include <variant>

namespace kessence {

// Relative size below which a denominator is treated as an exact pole.
// The comparison is against the magnitude of the terms that form it.
inline constexpr double kDenominatorTolerance = 1e-12;

// Quadratic kinetic function F(X) = F0 + F2 (X - X0)^2 with a perturbation
// eps0 about the extremum. Quantities are dimensionless.
struct KineticModel {
  double F0 = -1.0;
  double F2 = 1.0e3;
  double X0 = 1.0e3;
  double eps0 = 1.0e-2;

  friend bool operator==(const KineticModel&, const KineticModel&) = default;
};

// Throws DomainError unless F2 >= 0, X0 > 0, F0 != 0 and eps0 >= 0.
void validate(const KineticModel& model);

// V(phi) = m2 * phi^2.
struct QuadraticPotential {
  double m2 = 1.0;
  friend bool operator==(const QuadraticPotential&, const QuadraticPotential&) = default;
};

struct ConstantPotential {
  double V0 = 1.0;
  friend bool operator==(const ConstantPotential&, const ConstantPotential&) = default;
};

using PotentialSpec = std::variant<QuadraticPotential, ConstantPotential>;

void validate(const PotentialSpec& potential);

double potential_value(const PotentialSpec& potential, double phi);
double potential_slope(const PotentialSpec& potential, double phi);
double potential_curvature(const PotentialSpec& potential, double phi);

// Late-time attractor X(a) = X0 (1 + eps1 (a/a1)^-3).
struct ScalingSolution {
  double X0 = 1.0e3;
  double eps1 = 0.02;
  double a1 = 1.0;

  friend bool operator==(const ScalingSolution&, const ScalingSolution&) = default;
};

enum class RegimeLabel {
  RadiationLike,
  DarkMatterLike,
  DarkEnergyMix,
  CosmologicalConstant,
  Unclassified,
};

std::string_view to_string(RegimeLabel label);

struct Regime {
  RegimeLabel label = RegimeLabel::Unclassified;
  double w = 0.0;
  double cs2 = 0.0;
};

// Classification thresholds.
struct RegimeThresholds {
  static constexpr double w_band = 0.05;
  static constexpr double cs2_max = 0.01;
};

enum class ScalingMode { Exact, FirstOrder };

// --- kinetic function and its analytic derivatives ---

double eval_F(const KineticModel& model, double X);
double eval_F_X(const KineticModel& model, double X);
double eval_F_XX(const KineticModel& model, double X);

// --- thermodynamics ---

// p = V(phi) F(X)
double pressure(const KineticModel& model, const PotentialSpec& potential, double phi, double X);

// rho = V(phi) (2 X F_X - F)
double density(const KineticModel& model, const PotentialSpec& potential, double phi, double X);

// w = F / (2 X F_X - F). Independent of the potential. Exactly -1 at X0.
double eos_w(const KineticModel& model, double X);

// C_s^2 = F_X / (F_X + 2 X F_XX). Throws DegenerateDenominator near
// X = X0/3 and when F2 = 0 (numerator and denominator both vanish).
double sound_speed(const KineticModel& model, double X);

// Closed form 1 / (1 + 2 (1 + X0/eps0)) for X = X0 + eps0. Requires eps0 > 0.
double sound_speed_perturbed(const KineticModel& model);

// Closed form -1 / (1 - 4 (X0 + eps0) F2 eps0 / (F0 + F2 eps0^2)).
double w_perturbed_exact(const KineticModel& model);

// --- thin-wall approximations, evaluated as printed ---
//
// These do not follow from the exact forms above; they are kept separate so
// that scans can report how far apart the two are.

// -1 / (1 - 4 X0 eps0 / F2)
double w_paper_thinwall(double X0, double eps0, double F2);

// 1 / (1 + 4 X0 (1 + X0 / (2 eps0)))
double cs2_paper_thinwall(double X0, double eps0);

// --- scaling solution ---

double scaling_X_of_a(const ScalingSolution& s, double a);
double scaling_cs2_of_a(const ScalingSolution& s, double a, ScalingMode mode);

Regime classify_regime(double w, double cs2);

}  // namespace kessence
