#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kessence/evolution.hpp"
#include "kessence/model_core.hpp"
#include "kessence/wall_profile.hpp"

namespace kessence {

// count evenly spaced values from min to max, both ends included.
// A single-point range evaluates at min.
struct ScanRange {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  std::vector<double> points() const;

  friend bool operator==(const ScanRange&, const ScanRange&) = default;
};

enum class EvolveMode { Full, KineticOnly };

// Initial data and step control for the homogeneous run. Exactly one of X
// and phidot is set; X gives phidot = +sqrt(2 X).
struct EvolveSettings {
  double t0 = 0.0;
  double t_end = 4.0;
  double phi = 0.0;
  std::optional<double> X;
  std::optional<double> phidot;
  double a = 1.0;
  StepControl control;
  double tail_fraction = 0.5;
  EvolveMode mode = EvolveMode::Full;

  friend bool operator==(const EvolveSettings&, const EvolveSettings&) = default;
};

struct OutputSpec {
  std::string dir = "kessence_out";
  std::string stem = "run";

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct RunConfig {
  KineticModel model;
  PotentialSpec potential = ConstantPotential{};
  BackgroundSpec background = DeSitter{};
  std::optional<WallProfile> wall;
  std::optional<GridSpec> grid;
  // Keyed by parameter: X, b, L, X0, eps0, F2.
  std::map<std::string, ScanRange> scans;
  std::optional<EvolveSettings> evolve;
  OutputSpec output;
  std::optional<std::string> preset;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline constexpr std::string_view kScanKeys[] = {"X", "b", "L", "X0", "eps0", "F2"};
inline constexpr std::string_view kPresetNames[] = {"figure1", "figure2", "paper-point"};

// Throws ConfigError on any invalid field.
void validate(const RunConfig& config);

// Strict JSON reader: unknown keys, wrong types and invalid values are
// ConfigError. The result is validated.
RunConfig parse_config(std::string_view text);

// Inverse of parse_config. Optional fields that are unset are omitted.
std::string serialize_config(const RunConfig& config);

// Reads and parses a file. IoError if it cannot be read.
RunConfig load_config(const std::filesystem::path& path);

// F0 = -1, F2 = X0 = 1e3, eps0 = 1e-2, V0 = 1, de Sitter H = 1, wall b = 10
// and L = 9, an X scan over [X0, 2 X0] and a run from X = 1.05 X0.
RunConfig paper_point_config();

// paper-point replaces model, potential, background, wall and evolve with the
// values above; figure1 and figure2 only select the wall outputs. Unknown
// names are ConfigError.
void apply_preset(RunConfig& config, std::string_view name);

}  // namespace kessence
