#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kessence/config.hpp"

namespace kessence {

struct OutputFile {
  std::string name;  // relative to the output directory
  std::string content;
};

struct CommandResult {
  std::vector<OutputFile> files;
  bool ok = true;  // false when a run-level check failed; files are still written
  std::string status;
};

inline constexpr const char* kEosHeader[] = {"X",        "F",      "F_X",  "w_exact",
                                             "cs2_exact", "w_perturbed_eq14", "cs2_perturbed_eq11",
                                             "regime",   "note"};
inline constexpr const char* kProfileHeader[] = {"x", "phi", "dphi_dx", "X_mag"};
inline constexpr const char* kSharpnessHeader[] = {"b", "L", "peak_value", "peak_position", "half_width", "integral"};
inline constexpr const char* kTrajectoryHeader[] = {"t", "a", "phi", "phidot", "X", "w", "cs2", "Q"};
inline constexpr const char* kRegimeHeader[] = {"b",       "L",      "X_estimate", "eps0",      "F2",
                                                "w_exact", "w_paper", "cs2_exact", "cs2_paper", "regime_label"};

// One regime-table entry. Exact columns come from eos_w and sound_speed at
// X = X_estimate + eps0; paper columns from the thin-wall forms. Values whose
// guard trips are NaN.
struct RegimeTableRow {
  double b = 0.0;
  double L = 0.0;
  double X_estimate = 0.0;
  double eps0 = 0.0;
  double F2 = 0.0;
  double w_exact = 0.0;
  double w_paper = 0.0;
  double cs2_exact = 0.0;
  double cs2_paper = 0.0;
  RegimeLabel regime_label = RegimeLabel::Unclassified;
};

// Rows in scan order: b, L, X0, eps0, F2 nested outermost to innermost.
// Unscanned parameters take the config value (b and L from the wall, NaN
// without one). When b is scanned, X_estimate is the kinetic magnitude at the
// wall, x = L/2, and stands in for X0; scanning both b and X0 is ConfigError.
std::vector<RegimeTableRow> regime_rows(const RunConfig& config);

// Output builders. Nothing touches the file system.
//   eos-scan: <stem>_eos.csv, <stem>_eos_summary.txt
//   wall:     <stem>_profile_b<b>_L<L>.csv per pair, <stem>_sharpness.csv, <stem>_wall_summary.txt
//   evolve:   <stem>_evolve.csv, <stem>_evolve_summary.txt
//   regimes:  <stem>_regimes.csv, <stem>_regimes_discrepancy.txt
CommandResult run_eos_scan(const RunConfig& config);
CommandResult run_wall(const RunConfig& config);
CommandResult run_evolve(const RunConfig& config);
CommandResult run_regimes(const RunConfig& config);

// Writes every file under dir, in order. Returns the paths written.
std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& dir, const CommandResult& result);

}  // namespace kessence
