#include "kessence/scenario.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "kessence/csv.hpp"
#include "kessence/errors.hpp"

namespace kessence {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <std::size_t N>
std::vector<std::string> columns(const char* const (&names)[N]) {
  return std::vector<std::string>(std::begin(names), std::end(names));
}

std::string fmt(double v) { return format_double(v); }

// Runs f; a numeric guard turns into NaN and a note naming the column.
template <class Fn>
double guarded(Fn&& f, const char* column, std::vector<std::string>& notes) {
  try {
    return f();
  } catch (const NumericError&) {
    notes.push_back(std::string(column) + " guarded");
    return kNaN;
  }
}

template <class Fn>
double or_nan(Fn&& f) {
  try {
    return f();
  } catch (const NumericError&) {
    return kNaN;
  }
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<double> scan_or(const RunConfig& config, const std::string& key, double fallback) {
  const auto it = config.scans.find(key);
  if (it == config.scans.end()) return {fallback};
  return it->second.points();
}

constexpr RegimeLabel kAllLabels[] = {RegimeLabel::RadiationLike, RegimeLabel::DarkMatterLike,
                                      RegimeLabel::DarkEnergyMix, RegimeLabel::CosmologicalConstant,
                                      RegimeLabel::Unclassified};

void write_label_counts(std::ostringstream& out, const std::map<RegimeLabel, std::size_t>& counts) {
  out << "regime counts:\n";
  for (RegimeLabel label : kAllLabels) {
    const auto it = counts.find(label);
    out << "  " << to_string(label) << ": " << (it == counts.end() ? 0 : it->second) << "\n";
  }
}

std::string profile_name(const RunConfig& config, const WallProfile& w) {
  return config.output.stem + "_profile_b" + fmt(w.b) + "_L" + fmt(w.L) + ".csv";
}

std::vector<WallProfile> wall_set(const RunConfig& config) {
  std::vector<WallProfile> out;
  if (config.preset == "figure1") {
    const double L = config.wall ? config.wall->L : WallProfile{}.L;
    for (double b : {3.0, 10.0}) out.push_back(WallProfile{b, L});
    return out;
  }
  if (config.preset == "figure2") {
    for (double L : {3.0, 6.0, 9.0}) out.push_back(WallProfile{10.0, L});
    return out;
  }
  const bool scanned = config.scans.contains("b") || config.scans.contains("L");
  if (!config.wall && !scanned) throw ConfigError("wall: the config has no wall section");
  const WallProfile base = config.wall.value_or(WallProfile{});
  if (!config.wall && !(config.scans.contains("b") && config.scans.contains("L"))) {
    throw ConfigError("wall: scanning only one of b and L needs a wall section for the other");
  }
  for (double b : scan_or(config, "b", base.b)) {
    for (double L : scan_or(config, "L", base.L)) out.push_back(WallProfile{b, L});
  }
  return out;
}

}  // namespace

CommandResult run_eos_scan(const RunConfig& config) {
  const auto it = config.scans.find("X");
  if (it == config.scans.end()) throw ConfigError("eos-scan: the config has no scans.X range");
  const KineticModel& model = config.model;

  CsvTable table(columns(kEosHeader));
  std::map<RegimeLabel, std::size_t> counts;
  std::size_t noted = 0;
  for (double X : it->second.points()) {
    std::vector<std::string> notes;
    const double w = guarded([&] { return eos_w(model, X); }, "w_exact", notes);
    const double cs2 = guarded([&] { return sound_speed(model, X); }, "cs2_exact", notes);
    double w_pert = kNaN;
    double cs2_pert = kNaN;
    if (X >= model.X0) {
      KineticModel perturbed = model;
      perturbed.eps0 = X - model.X0;
      w_pert = guarded([&] { return w_perturbed_exact(perturbed); }, "w_perturbed_eq14", notes);
      cs2_pert = guarded([&] { return sound_speed_perturbed(perturbed); }, "cs2_perturbed_eq11", notes);
    } else {
      notes.push_back("perturbed forms need X >= X0");
    }
    const RegimeLabel label = classify_regime(w, cs2).label;
    ++counts[label];
    if (!notes.empty()) ++noted;
    table.add_row({fmt(X), fmt(eval_F(model, X)), fmt(eval_F_X(model, X)), fmt(w), fmt(cs2), fmt(w_pert),
                   fmt(cs2_pert), std::string(to_string(label)), join(notes, "; ")});
  }

  std::ostringstream summary;
  summary << "command: eos-scan\n"
          << "rows: " << table.rows() << "\n"
          << "rows with a note: " << noted << "\n";
  write_label_counts(summary, counts);

  CommandResult result;
  result.files.push_back({config.output.stem + "_eos.csv", table.text()});
  result.files.push_back({config.output.stem + "_eos_summary.txt", summary.str()});
  result.status = "eos-scan: " + std::to_string(table.rows()) + " rows";
  return result;
}

CommandResult run_wall(const RunConfig& config) {
  const std::vector<WallProfile> walls = wall_set(config);

  CommandResult result;
  CsvTable sharp(columns(kSharpnessHeader));
  for (const WallProfile& w : walls) {
    try {
      validate(w);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("wall: ") + e.what());
    }
    const GridSpec grid = config.grid.value_or(default_grid(w));
    const ProfileSample s = sample(w, grid);
    CsvTable profile(columns(kProfileHeader));
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      profile.add_row({fmt(s.x[i]), fmt(s.phi[i]), fmt(s.dphi_dx[i]), fmt(s.X_mag[i])});
    }
    result.files.push_back({profile_name(config, w), profile.text()});

    const SharpnessReport r = sharpness(w, grid);
    sharp.add_row({fmt(w.b), fmt(w.L), fmt(r.peak_value), fmt(r.peak_positions[1]), fmt(r.half_width), fmt(r.integral)});
  }
  result.files.push_back({config.output.stem + "_sharpness.csv", sharp.text()});

  std::ostringstream summary;
  summary << "command: wall\n";
  if (config.preset == "figure1" || config.preset == "figure2") summary << "preset: " << *config.preset << "\n";
  summary << "profiles: " << walls.size() << "\n"
          << "peak_position is the right-hand peak; the profile is even in x\n";
  result.files.push_back({config.output.stem + "_wall_summary.txt", summary.str()});
  result.status = "wall: " + std::to_string(walls.size()) + " profiles";
  return result;
}

CommandResult run_evolve(const RunConfig& config) {
  if (!config.evolve) throw ConfigError("evolve: the config has no evolve section");
  const EvolveSettings& e = *config.evolve;
  const KineticModel& model = config.model;

  FieldState init;
  if (e.X) {
    init = state_from_X(e.t0, e.a, e.phi, *e.X);
  } else {
    init = FieldState{e.t0, e.a, e.phi, *e.phidot};
  }
  const bool kinetic_only = e.mode == EvolveMode::KineticOnly;
  const Trajectory traj = kinetic_only
                              ? evolve_kinetic_only(model, config.background, init, e.t_end, e.control)
                              : evolve_full(model, config.potential, config.background, init, e.t_end, e.control);

  CsvTable table(columns(kTrajectoryHeader));
  for (const auto& r : traj.rows) {
    table.add_row({fmt(r.t), fmt(r.a), fmt(r.phi), fmt(r.phidot), fmt(r.X), fmt(r.w), fmt(r.cs2), fmt(r.Q)});
  }

  // Q is a first integral whenever the potential gradient drops out.
  const bool conserved = kinetic_only || std::holds_alternative<ConstantPotential>(config.potential);
  const double Q0 = traj.rows.front().Q;
  double drift = 0.0;
  for (const auto& r : traj.rows) {
    const double d = Q0 != 0.0 ? std::abs(r.Q - Q0) / std::abs(Q0) : std::abs(r.Q);
    drift = std::max(drift, d);
  }
  const double drift_limit = 100.0 * e.control.rel_tol;
  const bool ok = !conserved || drift <= drift_limit;

  std::ostringstream summary;
  summary << "command: evolve\n"
          << "mode: " << (kinetic_only ? "kinetic_only" : "full") << "\n"
          << "rows: " << traj.rows.size() << "\n"
          << "steps: accepted " << traj.stats.accepted << ", rejected " << traj.stats.rejected << ", rhs evaluations "
          << traj.stats.rhs_evals << "\n"
          << "Q_initial: " << fmt(Q0) << "\n";
  if (conserved) {
    summary << "Q_drift: " << fmt(drift) << (Q0 != 0.0 ? " (relative)" : " (absolute, Q_initial = 0)") << "\n"
            << "Q_drift_limit: " << fmt(drift_limit) << "\n";
  } else {
    summary << "Q_drift: " << fmt(drift) << " (not conserved with a sloped potential, not checked)\n";
  }

  try {
    const ScalingFit fit = fit_scaling(traj, model.X0, e.tail_fraction);
    summary << "fit_eps1: " << fmt(fit.eps1) << "\n"
            << "fit_a1: " << fmt(fit.a1) << "\n"
            << "fit_rows: " << fit.rows_used << "\n"
            << "fit_max_residual: " << fmt(fit.max_residual) << "\n";
    const ScalingSolution s{model.X0, fit.eps1, fit.a1};
    double cs2_gap = 0.0;
    for (std::size_t i = traj.rows.size() - fit.rows_used; i < traj.rows.size(); ++i) {
      const auto& r = traj.rows[i];
      cs2_gap = std::max(cs2_gap, std::abs(r.cs2 - scaling_cs2_of_a(s, r.a, ScalingMode::Exact)));
    }
    summary << "cs2_vs_scaling_max_abs_diff: " << fmt(cs2_gap) << "\n";
  } catch (const FitDomain& err) {
    summary << "fit: unavailable (" << err.what() << ")\n";
  }

  if (const auto slope = loglog_slope(traj, model.X0)) {
    summary << "loglog_slope: " << fmt(*slope) << "\n";
    // The a^-3 tail is a property of the potential-free equation.
    if (conserved) {
      summary << "slope_check: " << (std::abs(*slope + 3.0) <= 0.01 ? "PASS" : "FAIL") << " (target -3 +- 0.01)\n";
    }
  } else {
    summary << "loglog_slope: unavailable\n";
  }
  summary << "status: " << (ok ? "OK" : "FAILED") << "\n";

  CommandResult result;
  result.ok = ok;
  result.files.push_back({config.output.stem + "_evolve.csv", table.text()});
  result.files.push_back({config.output.stem + "_evolve_summary.txt", summary.str()});
  result.status = std::string("evolve: ") + (ok ? "OK" : "FAILED, Q drift " + fmt(drift) + " > " + fmt(drift_limit));
  return result;
}

std::vector<RegimeTableRow> regime_rows(const RunConfig& config) {
  const bool scan_b = config.scans.contains("b");
  if (scan_b && config.scans.contains("X0")) throw ConfigError("regimes: scan b or X0, not both");
  const double wall_b = config.wall ? config.wall->b : kNaN;
  const double wall_L = config.wall ? config.wall->L : kNaN;
  const std::vector<double> Ls = scan_or(config, "L", wall_L);
  if (scan_b && std::isnan(Ls.front())) throw ConfigError("regimes: scanning b needs wall.L or scans.L");

  std::vector<RegimeTableRow> rows;
  for (double b : scan_or(config, "b", wall_b)) {
    for (double L : Ls) {
      for (double X0 : scan_or(config, "X0", config.model.X0)) {
        for (double eps0 : scan_or(config, "eps0", config.model.eps0)) {
          for (double F2 : scan_or(config, "F2", config.model.F2)) {
            RegimeTableRow row;
            row.b = b;
            row.L = L;
            row.X_estimate = scan_b ? kinetic_magnitude(WallProfile{b, L}, 0.5 * L) : X0;
            row.eps0 = eps0;
            row.F2 = F2;
            const KineticModel m{config.model.F0, F2, row.X_estimate, eps0};
            const double X = row.X_estimate + eps0;
            row.w_exact = or_nan([&] { return eos_w(m, X); });
            row.cs2_exact = or_nan([&] { return sound_speed(m, X); });
            row.w_paper = or_nan([&] { return w_paper_thinwall(row.X_estimate, eps0, F2); });
            row.cs2_paper = or_nan([&] { return cs2_paper_thinwall(row.X_estimate, eps0); });
            row.regime_label = classify_regime(row.w_exact, row.cs2_exact).label;
            rows.push_back(row);
          }
        }
      }
    }
  }
  return rows;
}

CommandResult run_regimes(const RunConfig& config) {
  const std::vector<RegimeTableRow> rows = regime_rows(config);

  CsvTable table(columns(kRegimeHeader));
  for (const auto& r : rows) {
    table.add_row({fmt(r.b), fmt(r.L), fmt(r.X_estimate), fmt(r.eps0), fmt(r.F2), fmt(r.w_exact), fmt(r.w_paper),
                   fmt(r.cs2_exact), fmt(r.cs2_paper), std::string(to_string(r.regime_label))});
  }

  auto point = [](const RegimeTableRow& r) {
    return "b=" + fmt(r.b) + " L=" + fmt(r.L) + " X_estimate=" + fmt(r.X_estimate) + " eps0=" + fmt(r.eps0) +
           " F2=" + fmt(r.F2);
  };

  const RegimeTableRow* worst_w = nullptr;
  const RegimeTableRow* worst_cs2 = nullptr;
  double max_dw = 0.0;
  double max_dcs2 = 0.0;
  std::size_t incomplete = 0;
  std::vector<const RegimeTableRow*> disagree;
  std::map<RegimeLabel, std::size_t> exact_counts, paper_counts;
  for (const auto& r : rows) {
    const double dw = std::abs(r.w_exact - r.w_paper);
    const double dcs2 = std::abs(r.cs2_exact - r.cs2_paper);
    if (std::isnan(dw) || std::isnan(dcs2)) ++incomplete;
    if (!std::isnan(dw) && (worst_w == nullptr || dw > max_dw)) {
      max_dw = dw;
      worst_w = &r;
    }
    if (!std::isnan(dcs2) && (worst_cs2 == nullptr || dcs2 > max_dcs2)) {
      max_dcs2 = dcs2;
      worst_cs2 = &r;
    }
    const RegimeLabel paper = classify_regime(r.w_paper, r.cs2_paper).label;
    ++exact_counts[r.regime_label];
    ++paper_counts[paper];
    if (paper != r.regime_label) disagree.push_back(&r);
  }

  std::ostringstream report;
  report << "command: regimes\n"
         << "exact columns: eos_w and sound_speed at X = X_estimate + eps0\n"
         << "paper columns: thin-wall approximations at (X_estimate, eps0, F2)\n"
         << "rows: " << rows.size() << "\n"
         << "rows with a guarded value: " << incomplete << "\n";
  if (worst_w != nullptr) {
    report << "max_abs_dw: " << fmt(max_dw) << " at " << point(*worst_w) << "\n";
  } else {
    report << "max_abs_dw: unavailable\n";
  }
  if (worst_cs2 != nullptr) {
    report << "max_abs_dcs2: " << fmt(max_dcs2) << " at " << point(*worst_cs2) << "\n";
  } else {
    report << "max_abs_dcs2: unavailable\n";
  }
  report << "exact ";
  write_label_counts(report, exact_counts);
  report << "paper ";
  write_label_counts(report, paper_counts);
  report << "label disagreements: " << disagree.size() << "\n";
  for (const auto* r : disagree) {
    report << "  " << point(*r) << ": exact " << to_string(r->regime_label) << " (w=" << fmt(r->w_exact)
           << ", cs2=" << fmt(r->cs2_exact) << "), paper " << to_string(classify_regime(r->w_paper, r->cs2_paper).label)
           << " (w=" << fmt(r->w_paper) << ", cs2=" << fmt(r->cs2_paper) << ")\n";
  }

  CommandResult result;
  result.files.push_back({config.output.stem + "_regimes.csv", table.text()});
  result.files.push_back({config.output.stem + "_regimes_discrepancy.txt", report.str()});
  result.status = "regimes: " + std::to_string(rows.size()) + " rows, " + std::to_string(disagree.size()) +
                  " label disagreements";
  return result;
}

std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& dir, const CommandResult& result) {
  std::vector<std::filesystem::path> written;
  for (const auto& f : result.files) {
    const auto path = dir / f.name;
    write_text_file(path, f.content);
    written.push_back(path);
  }
  return written;
}

}  // namespace kessence
