#include "kessence/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "kessence/csv.hpp"
#include "kessence/errors.hpp"

namespace kessence {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Field access on one JSON object. Every key read is remembered so that
// finish() can reject anything left over.
class ObjectReader {
public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& child(const std::string& key) {
    seen_.insert(key);
    if (!node_.contains(key)) throw ConfigError(where() + ": missing key '" + key + "'");
    return node_.at(key);
  }

  double number(const std::string& key) {
    const json& v = child(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(where(key) + ": must be finite");
    return d;
  }

  double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  std::size_t count(const std::string& key) {
    const json& v = child(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError(where(key) + ": expected a non-negative integer");
    }
    return v.get<std::size_t>();
  }

  std::string string(const std::string& key) {
    const json& v = child(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::string where(const std::string& key = {}) const {
    std::string p = path_;
    if (!key.empty()) p += p.empty() ? key : "." + key;
    return p.empty() ? "config" : p;
  }

  void finish() const {
    for (const auto& item : node_.items()) {
      if (!seen_.contains(item.key())) throw ConfigError(where(item.key()) + ": unknown key");
    }
  }

private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

KineticModel read_model(ObjectReader r) {
  KineticModel m;
  m.F0 = r.number("F0");
  m.F2 = r.number("F2");
  m.X0 = r.number("X0");
  m.eps0 = r.number("eps0");
  r.finish();
  return m;
}

PotentialSpec read_potential(ObjectReader r) {
  const std::string type = r.string("type");
  PotentialSpec out;
  if (type == "constant") {
    out = ConstantPotential{r.number("V0")};
  } else if (type == "quadratic") {
    out = QuadraticPotential{r.number("m2")};
  } else {
    throw ConfigError(r.where("type") + ": expected \"constant\" or \"quadratic\"");
  }
  r.finish();
  return out;
}

BackgroundSpec read_background(ObjectReader r) {
  const std::string type = r.string("type");
  BackgroundSpec out;
  if (type == "de_sitter") {
    out = DeSitter{r.number("H")};
  } else if (type == "power_law") {
    PowerLaw pl;
    pl.p = r.number("p");
    pl.t0 = r.number("t0");
    out = pl;
  } else {
    throw ConfigError(r.where("type") + ": expected \"de_sitter\" or \"power_law\"");
  }
  r.finish();
  return out;
}

WallProfile read_wall(ObjectReader r) {
  WallProfile w;
  w.b = r.number("b");
  w.L = r.number("L");
  r.finish();
  return w;
}

GridSpec read_grid(ObjectReader r) {
  GridSpec g;
  g.x_min = r.number("x_min");
  g.x_max = r.number("x_max");
  g.n_points = r.count("n_points");
  r.finish();
  return g;
}

ScanRange read_scan(ObjectReader r) {
  ScanRange s;
  s.min = r.number("min");
  s.max = r.number("max");
  s.count = r.count("count");
  r.finish();
  return s;
}

EvolveSettings read_evolve(ObjectReader r) {
  EvolveSettings e;
  e.t0 = r.number_or("t0", e.t0);
  e.t_end = r.number("t_end");
  e.phi = r.number_or("phi", e.phi);
  e.X = r.optional_number("X");
  e.phidot = r.optional_number("phidot");
  e.a = r.number_or("a", e.a);
  e.control.rel_tol = r.number_or("rel_tol", e.control.rel_tol);
  e.control.abs_tol = r.number_or("abs_tol", e.control.abs_tol);
  e.control.output_dt = r.number_or("output_dt", e.control.output_dt);
  if (r.has("max_steps")) e.control.max_steps = r.count("max_steps");
  e.tail_fraction = r.number_or("tail_fraction", e.tail_fraction);
  if (r.has("mode")) {
    const std::string mode = r.string("mode");
    if (mode == "full") {
      e.mode = EvolveMode::Full;
    } else if (mode == "kinetic_only") {
      e.mode = EvolveMode::KineticOnly;
    } else {
      throw ConfigError(r.where("mode") + ": expected \"full\" or \"kinetic_only\"");
    }
  }
  r.finish();
  return e;
}

OutputSpec read_output(ObjectReader r) {
  OutputSpec o;
  if (r.has("dir")) o.dir = r.string("dir");
  if (r.has("stem")) o.stem = r.string("stem");
  r.finish();
  return o;
}

// Domain checks from the library, reported as configuration errors.
template <class T>
void check(const char* section, const T& value) {
  try {
    validate(value);
  } catch (const DomainError& e) {
    throw ConfigError(std::string(section) + ": " + e.what());
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

// Lower bounds implied by each scanned parameter's own type invariant.
void check_scan(const std::string& key, const ScanRange& s) {
  const std::string at = "scans." + key;
  require(std::ranges::find(kScanKeys, key) != std::end(kScanKeys), at + ": unknown scan parameter");
  require(std::isfinite(s.min) && std::isfinite(s.max), at + ": bounds must be finite");
  require(s.count >= 1, at + ": count must be >= 1");
  require(s.count <= 10'000'000, at + ": count must be <= 1e7");
  require(s.min <= s.max, at + ": min must not exceed max");
  if (key == "b" || key == "L" || key == "X0") require(s.min > 0.0, at + ": values must be > 0");
  if (key == "eps0" || key == "F2") require(s.min >= 0.0, at + ": values must be >= 0");
}

void check_evolve(const EvolveSettings& e, const BackgroundSpec& background) {
  require(e.X.has_value() != e.phidot.has_value(), "evolve: give exactly one of X and phidot");
  if (e.X) require(*e.X >= 0.0, "evolve.X: must be >= 0");
  require(e.t_end > e.t0, "evolve: t_end must exceed t0");
  require(e.a > 0.0, "evolve.a: must be > 0");
  require(e.control.rel_tol > 0.0, "evolve.rel_tol: must be > 0");
  require(e.control.abs_tol > 0.0, "evolve.abs_tol: must be > 0");
  require(e.control.output_dt > 0.0, "evolve.output_dt: must be > 0");
  require(e.control.max_steps >= 1, "evolve.max_steps: must be >= 1");
  require(e.tail_fraction > 0.0 && e.tail_fraction <= 1.0, "evolve.tail_fraction: must lie in (0, 1]");
  if (std::holds_alternative<PowerLaw>(background)) {
    require(e.t0 > 0.0, "evolve.t0: power-law background needs t0 > 0");
  }
}

ordered_json write_potential(const PotentialSpec& p) {
  ordered_json j;
  if (const auto* c = std::get_if<ConstantPotential>(&p)) {
    j["type"] = "constant";
    j["V0"] = c->V0;
  } else {
    j["type"] = "quadratic";
    j["m2"] = std::get<QuadraticPotential>(p).m2;
  }
  return j;
}

ordered_json write_background(const BackgroundSpec& b) {
  ordered_json j;
  if (const auto* ds = std::get_if<DeSitter>(&b)) {
    j["type"] = "de_sitter";
    j["H"] = ds->H;
  } else {
    const auto& pl = std::get<PowerLaw>(b);
    j["type"] = "power_law";
    j["p"] = pl.p;
    j["t0"] = pl.t0;
  }
  return j;
}

}  // namespace

std::vector<double> ScanRange::points() const {
  std::vector<double> out;
  if (count == 0) return out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(min);
    return out;
  }
  const double step = (max - min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i + 1 < count; ++i) out.push_back(min + static_cast<double>(i) * step);
  out.push_back(max);
  return out;
}

void validate(const RunConfig& config) {
  check("model", config.model);
  check("potential", config.potential);
  check("background", config.background);
  if (config.wall) check("wall", *config.wall);
  if (config.grid) {
    const GridSpec& g = *config.grid;
    require(std::isfinite(g.x_min) && std::isfinite(g.x_max) && g.x_min < g.x_max,
            "grid: need finite x_min < x_max");
    require(g.n_points >= 2, "grid.n_points: must be >= 2");
  }
  for (const auto& [key, range] : config.scans) check_scan(key, range);
  if (config.evolve) check_evolve(*config.evolve, config.background);
  require(!config.output.dir.empty(), "output.dir: must not be empty");
  require(!config.output.stem.empty(), "output.stem: must not be empty");
  require(config.output.stem.find_first_of("/\\") == std::string::npos, "output.stem: must not contain a path separator");
  if (config.preset) {
    require(std::ranges::find(kPresetNames, *config.preset) != std::end(kPresetNames),
            "preset: unknown name '" + *config.preset + "'");
  }
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }

  RunConfig c;
  ObjectReader r(root, "");
  c.model = read_model(ObjectReader(r.child("model"), "model"));
  c.potential = read_potential(ObjectReader(r.child("potential"), "potential"));
  c.background = read_background(ObjectReader(r.child("background"), "background"));
  if (r.has("wall")) c.wall = read_wall(ObjectReader(r.child("wall"), "wall"));
  if (r.has("grid")) c.grid = read_grid(ObjectReader(r.child("grid"), "grid"));
  if (r.has("scans")) {
    ObjectReader scans(r.child("scans"), "scans");
    for (const auto& item : root.at("scans").items()) {
      if (std::ranges::find(kScanKeys, item.key()) == std::end(kScanKeys)) {
        throw ConfigError("scans." + item.key() + ": unknown scan parameter");
      }
      c.scans[item.key()] = read_scan(ObjectReader(scans.child(item.key()), "scans." + item.key()));
    }
  }
  if (r.has("evolve")) c.evolve = read_evolve(ObjectReader(r.child("evolve"), "evolve"));
  if (r.has("output")) c.output = read_output(ObjectReader(r.child("output"), "output"));
  if (r.has("preset")) c.preset = r.string("preset");
  r.finish();

  validate(c);
  return c;
}

std::string serialize_config(const RunConfig& c) {
  ordered_json j;
  j["model"] = {{"F0", c.model.F0}, {"F2", c.model.F2}, {"X0", c.model.X0}, {"eps0", c.model.eps0}};
  j["potential"] = write_potential(c.potential);
  j["background"] = write_background(c.background);
  if (c.wall) j["wall"] = {{"b", c.wall->b}, {"L", c.wall->L}};
  if (c.grid) j["grid"] = {{"x_min", c.grid->x_min}, {"x_max", c.grid->x_max}, {"n_points", c.grid->n_points}};
  if (!c.scans.empty()) {
    ordered_json scans = ordered_json::object();
    for (const auto& [key, s] : c.scans) scans[key] = {{"min", s.min}, {"max", s.max}, {"count", s.count}};
    j["scans"] = scans;
  }
  if (c.evolve) {
    const EvolveSettings& e = *c.evolve;
    ordered_json ev;
    ev["t0"] = e.t0;
    ev["t_end"] = e.t_end;
    ev["phi"] = e.phi;
    if (e.X) ev["X"] = *e.X;
    if (e.phidot) ev["phidot"] = *e.phidot;
    ev["a"] = e.a;
    ev["rel_tol"] = e.control.rel_tol;
    ev["abs_tol"] = e.control.abs_tol;
    ev["output_dt"] = e.control.output_dt;
    ev["max_steps"] = e.control.max_steps;
    ev["tail_fraction"] = e.tail_fraction;
    ev["mode"] = e.mode == EvolveMode::Full ? "full" : "kinetic_only";
    j["evolve"] = ev;
  }
  j["output"] = {{"dir", c.output.dir}, {"stem", c.output.stem}};
  if (c.preset) j["preset"] = *c.preset;
  return j.dump(2) + "\n";
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

RunConfig paper_point_config() {
  RunConfig c;
  c.model = KineticModel{-1.0, 1.0e3, 1.0e3, 1.0e-2};
  c.potential = ConstantPotential{1.0};
  c.background = DeSitter{1.0};
  c.wall = WallProfile{10.0, 9.0};
  c.scans["X"] = ScanRange{1.0e3, 2.0e3, 101};
  EvolveSettings e;
  e.t0 = 0.0;
  e.t_end = 4.0;
  e.X = 1050.0;
  c.evolve = e;
  return c;
}

void apply_preset(RunConfig& config, std::string_view name) {
  if (std::ranges::find(kPresetNames, name) == std::end(kPresetNames)) {
    throw ConfigError("preset: unknown name '" + std::string(name) + "'");
  }
  if (name == "paper-point") {
    const RunConfig p = paper_point_config();
    config.model = p.model;
    config.potential = p.potential;
    config.background = p.background;
    config.wall = p.wall;
    config.evolve = p.evolve;
  }
  config.preset = std::string(name);
}

}  // namespace kessence
