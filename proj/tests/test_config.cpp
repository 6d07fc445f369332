#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

#include "csv_reader.hpp"
#include "kessence/config.hpp"
#include "kessence/csv.hpp"
#include "kessence/errors.hpp"
#include "random_models.hpp"

using namespace kessence;
using kessence::testing::Draws;

namespace {

const std::filesystem::path kConfigDir = KESSENCE_CONFIG_DIR;

// Minimal valid document; tests splice extra keys into it.
const std::string kMinimal = R"({
  "model": {"F0": -1, "F2": 1000, "X0": 1000, "eps0": 0.01},
  "potential": {"type": "constant", "V0": 1},
  "background": {"type": "de_sitter", "H": 1}
})";

std::string with(const std::string& extra) {
  std::string s = kMinimal;
  s.insert(s.rfind('}'), "," + extra);
  return s;
}

RunConfig random_config(Draws& d) {
  RunConfig c;
  c.model = d.model();
  c.potential = d.potential();
  if (d.uniform(0, 1) < 0.5) {
    c.background = DeSitter{d.log_uniform(1e-3, 1e3)};
  } else {
    c.background = PowerLaw{d.uniform(0.1, 3.0), d.log_uniform(0.1, 10.0)};
  }
  if (d.uniform(0, 1) < 0.5) c.wall = WallProfile{d.uniform(0.5, 30), d.uniform(0.5, 30)};
  if (d.uniform(0, 1) < 0.5) {
    const double lo = d.uniform(-10, 0);
    c.grid = GridSpec{lo, lo + d.uniform(0.1, 20), static_cast<std::size_t>(d.uniform(2, 5000))};
  }
  for (const char* key : {"X", "b", "eps0"}) {
    if (d.uniform(0, 1) < 0.5) continue;
    const double lo = d.log_uniform(1e-3, 1e3);
    c.scans[key] = ScanRange{lo, lo * d.uniform(1, 10), static_cast<std::size_t>(d.uniform(1, 1000))};
  }
  if (d.uniform(0, 1) < 0.5) {
    EvolveSettings e;
    e.t0 = d.uniform(0.5, 2);
    e.t_end = e.t0 + d.uniform(0.1, 10);
    e.phi = d.uniform(-1, 1);
    if (d.uniform(0, 1) < 0.5) {
      e.X = d.log_uniform(1e-3, 1e4);
    } else {
      e.phidot = d.uniform(-10, 10);
    }
    e.a = d.log_uniform(0.1, 10);
    e.control.rel_tol = d.log_uniform(1e-12, 1e-4);
    e.control.abs_tol = d.log_uniform(1e-14, 1e-6);
    e.control.output_dt = d.log_uniform(1e-3, 1);
    e.control.max_steps = static_cast<std::size_t>(d.uniform(1, 1e8));
    e.tail_fraction = d.uniform(0.01, 1);
    e.mode = d.uniform(0, 1) < 0.5 ? EvolveMode::Full : EvolveMode::KineticOnly;
    c.evolve = e;
  }
  c.output.dir = "out/" + std::to_string(static_cast<int>(d.uniform(0, 1e6)));
  c.output.stem = "s" + std::to_string(static_cast<int>(d.uniform(0, 1e6)));
  if (d.uniform(0, 1) < 0.3) c.preset = std::string(kPresetNames[static_cast<int>(d.uniform(0, 2.999))]);
  return c;
}

}  // namespace

TEST_CASE("shipped configs are canonical") {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kConfigDir)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    CAPTURE(entry.path().string());
    const std::string text = read_text_file(entry.path());
    const RunConfig c = parse_config(text);
    CHECK(serialize_config(c) == text);
    CHECK(parse_config(serialize_config(c)) == c);
  }
  CHECK(seen >= 5);
}

TEST_CASE("random configs round-trip") {
  Draws d(77);
  for (int i = 0; i < 500; ++i) {
    const RunConfig c = random_config(d);
    REQUIRE_NOTHROW(validate(c));
    const std::string text = serialize_config(c);
    const RunConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
  }
}

TEST_CASE("minimal config takes defaults") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.model == KineticModel{-1.0, 1000.0, 1000.0, 0.01});
  CHECK(std::get<ConstantPotential>(c.potential).V0 == 1.0);
  CHECK(std::get<DeSitter>(c.background).H == 1.0);
  CHECK(!c.wall);
  CHECK(!c.grid);
  CHECK(c.scans.empty());
  CHECK(!c.evolve);
  CHECK(c.output == OutputSpec{});
  CHECK(!c.preset);

  const RunConfig e = parse_config(with(R"("evolve": {"t_end": 2, "phidot": 3})"));
  REQUIRE(e.evolve);
  CHECK(e.evolve->t0 == 0.0);
  CHECK(e.evolve->phidot == 3.0);
  CHECK(!e.evolve->X);
  CHECK(e.evolve->control == StepControl{});
  CHECK(e.evolve->mode == EvolveMode::Full);
}

TEST_CASE("strict parsing") {
  const char* bad[] = {
      "{",
      "[]",
      R"({"model": {"F0": -1, "F2": 1000, "X0": 1000, "eps0": 0.01}})",
      R"({"model": {"F0": -1, "F2": 1000, "X0": 1000}, "potential": {"type": "constant", "V0": 1},
          "background": {"type": "de_sitter", "H": 1}})",
  };
  for (const char* text : bad) CHECK_THROWS_AS(parse_config(text), ConfigError);

  const std::string cases[] = {
      R"("extra": 1)",
      R"("wall": {"b": 10, "L": 9, "c": 1})",
      R"("scans": {"Y": {"min": 0, "max": 1, "count": 2}})",
      R"("scans": {"X": {"min": 0, "max": 1, "count": 2, "step": 1}})",
      R"("scans": {"X": {"min": 0, "max": 1, "count": 2.5}})",
      R"("scans": {"X": {"min": 0, "max": 1, "count": -2}})",
      R"("scans": {"X": {"min": 0, "max": 1, "count": 0}})",
      R"("scans": {"X": {"min": 2, "max": 1, "count": 3}})",
      R"("scans": {"b": {"min": 0, "max": 1, "count": 3}})",
      R"("scans": {"eps0": {"min": -1, "max": 1, "count": 3}})",
      R"("scans": {"X": {"min": "0", "max": 1, "count": 3}})",
      R"("grid": {"x_min": 1, "x_max": 1, "n_points": 10})",
      R"("grid": {"x_min": 0, "x_max": 1, "n_points": 1})",
      R"("evolve": {"t_end": 2})",
      R"("evolve": {"t_end": 2, "X": 1, "phidot": 1})",
      R"("evolve": {"t_end": 0, "X": 1})",
      R"("evolve": {"t_end": 2, "X": -1})",
      R"("evolve": {"t_end": 2, "X": 1, "rel_tol": 0})",
      R"("evolve": {"t_end": 2, "X": 1, "tail_fraction": 1.5})",
      R"("evolve": {"t_end": 2, "X": 1, "mode": "fast"})",
      R"("evolve": {"t_end": 2, "X": 1, "dt": 0.1})",
      R"("output": {"stem": "a/b"})",
      R"("output": {"stem": ""})",
      R"("output": {"format": "csv"})",
      R"("preset": "figure3")",
      R"("preset": 1)",
  };
  for (const auto& extra : cases) {
    CAPTURE(extra);
    CHECK_THROWS_AS(parse_config(with(extra)), ConfigError);
  }

  std::string s = kMinimal;
  for (const auto& [from, to] : {std::pair{"\"F2\": 1000", "\"F2\": -1"}, std::pair{"\"F0\": -1", "\"F0\": 0"},
                                 std::pair{"\"X0\": 1000", "\"X0\": 0"}, std::pair{"\"V0\": 1", "\"V0\": 0"},
                                 std::pair{"\"H\": 1", "\"H\": -1"}, std::pair{"constant", "cubic"},
                                 std::pair{"de_sitter", "anti_de_sitter"}, std::pair{"\"F0\": -1", "\"F0\": null"}}) {
    std::string t = s;
    t.replace(t.find(from), std::string(from).size(), to);
    CAPTURE(t);
    CHECK_THROWS_AS(parse_config(t), ConfigError);
  }

  // The power-law time origin must be positive.
  std::string pl = with(R"("evolve": {"t0": 0, "t_end": 2, "X": 1})");
  pl.replace(pl.find(R"({"type": "de_sitter", "H": 1})"), 29, R"({"type": "power_law", "p": 0.5, "t0": 1})");
  CHECK_THROWS_AS(parse_config(pl), ConfigError);
}

TEST_CASE("presets") {
  RunConfig c = parse_config(kMinimal);
  apply_preset(c, "figure2");
  CHECK(c.preset == "figure2");
  CHECK(c.model == parse_config(kMinimal).model);
  CHECK(!c.wall);

  RunConfig p = parse_config(with(R"("scans": {"eps0": {"min": 0, "max": 1, "count": 3}})"));
  p.model.F2 = 5.0;
  apply_preset(p, "paper-point");
  CHECK(p.model == KineticModel{-1.0, 1.0e3, 1.0e3, 1.0e-2});
  CHECK(p.wall == WallProfile{10.0, 9.0});
  CHECK(std::get<ConstantPotential>(p.potential).V0 == 1.0);
  CHECK(std::get<DeSitter>(p.background).H == 1.0);
  REQUIRE(p.evolve);
  CHECK(p.evolve->X == 1050.0);
  CHECK(p.scans.contains("eps0"));
  CHECK(p.preset == "paper-point");

  const RunConfig d = paper_point_config();
  CHECK_NOTHROW(validate(d));
  CHECK(d.scans.at("X") == ScanRange{1000.0, 2000.0, 101});
  CHECK_THROWS_AS(apply_preset(c, "figure9"), ConfigError);
}

TEST_CASE("scan points") {
  CHECK(ScanRange{3.0, 7.0, 1}.points() == std::vector<double>{3.0});
  const auto pts = ScanRange{1000.0, 2000.0, 101}.points();
  REQUIRE(pts.size() == 101);
  CHECK(pts.front() == 1000.0);
  CHECK(pts.back() == 2000.0);
  CHECK(pts[50] == 1500.0);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] - pts[i - 1] == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("load errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/kessence.json"), IoError);
  const auto dir = kessence::testing::scratch_dir("config");
  write_text_file(dir / "bad.json", "{\"model\": 1}");
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("float formatting") {
  CHECK(format_double(0.2) == "0.2");
  CHECK(format_double(-1.0) == "-1");
  CHECK(format_double(1000.0) == "1000");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "NAN");
  CHECK(format_double(-std::numeric_limits<double>::quiet_NaN()) == "NAN");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "INF");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-INF");

  Draws d(3);
  for (int i = 0; i < 100000; ++i) {
    const double v = d.sign() * d.log_uniform(1e-300, 1e300);
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
    // Shortest: dropping a significant digit must change the value.
    char buf[64];
    for (int prec = 1; prec < 17; ++prec) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, prec);
      double shorter = 0.0;
      std::from_chars(buf, res.ptr, shorter);
      if (shorter == v) {
        CHECK(s.size() <= static_cast<std::size_t>(res.ptr - buf));
        break;
      }
    }
  }
}

TEST_CASE("csv table") {
  CsvTable t({"a", "b"});
  t.add_row({"1", "x y"});
  t.add_row({"NAN", ""});
  CHECK(t.text() == "a,b\n1,x y\nNAN,\n");
  CHECK(t.rows() == 2);
  CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
  CHECK_THROWS_AS(t.add_row({"1", "a,b"}), std::invalid_argument);
  CHECK_THROWS_AS(t.add_row({"1", "a\nb"}), std::invalid_argument);

  const auto dir = kessence::testing::scratch_dir("csv");
  write_text_file(dir / "nested" / "t.csv", t.text());
  CHECK(read_text_file(dir / "nested" / "t.csv") == t.text());
  CHECK_THROWS_AS(write_text_file(dir / "nested" / "t.csv" / "under_a_file.csv", "x"), IoError);
  std::filesystem::remove_all(dir);
}
