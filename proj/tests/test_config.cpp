#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "qmboot/csv.hpp"
#include "qmboot/errors.hpp"
#include "qmboot/run_config.hpp"

using namespace qmboot;
namespace fs = std::filesystem;

TEST_CASE("an empty config is exactly the defaults") {
  RunConfig c = parse_config_json("{}");
  CHECK(c == RunConfig{});
  CHECK(c.n == 2);
  REQUIRE(c.g_values.size() == 1);
  CHECK(c.g_values[0] == 1.0);
  CHECK(c.basis.depth == 0);
  CHECK(c.tol == 1e-9);
  CHECK(c.out_dir == ".");
}

TEST_CASE("a full config lands in every field") {
  RunConfig c = parse_config_json(R"({
    "format_version": 1,
    "model": {"n": 3, "g_list": [0.0, 0.5, 2.0]},
    "basis": {"kx": 6, "kp": 2, "depth": 11},
    "search": {
      "tol": 1e-7,
      "refine_levels": 4,
      "grid_points": 15,
      "profile_step": 0.1,
      "boxes": {"E": [0.2, 8.0], "x2": [0.0, 1.5]},
      "grid": {"E": 101}
    },
    "workers": 2,
    "out_dir": "runs/a"
  })");
  CHECK(c.n == 3);
  CHECK(c.g_values == std::vector<double>{0.0, 0.5, 2.0});
  CHECK(c.basis.k_x == 6);
  CHECK(c.basis.k_p == 2);
  CHECK(c.basis.depth == 11);
  CHECK(c.tol == 1e-7);
  CHECK(c.refine_levels == 4);
  CHECK(c.grid_points == 15);
  CHECK(c.profile_step == 0.1);
  REQUIRE(c.boxes.size() == 2);
  CHECK(c.boxes[0].dim == "E");
  CHECK(c.boxes[0].lo == 0.2);
  CHECK(c.boxes[0].hi == 8.0);
  REQUIRE(c.grid.size() == 1);
  CHECK(c.grid[0].first == "E");
  CHECK(c.grid[0].second == 101);
  CHECK(c.workers == 2);
  CHECK(c.out_dir == "runs/a");
}

TEST_CASE("serialization normalizes couplings to g_list and is idempotent") {
  RunConfig c = parse_config_json(R"({"model": {"g": 2.5}})");
  std::string j = config_to_json(c);
  CHECK(j.find("g_list") != std::string::npos);
  CHECK(j.find("\"g\"") == std::string::npos);
  RunConfig back = parse_config_json(j);
  CHECK(back == c);
  CHECK(config_to_json(back) == j);
}

TEST_CASE("hash: 16 hex digits, form-insensitive, field-sensitive") {
  RunConfig a = parse_config_json(R"({"model": {"g": 1.0}})");
  RunConfig b = parse_config_json(R"({"model": {"g_list": [1.0]}})");
  std::string ha = config_hash_hex(a);
  CHECK(ha.size() == 16);
  CHECK(ha.find_first_not_of("0123456789abcdef") == std::string::npos);
  CHECK(ha == config_hash_hex(b));
  CHECK(config_hash(a) == config_hash(b));

  auto changed = [&](const std::string& text) {
    return config_hash_hex(parse_config_json(text)) != ha;
  };
  CHECK(changed(R"({"model": {"g": 2.0}})"));
  CHECK(changed(R"({"model": {"g": 1.0, "n": 3}})"));
  CHECK(changed(R"({"model": {"g": 1.0}, "search": {"tol": 1e-8}})"));
  CHECK(changed(R"({"model": {"g": 1.0}, "basis": {"depth": 12}})"));
  CHECK(changed(R"({"model": {"g": 1.0}, "search": {"boxes": {"E": [0.0, 9.0]}}})"));
}

TEST_CASE("coupling forms are mutually exclusive and validated") {
  CHECK_THROWS_AS(parse_config_json(R"({"model": {"g": 1, "g_list": [1]}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"model": {"g_list": []}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"model": {"g_range": {"lo": 0, "hi": 1}}})"), InputError);
  CHECK_THROWS_AS(
      parse_config_json(R"({"model": {"g_range": {"lo": 0, "hi": 1, "count": 0}}})"), InputError);
  CHECK_THROWS_AS(
      parse_config_json(R"({"model": {"g_range": {"lo": 1, "hi": 1, "count": 3}}})"), InputError);
}

TEST_CASE("g_range endpoints are inclusive") {
  RunConfig c =
      parse_config_json(R"({"model": {"g_range": {"lo": 0.0, "hi": 2.0, "count": 5}}})");
  CHECK(c.g_values == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  RunConfig one = parse_config_json(R"({"model": {"g_range": {"lo": 0.7, "hi": 0.7, "count": 1}}})");
  CHECK(one.g_values == std::vector<double>{0.7});
}

TEST_CASE("unknown keys are rejected by name") {
  CHECK_THROWS_WITH_AS(parse_config_json(R"({"modle": {}})"),
                       "config: unknown key \"modle\" in top level", InputError);
  CHECK_THROWS_WITH_AS(parse_config_json(R"({"model": {"gg": 1}})"),
                       "config: unknown key \"gg\" in model", InputError);
  CHECK_THROWS_WITH_AS(parse_config_json(R"({"search": {"tolerance": 1e-9}})"),
                       "config: unknown key \"tolerance\" in search", InputError);
}

TEST_CASE("range and type validation") {
  CHECK_THROWS_AS(parse_config_json("[1,2]"), InputError);
  CHECK_THROWS_AS(parse_config_json("{\"format_version\": 2}"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"model": {"n": 1}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"model": {"n": 2.5}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"basis": {"kx": 0}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"basis": {"depth": -1}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"search": {"tol": 0}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"search": {"grid_points": 2}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"search": {"refine_levels": -1}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"search": {"profile_step": 0}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"search": {"boxes": {"E": [1]}}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"search": {"grid": [5]}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"workers": -1})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"out_dir": 5})"), InputError);
  CHECK_THROWS_AS(parse_config_json("not json"), InputError);
}

TEST_CASE("box and grid flag grammars") {
  BoxOverride b = parse_box_flag("E=0:10");
  CHECK(b.dim == "E");
  CHECK(b.lo == 0.0);
  CHECK(b.hi == 10.0);
  b = parse_box_flag("x2=0.5:2.5");
  CHECK(b.dim == "x2");
  CHECK(b.lo == 0.5);
  CHECK(b.hi == 2.5);
  b = parse_box_flag("E=-7.25:-1");
  CHECK(b.lo == -7.25);
  CHECK(b.hi == -1.0);

  CHECK_THROWS_AS(parse_box_flag("E=10:0"), InputError);
  CHECK_THROWS_AS(parse_box_flag("E0:10"), InputError);
  CHECK_THROWS_AS(parse_box_flag("E=0"), InputError);
  CHECK_THROWS_AS(parse_box_flag("E=a:b"), InputError);
  CHECK_THROWS_AS(parse_box_flag("=0:1"), InputError);

  auto gflag = parse_grid_flag("E=51");
  CHECK(gflag.first == "E");
  CHECK(gflag.second == 51);
  CHECK_THROWS_AS(parse_grid_flag("E=0"), InputError);
  CHECK_THROWS_AS(parse_grid_flag("E=-3"), InputError);
  CHECK_THROWS_AS(parse_grid_flag("E=3.5"), InputError);
  CHECK_THROWS_AS(parse_grid_flag("E51"), InputError);
}

TEST_CASE("fmt17 round-trips doubles exactly") {
  for (double v : {1.0 / 3.0, 0.1, 1e-300, 6.02214076e23, 0.926258434065, -2.5e-7}) {
    CAPTURE(v);
    CHECK(std::strtod(fmt17(v).c_str(), nullptr) == v);
  }
}

namespace {

SpectrumPoint sample_point(double g, double E0, double E1) {
  SpectrumPoint pt;
  pt.g = g;
  pt.n = 2;
  pt.depth = 13;
  pt.E0 = E0;
  pt.E1 = E1;
  pt.E0_err = 3e-9;
  pt.E1_err = 2e-6;
  return pt;
}

}  // namespace

TEST_CASE("spectrum CSV round-trips through its reader") {
  std::vector<SpectrumPoint> pts = {sample_point(0.0, 0.667986259152, 2.393644016479),
                                    sample_point(1.0, 0.926258434065, 3.057945727815)};
  std::string text = spectrum_csv(pts, "deadbeef01234567");
  CHECK(text.rfind("# config=deadbeef01234567 version=1\n", 0) == 0);

  GapCurve curve = read_spectrum_csv(text);
  CHECK(curve.n == 2);
  CHECK(curve.depth == 13);
  REQUIRE(curve.samples.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    GapSample want = gap(pts[i]);
    CHECK(curve.samples[i].g == pts[i].g);
    CHECK(curve.samples[i].gap_raw == want.gap_raw);
    CHECK(curve.samples[i].gap_anharmonic == want.gap_anharmonic);
    CHECK(curve.samples[i].uncertainty == want.uncertainty);
  }
}

TEST_CASE("spectrum CSV reader rejects malformed input") {
  CHECK_THROWS_AS(read_spectrum_csv(""), InputError);
  CHECK_THROWS_AS(read_spectrum_csv("# config=x version=1\n"), InputError);
  CHECK_THROWS_AS(read_spectrum_csv("g,E0\n1,2\n"), InputError);
  std::string good = spectrum_csv({sample_point(1.0, 0.9, 3.0)}, "h");
  CHECK_THROWS_AS(read_spectrum_csv(good + "1,2,3\n"), InputError);
  CHECK_THROWS_AS(read_spectrum_csv(good + "x,2,13,0.9,0,3.0,0,2.1,0.7,0\n"), InputError);
  // comments and blank lines between rows are fine
  std::string padded = good + "\n# trailing note\n";
  CHECK(read_spectrum_csv(padded).samples.size() == 1);
}

TEST_CASE("atomic writes leave the final file and nothing else") {
  fs::path dir = fs::temp_directory_path() / "qmboot_cfg_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::path target = dir / "out.csv";

  write_text_atomic(target.string(), "first\n");
  CHECK(read_file(target.string()) == "first\n");
  write_text_atomic(target.string(), "second\n");  // overwrite in place
  CHECK(read_file(target.string()) == "second\n");

  std::size_t entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    ++entries;
    CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
  }
  CHECK(entries == 1);
  fs::remove_all(dir);
}

TEST_CASE("missing files are reported as input errors") {
  CHECK_THROWS_AS(load_config_file("/nonexistent/qmboot.json"), InputError);
  CHECK_THROWS_AS(read_file("/nonexistent/qmboot.csv"), InputError);
}

TEST_CASE("solver config carries every search field across") {
  RunConfig c = parse_config_json(R"({
    "basis": {"depth": 11},
    "search": {"tol": 1e-8, "refine_levels": 2, "grid_points": 21, "profile_step": 0.05,
               "boxes": {"E": [0.1, 9.0]}, "grid": {"E": 41}},
    "workers": 3
  })");
  SolveConfig s = to_solve_config(c);
  CHECK(s.basis.depth == 11);
  CHECK(s.tol == 1e-8);
  CHECK(s.refine_levels == 2);
  CHECK(s.grid_points == 21);
  CHECK(s.profile_step == 0.05);
  CHECK(s.workers == 3);
  REQUIRE(s.box_overrides.size() == 1);
  CHECK(s.box_overrides[0].name == "E");
  CHECK(s.box_overrides[0].lo == 0.1);
  CHECK(s.box_overrides[0].hi == 9.0);
  REQUIRE(s.grid_overrides.size() == 1);
  CHECK(s.grid_overrides[0].second == 41);
}
