#include "qmboot/run_config.hpp"

#include <cerrno>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "qmboot/errors.hpp"

namespace qmboot {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw InputError("config: " + msg); }

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) bad("unknown key \"" + it.key() + "\" in " + where);
  }
}

double num(const json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

}  // namespace

bool operator==(const RunConfig& a, const RunConfig& b) {
  return config_to_json(a) == config_to_json(b);
}

RunConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(e.what());
  }
  if (!j.is_object()) bad("top level must be an object");
  check_keys(j, {"format_version", "model", "basis", "search", "workers", "out_dir"},
             "top level");

  RunConfig c;
  if (j.contains("format_version")) {
    c.format_version = integer(j["format_version"], "format_version");
    if (c.format_version != 1) bad("unsupported format_version");
  }
  if (j.contains("model")) {
    const json& m = j["model"];
    check_keys(m, {"n", "g", "g_list", "g_range"}, "model");
    if (m.contains("n")) {
      c.n = integer(m["n"], "n");
      if (c.n < 2) bad("n must be at least 2");
    }
    int forms = int(m.contains("g")) + int(m.contains("g_list")) + int(m.contains("g_range"));
    if (forms > 1) bad("give exactly one of g, g_list, g_range");
    if (m.contains("g")) {
      c.g_values = {num(m["g"], "g")};
    } else if (m.contains("g_list")) {
      if (!m["g_list"].is_array() || m["g_list"].empty()) bad("g_list must be a non-empty array");
      c.g_values.clear();
      for (const json& v : m["g_list"]) c.g_values.push_back(num(v, "g_list entry"));
    } else if (m.contains("g_range")) {
      const json& r = m["g_range"];
      check_keys(r, {"lo", "hi", "count"}, "g_range");
      if (!r.contains("lo") || !r.contains("hi") || !r.contains("count"))
        bad("g_range needs lo, hi, count");
      double lo = num(r["lo"], "g_range.lo"), hi = num(r["hi"], "g_range.hi");
      int count = integer(r["count"], "g_range.count");
      if (count < 1) bad("g_range.count must be positive");
      if (count > 1 && !(hi > lo)) bad("g_range needs hi > lo");
      c.g_values.clear();
      for (int i = 0; i < count; ++i)
        c.g_values.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    }
  }
  if (j.contains("basis")) {
    const json& b = j["basis"];
    check_keys(b, {"kx", "kp", "depth"}, "basis");
    if (b.contains("kx")) c.basis.k_x = integer(b["kx"], "kx");
    if (b.contains("kp")) c.basis.k_p = integer(b["kp"], "kp");
    if (b.contains("depth")) c.basis.depth = integer(b["depth"], "depth");
    if (c.basis.k_x < 1 || c.basis.k_p < 0) bad("basis needs kx >= 1 and kp >= 0");
    if (c.basis.depth < 0) bad("depth must be non-negative (0 = automatic)");
  }
  if (j.contains("search")) {
    const json& s = j["search"];
    check_keys(s, {"boxes", "grid", "tol", "refine_levels", "grid_points", "profile_step"},
               "search");
    if (s.contains("tol")) {
      c.tol = num(s["tol"], "tol");
      if (!(c.tol > 0)) bad("tol must be positive");
    }
    if (s.contains("refine_levels")) {
      c.refine_levels = integer(s["refine_levels"], "refine_levels");
      if (c.refine_levels < 0) bad("refine_levels must be non-negative");
    }
    if (s.contains("grid_points")) {
      c.grid_points = integer(s["grid_points"], "grid_points");
      if (c.grid_points < 3) bad("grid_points must be at least 3");
    }
    if (s.contains("profile_step")) {
      c.profile_step = num(s["profile_step"], "profile_step");
      if (!(c.profile_step > 0)) bad("profile_step must be positive");
    }
    if (s.contains("boxes")) {
      if (!s["boxes"].is_object()) bad("boxes must map dim names to [lo, hi]");
      for (auto it = s["boxes"].begin(); it != s["boxes"].end(); ++it) {
        if (!it.value().is_array() || it.value().size() != 2)
          bad("box for " + it.key() + " must be [lo, hi]");
        c.boxes.push_back(
            {it.key(), num(it.value()[0], "box lo"), num(it.value()[1], "box hi")});
      }
    }
    if (s.contains("grid")) {
      if (!s["grid"].is_object()) bad("grid must map dim names to counts");
      for (auto it = s["grid"].begin(); it != s["grid"].end(); ++it)
        c.grid.emplace_back(it.key(), integer(it.value(), "grid count"));
    }
  }
  if (j.contains("workers")) {
    c.workers = integer(j["workers"], "workers");
    if (c.workers < 0) bad("workers must be non-negative (0 = all cores)");
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) bad("out_dir must be a string");
    c.out_dir = j["out_dir"].get<std::string>();
  }
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["format_version"] = c.format_version;
  j["model"]["n"] = c.n;
  j["model"]["g_list"] = c.g_values;
  j["basis"]["kx"] = c.basis.k_x;
  j["basis"]["kp"] = c.basis.k_p;
  j["basis"]["depth"] = c.basis.depth;
  j["search"]["tol"] = c.tol;
  j["search"]["refine_levels"] = c.refine_levels;
  j["search"]["grid_points"] = c.grid_points;
  j["search"]["profile_step"] = c.profile_step;
  json boxes = json::object();
  for (const auto& b : c.boxes) boxes[b.dim] = {b.lo, b.hi};
  j["search"]["boxes"] = boxes;
  json grid = json::object();
  for (const auto& g : c.grid) grid[g.first] = g.second;
  j["search"]["grid"] = grid;
  j["workers"] = c.workers;
  j["out_dir"] = c.out_dir;
  return j.dump(2) + "\n";
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::string s = config_to_json(cfg);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash_hex(const RunConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, config_hash(cfg));
  return buf;
}

SolveConfig to_solve_config(const RunConfig& c) {
  SolveConfig s;
  s.basis = c.basis;
  s.tol = c.tol;
  s.refine_levels = c.refine_levels;
  s.grid_points = c.grid_points;
  s.profile_step = c.profile_step;
  s.workers = c.workers;
  for (const auto& b : c.boxes) s.box_overrides.push_back({b.dim, b.lo, b.hi, 1});
  s.grid_overrides = c.grid;
  return s;
}

namespace {

double strict_double(const std::string& s, const std::string& what) {
  if (s.empty()) throw InputError(what + ": empty number");
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw InputError(what + ": bad number \"" + s + "\"");
  return v;
}

}  // namespace

BoxOverride parse_box_flag(const std::string& text) {
  auto eq = text.find('=');
  auto colon = text.find(':', eq == std::string::npos ? 0 : eq);
  if (eq == std::string::npos || colon == std::string::npos || eq == 0)
    throw InputError("--box expects DIM=LO:HI, got \"" + text + "\"");
  BoxOverride b;
  b.dim = text.substr(0, eq);
  b.lo = strict_double(text.substr(eq + 1, colon - eq - 1), "--box " + b.dim);
  b.hi = strict_double(text.substr(colon + 1), "--box " + b.dim);
  if (!(b.hi > b.lo)) throw InputError("--box " + b.dim + " needs LO < HI");
  return b;
}

std::pair<std::string, int> parse_grid_flag(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw InputError("--grid expects DIM=COUNT, got \"" + text + "\"");
  std::string dim = text.substr(0, eq);
  double v = strict_double(text.substr(eq + 1), "--grid " + dim);
  int count = static_cast<int>(v);
  if (v != count || count < 1) throw InputError("--grid " + dim + " needs a positive integer");
  return {dim, count};
}

}  // namespace qmboot
