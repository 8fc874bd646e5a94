#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "qmboot/analysis.hpp"
#include "qmboot/csv.hpp"
#include "qmboot/errors.hpp"
#include "qmboot/moment_reduction.hpp"
#include "qmboot/oracle.hpp"
#include "qmboot/run_config.hpp"
#include "qmboot/spectra.hpp"

namespace {

using namespace qmboot;

struct Common {
  RunConfig cfg;
  std::string out_flag;
  std::string config_path;  // consumed by the pre-scan; kept so CLI11 accepts it
  std::vector<std::string> box_flags, grid_flags;
  double g_single = 0.0;
  std::string g_list_str, g_range_str;
};

// --config has to take effect before flag defaults are bound, so it is read
// straight from argv ahead of the CLI11 parse.
std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return "";
}

double strict_double(const std::string& s, const char* what) {
  if (s.empty()) throw InputError(std::string(what) + ": empty number");
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE)
    throw InputError(std::string(what) + ": bad number \"" + s + "\"");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

void add_common(CLI::App* sub, Common& c, bool with_g) {
  sub->add_option("--n", c.cfg.n, "potential exponent n in x^(2n)")->check(CLI::Range(2, 8));
  sub->add_option("--depth", c.cfg.basis.depth, "basis operator count (0 = pick by degree)");
  sub->add_option("--kx", c.cfg.basis.k_x, "max x power among basis operators");
  sub->add_option("--kp", c.cfg.basis.k_p, "max p power among basis operators");
  sub->add_option("--tol", c.cfg.tol, "PSD feasibility tolerance");
  sub->add_option("--refine", c.cfg.refine_levels, "island refinement passes");
  sub->add_option("--workers", c.cfg.workers, "scan threads (0 = all cores)");
  sub->add_option("--box", c.box_flags, "search range override, DIM=LO:HI (repeatable)");
  sub->add_option("--grid", c.grid_flags, "lattice count override, DIM=COUNT (repeatable)");
  sub->add_option("--out", c.out_flag, "output directory");
  sub->add_option("--config", c.config_path, "JSON config file (flags take precedence)");
  if (with_g) {
    auto* g = sub->add_option("--g", c.g_single, "single coupling");
    auto* gl = sub->add_option("--g-list", c.g_list_str, "comma-separated couplings");
    auto* gr = sub->add_option("--g-range", c.g_range_str, "couplings LO:HI:COUNT, inclusive");
    g->excludes(gl)->excludes(gr);
    gl->excludes(gr);
  }
}

void resolve_g(const CLI::App* sub, Common& c) {
  if (!sub->get_option_no_throw("--g")) return;
  if (sub->count("--g")) {
    c.cfg.g_values = {c.g_single};
  } else if (sub->count("--g-list")) {
    c.cfg.g_values.clear();
    for (const auto& tok : split(c.g_list_str, ','))
      c.cfg.g_values.push_back(strict_double(tok, "--g-list"));
    if (c.cfg.g_values.empty()) throw InputError("--g-list is empty");
  } else if (sub->count("--g-range")) {
    auto parts = split(c.g_range_str, ':');
    if (parts.size() != 3) throw InputError("--g-range expects LO:HI:COUNT");
    double lo = strict_double(parts[0], "--g-range");
    double hi = strict_double(parts[1], "--g-range");
    double cnt = strict_double(parts[2], "--g-range");
    int count = static_cast<int>(cnt);
    if (cnt != count || count < 1) throw InputError("--g-range count must be a positive integer");
    if (count > 1 && !(hi > lo)) throw InputError("--g-range needs HI > LO");
    c.cfg.g_values.clear();
    for (int i = 0; i < count; ++i)
      c.cfg.g_values.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  }
}

void apply_overrides(Common& c) {
  for (const auto& s : c.box_flags) {
    BoxOverride b = parse_box_flag(s);
    bool replaced = false;
    for (auto& e : c.cfg.boxes)
      if (e.dim == b.dim) {
        e = b;
        replaced = true;
      }
    if (!replaced) c.cfg.boxes.push_back(b);
  }
  for (const auto& s : c.grid_flags) {
    auto gv = parse_grid_flag(s);
    bool replaced = false;
    for (auto& e : c.cfg.grid)
      if (e.first == gv.first) {
        e = gv;
        replaced = true;
      }
    if (!replaced) c.cfg.grid.push_back(gv);
  }
}

std::string out_dir(const Common& c) {
  std::string dir = c.out_flag;
  if (dir.empty()) dir = c.cfg.out_dir;
  if (dir == ".") {
    if (const char* env = std::getenv("QMBOOT_OUT_DIR")) dir = env;
  }
  if (dir.empty()) dir = ".";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir + ": " + ec.message());
  return dir;
}

std::string fmt_g_file(double g) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", g);
  std::string s = buf;
  for (char& ch : s) {
    if (ch == '.') ch = 'p';
    if (ch == '-') ch = 'm';
  }
  return s;
}

double single_g(const Common& c) {
  if (c.cfg.g_values.size() != 1)
    throw InputError("this command needs exactly one coupling (--g)");
  return c.cfg.g_values[0];
}

int run_spectrum(Common& c) {
  SweepResult res = sweep(c.cfg.g_values, c.cfg.n, to_solve_config(c.cfg));
  for (const auto& e : res.errors) std::fprintf(stderr, "warning: %s\n", e.c_str());
  std::string path = out_dir(c) + "/spectrum_n" + std::to_string(c.cfg.n) + ".csv";
  write_text_atomic(path, spectrum_csv(res.points, config_hash_hex(c.cfg)));
  std::printf("wrote %s (%zu points, %zu failed)\n", path.c_str(), res.points.size(),
              res.errors.size());
  return 0;
}

int run_scan(Common& c, int levels) {
  double g = single_g(c);
  auto V = PolynomialPotential::anharmonic(g, c.cfg.n);
  SolveConfig scfg = to_solve_config(c.cfg);
  if (scfg.basis.depth == 0) scfg.basis.depth = default_depth(V);

  std::vector<Island> islands = survey(V, levels, scfg);
  if (static_cast<int>(islands.size()) < levels)
    std::fprintf(stderr, "warning: found %zu of %d requested bands\n", islands.size(), levels);

  // Background lattice for band plots. Deep islands are far thinner than any
  // affordable lattice, so this is context, not the level data; counts are
  // plot-friendly defaults that --grid can override per dim.
  SolveConfig bg = scfg;
  std::vector<std::pair<std::string, int>> counts;
  counts.emplace_back("E", 201);
  auto orders = V.seed_orders();
  int per_seed = orders.size() == 1 ? 41 : orders.size() == 2 ? 17 : 9;
  for (int o : orders) counts.emplace_back("x" + std::to_string(o), per_seed);
  counts.insert(counts.end(), bg.grid_overrides.begin(), bg.grid_overrides.end());
  bg.grid_overrides = std::move(counts);
  SearchBox box = default_search_box(V, bg);
  FeasibilityGrid grid = scan(V, scfg.basis, box, scfg.tol, scfg.workers);

  std::string stem = out_dir(c) + "/scan_n" + std::to_string(c.cfg.n) + "_g" + fmt_g_file(g) +
                     "_d" + std::to_string(scfg.basis.depth);
  write_text_atomic(stem + "_grid.csv", grid_csv(grid, config_hash_hex(c.cfg)));
  write_text_atomic(stem + "_islands.json", islands_json(islands));
  std::size_t feas = 0;
  for (char f : grid.feasible) feas += f != 0;
  std::printf("wrote %s_grid.csv and %s_islands.json (%zu/%zu cells feasible, %zu bands)\n",
              stem.c_str(), stem.c_str(), feas, grid.feasible.size(), islands.size());
  return islands.empty() ? 2 : 0;
}

// Provenance for post-processing commands: reuse the hash of the file being
// read rather than hashing this process's (mostly unused) config.
std::string source_hash(const std::string& text) {
  const std::string key = "# config=";
  if (text.rfind(key, 0) == 0) {
    auto end = text.find_first_of(" \n", key.size());
    if (end != std::string::npos) return text.substr(key.size(), end - key.size());
  }
  return "unknown";
}

int run_fit(Common& c, const std::string& in_path) {
  std::string text = read_file(in_path);
  GapCurve curve = read_spectrum_csv(text);
  FitParams fp = fit_gap(curve);
  if (fp.starts_converged == 0) throw NumericalError("no fit start converged");
  std::string path = out_dir(c) + "/fit_n" + std::to_string(curve.n) + ".json";
  write_text_atomic(path, fit_json(fp, curve.n));
  std::printf("wrote %s\n", path.c_str());
  std::printf("a=%.10g b=%.10g c=%.10g d=%.10g anchor=%.10g rms=%.3g (%d/%d starts converged)\n",
              fp.a, fp.b, fp.c, fp.d, fp.anchor, fp.rms, fp.starts_converged, 81);
  for (int k = 0; k < 4; ++k)
    if (fp.at_bound[static_cast<std::size_t>(k)])
      std::fprintf(stderr, "warning: parameter %c ran to an implausible magnitude\n", "abcd"[k]);
  return 0;
}

int run_susceptibility(Common& c, const std::string& in_path) {
  std::string text = read_file(in_path);
  GapCurve curve = read_spectrum_csv(text);
  auto pts = susceptibility(curve);
  std::string path = out_dir(c) + "/susceptibility_n" + std::to_string(curve.n) + ".csv";
  write_text_atomic(path, susceptibility_csv(pts, source_hash(text)));
  std::printf("wrote %s (%zu slopes)\n", path.c_str(), pts.size());
  return 0;
}

int run_oneloop(Common& c) {
  OneLoopCurve curve = oneloop_curve(c.cfg.g_values);
  std::string path = out_dir(c) + "/oneloop.csv";
  write_text_atomic(path, oneloop_csv(curve, config_hash_hex(c.cfg)));
  std::printf("wrote %s (%zu couplings)\n", path.c_str(), curve.g.size());
  return 0;
}

int run_oracle(Common& c, int k, int basis_size, double omega_ref) {
  double g = single_g(c);
  auto V = PolynomialPotential::anharmonic(g, c.cfg.n);
  OracleResult r = diagonalize(V, k, {basis_size, omega_ref});
  std::string out = "level,energy\n";
  for (std::size_t i = 0; i < r.evals.size(); ++i) {
    out += std::to_string(i) + "," + fmt17(r.evals[i]) + "\n";
    std::printf("E%zu = %.12f\n", i, r.evals[i]);
  }
  std::printf("converged at basis size %d\n", r.basis_size);
  std::string path =
      out_dir(c) + "/oracle_n" + std::to_string(c.cfg.n) + "_g" + fmt_g_file(g) + ".csv";
  write_text_atomic(path, out);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_reductions(Common& c, int max_xpow, int max_ppow) {
  double g = single_g(c);
  auto V = PolynomialPotential::anharmonic(g, c.cfg.n);
  MomentReducer red(V);
  std::string out;
  for (int a = 0; a <= max_xpow; ++a)
    for (int b = 0; b <= max_ppow; ++b)
      out += "x^" + std::to_string(a) + " p^" + std::to_string(b) + " : " +
             red.reduce(a, b).str() + "\n";
  std::string path = out_dir(c) + "/reductions_n" + std::to_string(c.cfg.n) + ".txt";
  write_text_atomic(path, out);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical bootstrap for 1D anharmonic spectra"};
  app.require_subcommand(1);

  Common c;
  try {
    std::string cfg_path = find_config_path(argc, argv);
    if (!cfg_path.empty()) c.cfg = load_config_file(cfg_path);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  auto* sp = app.add_subcommand("spectrum", "sweep couplings, write the E0/E1/gap table");
  add_common(sp, c, true);
  auto* sc = app.add_subcommand("scan", "feasibility lattice and islands at one coupling");
  int scan_levels = 2;
  sc->add_option("--levels", scan_levels, "feasible bands to report")->check(CLI::Range(1, 6));
  add_common(sc, c, true);
  auto* fi = app.add_subcommand("fit", "fit the gap formula to a spectrum CSV");
  std::string fit_in;
  fi->add_option("--in", fit_in, "spectrum CSV to fit")->required();
  add_common(fi, c, false);
  auto* su = app.add_subcommand("susceptibility", "finite-difference gap slopes from a CSV");
  std::string susc_in;
  su->add_option("--in", susc_in, "spectrum CSV to differentiate")->required();
  add_common(su, c, false);
  auto* ol = app.add_subcommand("oneloop", "one-loop quartic ground-state energy table");
  add_common(ol, c, true);
  auto* orc = app.add_subcommand("oracle", "independent diagonalization cross-check");
  int oracle_k = 4, oracle_size = 64;
  double oracle_omega = 0.0;
  orc->add_option("--k", oracle_k, "number of levels")->check(CLI::Range(1, 16));
  orc->add_option("--basis-size", oracle_size, "starting basis size");
  orc->add_option("--omega-ref", oracle_omega, "reference basis frequency (0 = match the well)");
  add_common(orc, c, true);
  auto* re = app.add_subcommand("reductions", "dump moment reductions of x^a p^b (debug)");
  int red_xpow = 8, red_ppow = 3;
  re->add_option("--max-xpow", red_xpow, "largest x power")->check(CLI::Range(0, 16));
  re->add_option("--max-ppow", red_ppow, "largest p power")->check(CLI::Range(0, 6));
  add_common(re, c, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    resolve_g(sub, c);
    apply_overrides(c);
    if (sub == sp) return run_spectrum(c);
    if (sub == sc) return run_scan(c, scan_levels);
    if (sub == fi) return run_fit(c, fit_in);
    if (sub == su) return run_susceptibility(c, susc_in);
    if (sub == ol) return run_oneloop(c);
    if (sub == orc) return run_oracle(c, oracle_k, oracle_size, oracle_omega);
    if (sub == re) return run_reductions(c, red_xpow, red_ppow);
    std::fprintf(stderr, "error: unknown subcommand\n");
    return 1;
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
