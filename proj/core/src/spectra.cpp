#include "qmboot/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "qmboot/errors.hpp"

namespace qmboot {

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string seed_name(int order) { return "x" + std::to_string(order); }

void validate(const SolveConfig& cfg) {
  if (!(cfg.tol > 0)) throw InputError("tolerance must be positive");
  if (cfg.grid_points < 3) throw InputError("confirmation grid needs at least 3 cells per dim");
  if (cfg.refine_levels < 0) throw InputError("refinement level count must be non-negative");
  if (!(cfg.profile_step > 0)) throw InputError("profile step must be positive");
}

BasisSpec resolve_basis(const PolynomialPotential& V, const SolveConfig& cfg) {
  BasisSpec b = cfg.basis;
  if (b.depth == 0) b.depth = default_depth(V);
  return b;
}

// Candidate window -> confirmed, refined island. The scan box is the window
// padded threefold per side, so a modest window underestimate still lands.
Island confirm_window(const MatrixEvaluator& ev, const LevelWindow& w, const SearchBox& global,
                      const SolveConfig& cfg) {
  if (w.lambda < -cfg.tol)
    throw NumericalError("candidate level near E=" + fmt_g(w.E) +
                         " never reaches feasibility at this tolerance; increase --depth or "
                         "loosen --tol");
  const double eps = 1e-9;
  if (w.E_lo <= global.dims[0].lo + eps || w.E_hi >= global.dims[0].hi - eps)
    throw NumericalError("feasible island at E=" + fmt_g(w.E) +
                         " touches the search box boundary; enlarge --box " +
                         global.dims[0].name + "=...");

  // Symmetric about the maximizer: with an odd cell count the middle cell
  // center hits it exactly, which matters when the island is a near-point
  // (pure harmonic spectra at tight tolerance).
  SearchBox tight;
  tight.dims.resize(global.dims.size());
  double hE = 3.0 * std::max({w.E - w.E_lo, w.E_hi - w.E, 1e-7});
  tight.dims[0] = {global.dims[0].name, w.E - hE, w.E + hE, cfg.grid_points};
  for (std::size_t i = 0; i < w.seeds.size(); ++i) {
    double hs = 3.0 * std::max({w.seeds[i] - w.seed_lo[i], w.seed_hi[i] - w.seeds[i], 1e-7});
    tight.dims[i + 1] = {global.dims[i + 1].name, w.seeds[i] - hs, w.seeds[i] + hs,
                         cfg.grid_points};
  }

  FeasibilityGrid grid = scan(ev, tight, cfg.tol, cfg.workers);
  std::vector<Island> islands = extract_islands(grid);
  if (islands.empty()) {
    for (auto& d : tight.dims) {
      double c = 0.5 * (d.lo + d.hi), h = 1.5 * (d.hi - d.lo);
      d.lo = c - h;
      d.hi = c + h;
    }
    grid = scan(ev, tight, cfg.tol, cfg.workers);
    islands = extract_islands(grid);
    if (islands.empty())
      throw NumericalError("no feasible cells near candidate E=" + fmt_g(w.E) +
                           "; loosen --tol or increase --grid resolution");
  }
  std::size_t pick = 0;
  double best = std::numeric_limits<double>::max();
  for (std::size_t k = 0; k < islands.size(); ++k) {
    double d = std::abs(islands[k].centroid_E() - w.E);
    if (d < best) {
      best = d;
      pick = k;
    }
  }
  Island isl = refine(ev, islands[pick], cfg.refine_levels, cfg.tol, cfg.workers);
  for (std::size_t d = 0; d < global.dims.size(); ++d) {
    bool low_bad = isl.lo[d] <= global.dims[d].lo - eps;
    bool high_bad = isl.hi[d] >= global.dims[d].hi + eps;
    // A moment range starting at 0 is a hard floor, not a user choice: cells
    // straddling it are infeasible on the negative side, so an island edge
    // poking past 0 by a cell width is fine.
    if (d > 0 && global.dims[d].lo == 0.0) low_bad = false;
    if (low_bad || high_bad)
      throw NumericalError("refined island exceeds the search box in dim " +
                           global.dims[d].name + "; enlarge --box " + global.dims[d].name +
                           "=...");
  }
  return isl;
}

SpectrumPoint assemble(const MatrixEvaluator& ev, const PolynomialPotential& V,
                       const std::vector<LevelWindow>& windows, const SearchBox& global,
                       const SolveConfig& cfg, const BasisSpec& basis) {
  Island i0 = confirm_window(ev, windows[0], global, cfg);
  Island i1 = confirm_window(ev, windows[1], global, cfg);
  if (i0.centroid_E() > i1.centroid_E()) std::swap(i0, i1);
  if (i0.hi[0] >= i1.lo[0])
    throw NumericalError("the two candidate levels merged into one feasible island; increase "
                         "--depth");

  SpectrumPoint pt;
  pt.g = V.coeff(2);
  pt.n = std::max(1, V.degree() / 2);
  pt.E0 = i0.centroid_E();
  pt.E1 = i1.centroid_E();
  pt.E0_err = i0.extent(0);
  pt.E1_err = i1.extent(0);
  pt.depth = basis.depth;
  pt.seeds0.assign(i0.centroid.begin() + 1, i0.centroid.end());
  pt.seeds1.assign(i1.centroid.begin() + 1, i1.centroid.end());
  pt.island0 = std::move(i0);
  pt.island1 = std::move(i1);
  return pt;
}

SpectrumPoint solve_in_box(const PolynomialPotential& V, const SolveConfig& cfg,
                           const SearchBox& profile_box, const SearchBox& global,
                           double profile_step) {
  BasisSpec basis = resolve_basis(V, cfg);
  MatrixEvaluator ev(V, basis);
  LocateParams lp;
  lp.e_step = profile_step;
  lp.tol = cfg.tol;
  lp.max_candidates = 2;
  lp.workers = cfg.workers;
  std::vector<LevelWindow> windows = locate_levels(ev, profile_box, lp);
  if (windows.size() < 2)
    throw NumericalError("only one candidate level found for E <= " +
                         fmt_g(profile_box.dims[0].hi) + "; widen the search box");
  return assemble(ev, V, windows, global, cfg, basis);
}

}  // namespace

int default_depth(const PolynomialPotential& V) {
  switch (V.degree()) {
    case 2:
      return 8;
    case 4:
      return 13;
    case 6:
      return 13;
    default:
      return 14;
  }
}

SearchBox default_search_box(const PolynomialPotential& V, const SolveConfig& cfg) {
  double Elo = 0.0;
  const double Ehi = 10.0;
  double xmin2 = 0.0;
  if (V.coeff(2) < 0) {
    // Double-well side: drop the E floor below the classical minimum and let
    // the moment ranges grow with the well radius.
    double vmin = 0.0, xbest = 0.0;
    for (int i = 0; i <= 10000; ++i) {
      double x = 1e-3 * i;
      double v = V.eval(x);
      if (v < vmin) {
        vmin = v;
        xbest = x;
      }
    }
    Elo = vmin - 1.0;
    xmin2 = xbest * xbest;
  }

  SearchBox box;
  box.dims.push_back({"E", Elo, Ehi, cfg.grid_points});
  for (int order : V.seed_orders()) {
    double hi;
    switch (order) {
      case 2:
        hi = 2.0;
        break;
      case 4:
        hi = 4.0;
        break;
      case 6:
        hi = 10.0;
        break;
      default:
        hi = std::pow(4.0, order / 2.0);
        break;
    }
    if (xmin2 > 0.0) {
      double cap = 2.5 * xmin2 + 2.0;
      hi = std::max(hi, 1.5 * std::pow(cap, order / 2.0));
    }
    box.dims.push_back({seed_name(order), 0.0, hi, cfg.grid_points});
  }

  for (const auto& ov : cfg.box_overrides) {
    bool found = false;
    for (auto& d : box.dims) {
      if (d.name != ov.name) continue;
      if (!(ov.hi > ov.lo)) throw InputError("empty range for box dim " + ov.name);
      d.lo = ov.lo;
      d.hi = ov.hi;
      found = true;
      break;
    }
    if (!found) throw InputError("unknown box dimension: " + ov.name);
  }
  for (const auto& ov : cfg.grid_overrides) {
    bool found = false;
    for (auto& d : box.dims) {
      if (d.name != ov.first) continue;
      if (ov.second < 3) throw InputError("grid count must be at least 3 for dim " + ov.first);
      d.count = ov.second;
      found = true;
      break;
    }
    if (!found) throw InputError("unknown grid dimension: " + ov.first);
  }
  return box;
}

SpectrumPoint solve_potential(const PolynomialPotential& V, const SolveConfig& cfg) {
  validate(cfg);
  SearchBox global = default_search_box(V, cfg);
  return solve_in_box(V, cfg, global, global, cfg.profile_step);
}

SpectrumPoint solve_point(double g, int n, const SolveConfig& cfg) {
  return solve_potential(PolynomialPotential::anharmonic(g, n), cfg);
}

std::vector<Island> survey(const PolynomialPotential& V, int max_levels, const SolveConfig& cfg) {
  validate(cfg);
  if (max_levels < 1) throw InputError("survey needs at least one level");
  BasisSpec basis = resolve_basis(V, cfg);
  MatrixEvaluator ev(V, basis);
  SearchBox box = default_search_box(V, cfg);

  LocateParams lp;
  lp.e_step = cfg.profile_step;
  lp.tol = cfg.tol;
  lp.max_candidates = max_levels;
  lp.max_zooms = std::max(8, 4 * max_levels);
  lp.workers = cfg.workers;
  std::vector<ProfileSample> prof;
  std::vector<LevelWindow> windows = locate_levels(ev, box, lp, &prof);

  // Bands are measured from the profile, not from a lattice: at shallow depth
  // neighboring levels share one band that is box-wide in E yet still thin in
  // the moment dims, which no affordable product lattice can represent. E
  // bounds come from the -tol crossings; moment bounds are the hull of the
  // peak chords and the in-band profile maximizer seeds.
  std::vector<Island> out;
  for (const auto& w : windows) {
    Island isl;
    isl.from_profile = true;
    isl.depth = basis.depth;
    isl.tol = cfg.tol;
    isl.source = box;
    std::size_t nd = box.dims.size();
    isl.lo.resize(nd);
    isl.hi.resize(nd);
    isl.centroid.resize(nd);
    isl.lo[0] = w.E_lo;
    isl.hi[0] = w.E_hi;
    isl.centroid[0] = w.E;
    for (std::size_t i = 0; i + 1 < nd; ++i) {
      isl.lo[i + 1] = w.seed_lo[i];
      isl.hi[i + 1] = w.seed_hi[i];
      isl.centroid[i + 1] = w.seeds[i];
    }
    for (const auto& p : prof) {
      if (p.E < w.E_lo || p.E > w.E_hi || p.lambda < -cfg.tol) continue;
      for (std::size_t i = 0; i + 1 < nd; ++i) {
        isl.lo[i + 1] = std::min(isl.lo[i + 1], p.seeds[i]);
        isl.hi[i + 1] = std::max(isl.hi[i + 1], p.seeds[i]);
      }
    }
    out.push_back(std::move(isl));
  }
  return out;
}

GapSample gap(const SpectrumPoint& pt) {
  GapSample s;
  s.g = pt.g;
  s.gap_raw = pt.E1 - pt.E0;
  s.gap_anharmonic = pt.g >= 0 ? s.gap_raw - std::sqrt(2.0 * pt.g) : s.gap_raw;
  s.uncertainty = pt.E0_err + pt.E1_err;
  return s;
}

namespace {

SpectrumPoint solve_warm(const PolynomialPotential& V, const SolveConfig& cfg,
                         const SpectrumPoint& prev) {
  SearchBox global = default_search_box(V, cfg);
  double dg = std::abs(V.coeff(2) - prev.g);
  // dE/dg = <x^2>, so the window tracks the levels with slack for curvature.
  double drift0 = (1.5 * prev.seeds0[0] + 0.3) * dg + 3 * prev.E0_err + 0.05;
  double drift1 = (1.5 * prev.seeds1[0] + 0.3) * dg + 3 * prev.E1_err + 0.05;

  SearchBox window = global;
  window.dims[0].lo = std::max(global.dims[0].lo, prev.E0 - drift0);
  window.dims[0].hi = std::min(global.dims[0].hi, prev.E1 + drift1);
  if (!(window.dims[0].hi > window.dims[0].lo))
    throw NumericalError("warm-start window collapsed");
  for (std::size_t i = 0; i + 1 < global.dims.size(); ++i) {
    double m = std::min(prev.seeds0[i], prev.seeds1[i]);
    double M = std::max(prev.seeds0[i], prev.seeds1[i]);
    double pad = 0.35 * (M - m) + (0.5 * M + 0.1) * dg + 0.05;
    window.dims[i + 1].lo = std::max(global.dims[i + 1].lo, m - pad);
    window.dims[i + 1].hi = std::min(global.dims[i + 1].hi, M + pad);
  }
  double width = window.dims[0].hi - window.dims[0].lo;
  double step = std::min(cfg.profile_step, std::max(0.02, width / 12));
  return solve_in_box(V, cfg, window, global, step);
}

}  // namespace

SweepResult sweep(const std::vector<double>& g_values, int n, const SolveConfig& cfg) {
  validate(cfg);
  if (g_values.empty()) throw InputError("empty coupling list");
  std::vector<double> gs = g_values;
  std::sort(gs.begin(), gs.end());
  gs.erase(std::unique(gs.begin(), gs.end()), gs.end());

  std::vector<std::optional<SpectrumPoint>> results(gs.size());
  SweepResult out;

  std::size_t first_nonneg = 0;
  while (first_nonneg < gs.size() && gs[first_nonneg] < 0) ++first_nonneg;

  auto solve_one = [&](std::size_t i, const std::optional<SpectrumPoint>& prior) {
    PolynomialPotential V = PolynomialPotential::anharmonic(gs[i], n);
    try {
      if (prior) {
        try {
          results[i] = solve_warm(V, cfg, *prior);
          return;
        } catch (const NumericalError&) {
          // fall through to a cold start
        }
      }
      results[i] = solve_potential(V, cfg);
    } catch (const NumericalError& e) {
      out.errors.push_back("g=" + fmt_g(gs[i]) + ": " + e.what());
    }
  };

  std::optional<SpectrumPoint> prior;
  for (std::size_t i = first_nonneg; i < gs.size(); ++i) {
    solve_one(i, prior);
    if (results[i]) prior = results[i];
  }
  prior = first_nonneg < gs.size() ? results[first_nonneg] : std::nullopt;
  for (std::size_t i = first_nonneg; i-- > 0;) {
    solve_one(i, prior);
    if (results[i]) prior = results[i];
  }

  for (std::size_t i = 0; i < gs.size(); ++i)
    if (results[i]) out.points.push_back(std::move(*results[i]));
  if (out.points.empty())
    throw NumericalError("all " + std::to_string(gs.size()) +
                         " sweep points failed; first: " + out.errors.front());

  out.curve.n = n;
  out.curve.depth = out.points.front().depth;
  out.curve.tol = cfg.tol;
  for (const auto& pt : out.points) out.curve.samples.push_back(gap(pt));
  return out;
}

std::vector<SusceptibilityPoint> susceptibility(const GapCurve& curve) {
  const auto& s = curve.samples;
  if (s.size() < 2) throw InputError("need at least two gap samples");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i].g > s[i - 1].g))
      throw InputError("gap samples must be sorted by g without duplicates");

  auto y = [&](std::size_t i) { return s[i].gap_anharmonic; };
  std::vector<SusceptibilityPoint> out;
  auto segment = [&](std::size_t b, std::size_t e, char zero_side) {
    if (e - b < 2) return;
    for (std::size_t i = b; i < e; ++i) {
      double sl;
      if (i == b)
        sl = (y(b + 1) - y(b)) / (s[b + 1].g - s[b].g);
      else if (i == e - 1)
        sl = (y(e - 1) - y(e - 2)) / (s[e - 1].g - s[e - 2].g);
      else
        sl = (y(i + 1) - y(i - 1)) / (s[i + 1].g - s[i - 1].g);
      out.push_back({s[i].g, sl, s[i].g == 0.0 ? zero_side : 'C'});
    }
  };

  std::size_t first_nonneg = 0;
  while (first_nonneg < s.size() && s[first_nonneg].g < 0) ++first_nonneg;
  std::size_t left_end = first_nonneg;
  if (left_end < s.size() && s[left_end].g == 0.0) ++left_end;  // g=0 joins the left segment
  segment(0, left_end, 'L');
  segment(first_nonneg, s.size(), 'R');
  if (out.empty())
    throw InputError("not enough samples on either side of g=0 for a derivative");
  return out;
}

}  // namespace qmboot
