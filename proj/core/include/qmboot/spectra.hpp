#pragma once
#include <string>
#include <vector>

#include "qmboot/feasibility.hpp"
#include "qmboot/level_search.hpp"

namespace qmboot {

struct SpectrumPoint {
  double g = 0.0;
  int n = 2;
  double E0 = 0.0, E1 = 0.0;
  double E0_err = 0.0, E1_err = 0.0;  // full E extents of the refined islands
  int depth = 0;
  std::vector<double> seeds0, seeds1;  // island centroids over the seed dims
  Island island0, island1;             // refined islands, kept for output and warm starts
};

struct GapSample {
  double g = 0.0;
  double gap_raw = 0.0;         // E1 - E0
  double gap_anharmonic = 0.0;  // sqrt(2g) removed for g >= 0; equals gap_raw for g < 0
  double uncertainty = 0.0;     // E0_err + E1_err
};

struct GapCurve {
  int n = 2;
  int depth = 0;
  double tol = 0.0;
  std::vector<GapSample> samples;  // ascending g
};

struct SolveConfig {
  BasisSpec basis{8, 3, 0};  // depth 0 = choose from the potential degree
  double tol = 1e-9;
  int refine_levels = 3;
  int grid_points = 9;  // per-dim cell count of the confirmation scans
  double profile_step = 0.15;
  int workers = 0;
  // Named range overrides for the search box (count is ignored here; grid
  // resolution comes from grid_points or grid_overrides).
  std::vector<SearchBox::Dim> box_overrides;
  std::vector<std::pair<std::string, int>> grid_overrides;
};

// Depth that separates the two lowest levels for this potential degree at the
// default tolerance, from the calibration runs.
int default_depth(const PolynomialPotential& V);

// E plus one dim per seed moment. The stock ranges target the oscillator
// phase; for g < 0 the well deepens, so the E floor drops below the classical
// minimum and the moment ranges stretch with the well width.
SearchBox default_search_box(const PolynomialPotential& V, const SolveConfig& cfg = {});

// Full pipeline at one coupling: energy profile -> candidate windows ->
// confirmation scan -> island extraction -> refinement, for the two lowest
// levels.
SpectrumPoint solve_potential(const PolynomialPotential& V, const SolveConfig& cfg = {});
SpectrumPoint solve_point(double g, int n, const SolveConfig& cfg = {});

// Up to max_levels feasible E-bands ascending, measured from the energy
// profile (-tol crossings). Unlike solve_potential this tolerates bands that
// merge across levels or run into the box edge, which is what a feasibility
// survey at shallow depth looks like; the islands carry from_profile = true.
std::vector<Island> survey(const PolynomialPotential& V, int max_levels,
                           const SolveConfig& cfg = {});

GapSample gap(const SpectrumPoint& pt);

struct SweepResult {
  std::vector<SpectrumPoint> points;  // successful points, ascending g
  GapCurve curve;
  std::vector<std::string> errors;  // one "g=...: reason" entry per failed point
};

// Solves every coupling, warm-starting each point from its neighbor on the
// same side of g = 0 and falling back to a cold start when the warm window
// fails. Individual failures are recorded, not fatal; an all-failed sweep is.
SweepResult sweep(const std::vector<double>& g_values, int n, const SolveConfig& cfg = {});

struct SusceptibilityPoint {
  double g = 0.0;
  double slope = 0.0;  // d(gap_anharmonic)/dg
  char side = 'C';     // 'L'/'R' one-sided derivatives at g = 0, 'C' otherwise
};

// Finite-difference slope of the anharmonic gap: central in the interior,
// one-sided at the ends, and never differencing across g = 0 where the gap
// definition switches branch.
std::vector<SusceptibilityPoint> susceptibility(const GapCurve& curve);

}  // namespace qmboot
