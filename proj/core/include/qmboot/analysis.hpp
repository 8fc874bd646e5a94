#pragma once
#include <array>
#include <vector>

#include "qmboot/spectra.hpp"

namespace qmboot {

struct FitParams {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  double anchor = 0.0;                   // gap at g = 0, fixed from the data
  std::array<double, 4> param_err{};     // 1-sigma from the local quadratic model
  double rms = 0.0;                      // weighted RMS residual
  int n_points = 0;                      // residual count (g > 0 samples)
  int starts_converged = 0;
  std::array<bool, 4> at_bound{};        // parameter ran off to an implausible magnitude
};

// 2*anchor * exp(-a g^b) / (1 + exp(-c g^d)). Exactly the anchor at g = 0.
double gap_formula(double g, const FitParams& p);

// Weighted Levenberg-Marquardt in log(a..d) with the anchor pinned to the
// g = 0 sample. Runs every start and keeps the lowest cost, ties going to the
// earlier start, so the result is deterministic.
FitParams fit_gap(const GapCurve& curve);
FitParams fit_gap(const GapCurve& curve, const std::vector<std::array<double, 4>>& starts);
std::vector<std::array<double, 4>> default_fit_starts();

// exp(z^2) erfc(z), evaluated without forming either overflowing factor.
double erfcx(double z);

// Variational one-loop ground-state energy of the quartic well p^2/2 + g x^2
// + x^4, valid for g > 0.
double oneloop_E0(double g);

// Large-g expansion of the same quantity, at most 5 terms; the series is
// asymptotic, so it is only offered for g >= 5.
double oneloop_asymptotic(double g, int terms);

struct OneLoopCurve {
  std::vector<double> g;
  std::vector<double> E0;
  std::vector<double> asym1;  // one-term asymptotics; NaN below g = 5
};

OneLoopCurve oneloop_curve(const std::vector<double>& g_values);

}  // namespace qmboot
