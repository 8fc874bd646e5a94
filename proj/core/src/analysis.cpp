#include "qmboot/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qmboot/errors.hpp"

namespace qmboot {

double erfcx(double z) {
  if (z < 0) return 2.0 * std::exp(z * z) - erfcx(-z);
  if (z < 12.0) return std::exp(z * z) * std::erfc(z);
  // 1/(z sqrt(pi)) * sum (-1)^m (2m-1)!! / (2 z^2)^m; converges far below
  // double precision before the asymptotic divergence sets in at this z.
  const double inv2z2 = 1.0 / (2.0 * z * z);
  double term = 1.0, sum = 1.0;
  for (int m = 1; m <= 20; ++m) {
    term *= -(2 * m - 1) * inv2z2;
    sum += term;
    if (std::abs(term) < 1e-18 * sum) break;
  }
  return sum / (z * std::sqrt(std::numbers::pi));
}

double oneloop_E0(double g) {
  if (!(g > 0)) throw InputError("one-loop energy requires g > 0");
  const double pi = std::numbers::pi;
  double z = std::pow(g, 1.5) / std::sqrt(3.0);
  return std::sqrt(0.5 * g) +
         (std::sqrt(6.0) * g - std::sqrt(2.0 * pi) * std::pow(g, 2.5) * erfcx(z)) / pi;
}

double oneloop_asymptotic(double g, int terms) {
  if (!(g >= 5.0)) throw InputError("asymptotic expansion is only offered for g >= 5");
  if (terms < 1 || terms > 5)
    throw InputError("asymptotic term count must be between 1 and 5");
  double sum = 0.0, poch = 1.0;  // poch tracks (1/2)_m
  for (int m = 1; m <= terms; ++m) {
    poch *= m - 0.5;
    sum += (m % 2 ? 1.0 : -1.0) * poch * std::pow(3.0, m) * std::pow(g, 1.0 - 3.0 * m);
  }
  return std::sqrt(0.5 * g) + std::sqrt(6.0) / std::numbers::pi * sum;
}

OneLoopCurve oneloop_curve(const std::vector<double>& g_values) {
  OneLoopCurve out;
  for (double g : g_values) {
    out.g.push_back(g);
    out.E0.push_back(oneloop_E0(g));
    out.asym1.push_back(g >= 5.0 ? oneloop_asymptotic(g, 1)
                                 : std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

double gap_formula(double g, const FitParams& p) {
  if (g < 0) throw InputError("gap formula applies to the oscillator phase (g >= 0)");
  if (g == 0) return p.anchor;
  double u = p.a * std::pow(g, p.b);
  double v = p.c * std::pow(g, p.d);
  return 2.0 * p.anchor * std::exp(-u) / (1.0 + std::exp(-v));
}

namespace {

struct FitData {
  std::vector<double> g, y, sqw;  // sqrt of normalized weights
  double anchor = 0.0;
};

// Residuals and the Jacobian in th = (log a, log b, log c, log d). All the
// partials reduce to reuses of the model value, so there is no numerical
// differentiation anywhere in the fit.
double eval_fit(const FitData& d, const Eigen::Vector4d& th, Eigen::VectorXd& r,
                Eigen::MatrixXd* J) {
  const double a = std::exp(th(0)), b = std::exp(th(1));
  const double c = std::exp(th(2)), dd = std::exp(th(3));
  const auto m = static_cast<Eigen::Index>(d.g.size());
  r.resize(m);
  if (J) J->resize(m, 4);
  for (Eigen::Index i = 0; i < m; ++i) {
    double g = d.g[static_cast<std::size_t>(i)];
    double lg = std::log(g);
    double u = a * std::pow(g, b);
    double v = c * std::pow(g, dd);
    double sig = 1.0 / (1.0 + std::exp(-v));
    double f = 2.0 * d.anchor * std::exp(-u) * sig;
    double sw = d.sqw[static_cast<std::size_t>(i)];
    r(i) = sw * (f - d.y[static_cast<std::size_t>(i)]);
    if (J) {
      (*J)(i, 0) = sw * (-f * u);
      (*J)(i, 1) = sw * (-f * u * b * lg);
      (*J)(i, 2) = sw * (f * (1.0 - sig) * v);
      (*J)(i, 3) = sw * (f * (1.0 - sig) * v * dd * lg);
    }
  }
  return r.squaredNorm();
}

struct StartResult {
  Eigen::Vector4d th;
  double cost = std::numeric_limits<double>::infinity();
  bool converged = false;
};

StartResult run_lm(const FitData& d, const std::array<double, 4>& start) {
  StartResult res;
  Eigen::Vector4d th;
  for (int k = 0; k < 4; ++k) {
    if (!(start[static_cast<std::size_t>(k)] > 0))
      throw InputError("fit starts must be positive");
    th(k) = std::log(start[static_cast<std::size_t>(k)]);
  }
  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  double cost = eval_fit(d, th, r, &J);
  double mu = -1.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::Matrix4d H = J.transpose() * J;
    Eigen::Vector4d grad = J.transpose() * r;
    if (mu < 0) mu = 1e-3 * H.diagonal().maxCoeff() + 1e-12;
    Eigen::Matrix4d D = Eigen::Matrix4d::Zero();
    for (int k = 0; k < 4; ++k) D(k, k) = std::max(H(k, k), 1e-12);
    Eigen::Vector4d delta = (H + mu * D).ldlt().solve(-grad);
    Eigen::Vector4d trial = th + delta;
    for (int k = 0; k < 4; ++k) trial(k) = std::clamp(trial(k), -40.0, 40.0);
    Eigen::VectorXd rt;
    double cost_t = eval_fit(d, trial, rt, nullptr);
    if (cost_t < cost) {
      double drop = cost - cost_t;
      th = trial;
      cost = eval_fit(d, th, r, &J);
      mu = std::max(mu / 3.0, 1e-14);
      if (delta.norm() < 1e-13 || drop < 1e-17 * (1.0 + cost)) {
        res.converged = true;
        break;
      }
    } else {
      mu *= 4.0;
      if (mu > 1e14) break;
    }
  }
  res.th = th;
  res.cost = cost;
  return res;
}

}  // namespace

std::vector<std::array<double, 4>> default_fit_starts() {
  std::vector<std::array<double, 4>> starts;
  for (double a : {0.01, 0.1, 1.0})
    for (double b : {0.5, 1.0, 2.0})
      for (double c : {0.01, 0.1, 1.0})
        for (double d : {0.5, 1.0, 2.0}) starts.push_back({a, b, c, d});
  return starts;
}

FitParams fit_gap(const GapCurve& curve) { return fit_gap(curve, default_fit_starts()); }

FitParams fit_gap(const GapCurve& curve, const std::vector<std::array<double, 4>>& starts) {
  if (starts.size() < 8) throw InputError("fit needs at least 8 starts");
  FitData d;
  bool have_anchor = false;
  for (const auto& s : curve.samples) {
    if (s.g < 0) throw InputError("fit applies to the oscillator phase; drop g < 0 samples");
    if (s.g == 0.0) {
      d.anchor = s.gap_anharmonic;
      have_anchor = true;
      continue;
    }
    d.g.push_back(s.g);
    d.y.push_back(s.gap_anharmonic);
    d.sqw.push_back(s.uncertainty > 0 ? 1.0 / s.uncertainty : -1.0);
  }
  if (!have_anchor) throw InputError("fit needs a g = 0 sample to anchor the formula");
  if (d.g.size() < 6) throw InputError("fit needs at least 6 samples with g > 0");

  // Missing uncertainties get the mean weight; then normalize so an overall
  // rescale of the error bars cannot move the optimum.
  double wsum = 0.0;
  int wcount = 0;
  for (double s : d.sqw)
    if (s > 0) {
      wsum += s * s;
      ++wcount;
    }
  double wmean = wcount > 0 ? wsum / wcount : 1.0;
  double total = 0.0;
  for (double& s : d.sqw) {
    double w = s > 0 ? s * s : wmean;
    total += w;
    s = w;  // temporarily store w
  }
  for (double& s : d.sqw) s = std::sqrt(s * d.g.size() / total);

  StartResult best;
  int converged = 0;
  for (const auto& start : starts) {
    StartResult res = run_lm(d, start);
    if (res.converged) ++converged;
    if (res.cost < best.cost) best = res;
  }

  FitParams out;
  out.a = std::exp(best.th(0));
  out.b = std::exp(best.th(1));
  out.c = std::exp(best.th(2));
  out.d = std::exp(best.th(3));
  out.anchor = d.anchor;
  out.n_points = static_cast<int>(d.g.size());
  out.starts_converged = converged;

  Eigen::VectorXd r;
  Eigen::MatrixXd J;
  double cost = eval_fit(d, best.th, r, &J);
  double wtot = 0.0;
  for (double s : d.sqw) wtot += s * s;
  out.rms = std::sqrt(cost / wtot);
  const double params[4] = {out.a, out.b, out.c, out.d};
  if (out.n_points > 4) {
    double s2 = cost / (out.n_points - 4);
    Eigen::Matrix4d cov = (J.transpose() * J)
                              .ldlt()
                              .solve(Eigen::Matrix4d::Identity() * s2);
    for (int k = 0; k < 4; ++k) {
      double v = cov(k, k);
      out.param_err[static_cast<std::size_t>(k)] = v > 0 ? params[k] * std::sqrt(v) : 0.0;
    }
  }
  for (int k = 0; k < 4; ++k)
    out.at_bound[static_cast<std::size_t>(k)] = params[k] < 1e-7 || params[k] > 1e5;
  return out;
}

}  // namespace qmboot
