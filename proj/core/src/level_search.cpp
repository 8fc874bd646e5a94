#include "qmboot/level_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmboot/errors.hpp"
#include "qmboot/parallel_for.hpp"

namespace qmboot {

namespace {

constexpr double kInvPhi = 0.61803398874989484820;

double smallest_eig(const Eigen::MatrixXcd& M, Eigen::VectorXcd* vec) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  es.compute(M, vec ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigensolver failed during slice maximization");
  if (vec) *vec = es.eigenvectors().col(0);
  return es.eigenvalues()(0);
}

}  // namespace

SliceMaximizer::SliceMaximizer(const MatrixEvaluator& ev, double E, std::vector<double> lo,
                               std::vector<double> hi) {
  const int ns = ev.seed_count();
  if (static_cast<int>(lo.size()) != ns || static_cast<int>(hi.size()) != ns)
    throw InputError("seed box dimension count does not match the potential");
  for (int i = 0; i < ns; ++i)
    if (!(hi[i] >= lo[i])) throw InputError("empty seed box range");
  std::vector<double> s(static_cast<std::size_t>(ns), 0.0);
  M0_ = ev.eval(E, s);
  A_.resize(static_cast<std::size_t>(ns));
  for (int i = 0; i < ns; ++i) {
    std::fill(s.begin(), s.end(), 0.0);
    s[static_cast<std::size_t>(i)] = 1.0;
    A_[static_cast<std::size_t>(i)] = ev.eval(E, s) - M0_;
  }
  lo_.resize(ns);
  hi_.resize(ns);
  for (int i = 0; i < ns; ++i) {
    lo_(i) = lo[static_cast<std::size_t>(i)];
    hi_(i) = hi[static_cast<std::size_t>(i)];
  }
}

double SliceMaximizer::lambda_vec(const Eigen::VectorXd& s, Eigen::VectorXd* grad) const {
  Eigen::MatrixXcd M = M0_;
  for (int i = 0; i < s.size(); ++i) M += s(i) * A_[static_cast<std::size_t>(i)];
  if (!grad) return smallest_eig(M, nullptr);
  Eigen::VectorXcd v;
  double lam = smallest_eig(M, &v);
  grad->resize(s.size());
  for (int i = 0; i < s.size(); ++i)
    (*grad)(i) = std::real(v.dot(A_[static_cast<std::size_t>(i)] * v));
  return lam;
}

double SliceMaximizer::lambda(const std::vector<double>& s) const {
  if (static_cast<Eigen::Index>(s.size()) != lo_.size())
    throw InputError("seed vector dimension mismatch");
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(s.data(), lo_.size());
  return lambda_vec(v, nullptr);
}

SliceMaximizer::Result SliceMaximizer::maximize() const {
  const int n = static_cast<int>(lo_.size());
  Result out;
  out.evals = 0;
  if (n == 0) {
    out.lambda = smallest_eig(M0_, nullptr);
    out.evals = 1;
    return out;
  }

  if (n == 1) {
    double a = lo_(0), b = hi_(0);
    auto f = [&](double x) {
      ++out.evals;
      Eigen::VectorXd s(1);
      s(0) = x;
      return lambda_vec(s, nullptr);
    };
    double bl = -std::numeric_limits<double>::infinity(), bx = a;
    auto consider = [&](double x, double fx) {
      if (fx > bl) {
        bl = fx;
        bx = x;
      }
    };
    double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    consider(c, fc);
    consider(d, fd);
    for (int it = 0; it < 80 && b - a > 1e-14 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - kInvPhi * (b - a);
        fc = f(c);
        consider(c, fc);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + kInvPhi * (b - a);
        fd = f(d);
        consider(d, fd);
      }
    }
    out.lambda = bl;
    out.seeds = {bx};
    return out;
  }

  // Central-cut ellipsoid. The smallest eigenvalue is concave in the seeds, so
  // v^dag A_i v is a supergradient and sqrt(g'Pg) bounds the remaining gap.
  Eigen::VectorXd c = 0.5 * (lo_ + hi_);
  Eigen::VectorXd r = 0.5 * (hi_ - lo_);
  for (int i = 0; i < n; ++i) r(i) = std::max(r(i), 1e-12);
  Eigen::MatrixXd P = (r.array().square() * static_cast<double>(n)).matrix().asDiagonal();
  const int max_iters = 150 * n + 120;
  const double gap_tol = 1e-10;

  double bl = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd bs = c;
  Eigen::VectorXd g(n);
  for (int it = 0; it < max_iters; ++it) {
    int viol_axis = -1;
    double viol = 0.0;
    for (int i = 0; i < n; ++i) {
      double v = std::max(lo_(i) - c(i), c(i) - hi_(i));
      if (v > viol) {
        viol = v;
        viol_axis = i;
      }
    }
    bool in_box = viol_axis < 0;
    if (in_box) {
      double lam = lambda_vec(c, &g);
      ++out.evals;
      if (lam > bl) {
        bl = lam;
        bs = c;
      }
    } else {
      g.setZero();
      g(viol_axis) = c(viol_axis) < lo_(viol_axis) ? 1.0 : -1.0;
    }
    Eigen::VectorXd Pg = P * g;
    double gPg = g.dot(Pg);
    if (!(gPg > 0)) break;
    double denom = std::sqrt(gPg);
    if (in_box && denom < gap_tol) break;
    Eigen::VectorXd gn = Pg / denom;
    c += gn / (n + 1);
    P = (P - (2.0 / (n + 1)) * (gn * gn.transpose())) *
        (static_cast<double>(n) * n / (static_cast<double>(n) * n - 1));
    P = 0.5 * (P + P.transpose()).eval();
  }
  out.lambda = bl;
  out.seeds.assign(bs.data(), bs.data() + n);
  return out;
}

std::pair<double, double> SliceMaximizer::axis_interval(const std::vector<double>& s,
                                                        std::size_t axis, double tol) const {
  if (axis >= s.size()) throw InputError("axis index out of range");
  std::vector<double> q = s;
  auto feasible = [&](double v) {
    q[axis] = v;
    return lambda(q) >= -tol;
  };
  if (!feasible(s[axis])) return {s[axis], s[axis]};
  const double width = hi_(static_cast<Eigen::Index>(axis)) - lo_(static_cast<Eigen::Index>(axis));
  const double step0 = std::max(1e-9, 1e-4 * width);

  auto crossing = [&](double edge, int dir) {
    double good = s[axis];
    double bad = std::numeric_limits<double>::quiet_NaN();
    double st = step0;
    while (dir * (edge - good) > 0) {
      double t = dir > 0 ? std::min(good + st, edge) : std::max(good - st, edge);
      if (feasible(t)) {
        good = t;
        st *= 2;
      } else {
        bad = t;
        break;
      }
    }
    if (std::isnan(bad)) return edge;
    for (int it = 0; it < 40; ++it) {
      double mid = 0.5 * (good + bad);
      (feasible(mid) ? good : bad) = mid;
    }
    return good;
  };
  double lo = crossing(lo_(static_cast<Eigen::Index>(axis)), -1);
  double hi = crossing(hi_(static_cast<Eigen::Index>(axis)), +1);
  return {lo, hi};
}

std::vector<ProfileSample> energy_profile(const MatrixEvaluator& ev, const SearchBox& box,
                                          double e_step, int workers) {
  if (box.dims.empty()) throw InputError("search box has no dimensions");
  if (static_cast<int>(box.dims.size()) != 1 + ev.seed_count())
    throw InputError("search box dimension count does not match the potential's seed moments");
  if (!(e_step > 0)) throw InputError("profile step must be positive");
  const double elo = box.dims[0].lo, ehi = box.dims[0].hi;
  const int count = ehi - elo > 1e-15
                        ? std::max(2, static_cast<int>(std::ceil((ehi - elo) / e_step)) + 1)
                        : 1;
  std::vector<double> slo, shi;
  for (std::size_t d = 1; d < box.dims.size(); ++d) {
    slo.push_back(box.dims[d].lo);
    shi.push_back(box.dims[d].hi);
  }
  std::vector<ProfileSample> out(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), workers, [&](std::size_t i) {
    double E = count == 1 ? elo : elo + (ehi - elo) * static_cast<double>(i) / (count - 1);
    SliceMaximizer sm(ev, E, slo, shi);
    auto r = sm.maximize();
    out[i].E = E;
    out[i].lambda = r.lambda;
    out[i].seeds = r.seeds;
  });
  return out;
}

std::vector<LevelWindow> locate_levels(const MatrixEvaluator& ev, const SearchBox& box,
                                       const LocateParams& params,
                                       std::vector<ProfileSample>* profile_out) {
  if (params.max_candidates < 1) throw InputError("need at least one candidate level");
  std::vector<ProfileSample> prof = energy_profile(ev, box, params.e_step, params.workers);
  if (profile_out) *profile_out = prof;

  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    bool up = i == 0 || prof[i].lambda > prof[i - 1].lambda;
    bool down = i + 1 == prof.size() || prof[i].lambda >= prof[i + 1].lambda;
    if (up && down) peaks.push_back(i);
  }

  std::vector<double> slo, shi;
  for (std::size_t d = 1; d < box.dims.size(); ++d) {
    slo.push_back(box.dims[d].lo);
    shi.push_back(box.dims[d].hi);
  }
  const double elo = box.dims[0].lo, ehi = box.dims[0].hi;
  const double estep =
      prof.size() > 1 ? (ehi - elo) / static_cast<double>(prof.size() - 1) : 1e-3;

  auto slice_max = [&](double E) {
    SliceMaximizer sm(ev, E, slo, shi);
    return sm.maximize();
  };

  std::vector<LevelWindow> out;
  int zooms = 0;
  for (std::size_t pk : peaks) {
    if (static_cast<int>(out.size()) >= params.max_candidates) break;
    if (zooms >= params.max_zooms) break;
    // A later local maximum inside an accepted window is the same feature
    // seen again (wide bands produce several lattice maxima).
    if (!out.empty() && prof[pk].E <= out.back().E_hi + 0.5 * estep) continue;
    ++zooms;

    LevelWindow w;
    double a = std::max(elo, prof[pk].E - estep);
    double b = std::min(ehi, prof[pk].E + estep);
    w.E = prof[pk].E;
    w.lambda = prof[pk].lambda;
    w.seeds = prof[pk].seeds;
    auto consider = [&](double E, const SliceMaximizer::Result& r) {
      if (r.lambda > w.lambda) {
        w.lambda = r.lambda;
        w.E = E;
        w.seeds = r.seeds;
      }
    };
    double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
    auto rc = slice_max(c), rd = slice_max(d);
    consider(c, rc);
    consider(d, rd);
    // lambda_hat can be cusp-sharp in E (point spectrum at zero island
    // width), so zoom until the bracket is at rounding scale.
    for (int it = 0; it < 60 && b - a > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
      if (rc.lambda > rd.lambda) {
        b = d;
        d = c;
        rd = rc;
        c = b - kInvPhi * (b - a);
        rc = slice_max(c);
        consider(c, rc);
      } else {
        a = c;
        c = d;
        rc = rd;
        d = a + kInvPhi * (b - a);
        rd = slice_max(d);
        consider(d, rd);
      }
    }

    // Not a level at this depth and tolerance (grid noise, or a peak that
    // stays strictly infeasible); move on to the next maximum.
    if (w.lambda < -params.tol) continue;

    auto edge = [&](double limit, int dir) {
      double good = w.E;
      double bad = std::numeric_limits<double>::quiet_NaN();
      double st = 0.5 * estep;
      while (dir * (limit - good) > 0) {
        double t = dir > 0 ? std::min(good + st, limit) : std::max(good - st, limit);
        if (slice_max(t).lambda >= -params.tol) {
          good = t;
          st *= 2;
        } else {
          bad = t;
          break;
        }
      }
      if (std::isnan(bad)) return limit;
      for (int it = 0; it < 30; ++it) {
        double mid = 0.5 * (good + bad);
        (slice_max(mid).lambda >= -params.tol ? good : bad) = mid;
      }
      return good;
    };
    w.E_lo = edge(elo, -1);
    w.E_hi = edge(ehi, +1);

    SliceMaximizer sm(ev, w.E, slo, shi);
    w.seed_lo.resize(w.seeds.size());
    w.seed_hi.resize(w.seeds.size());
    for (std::size_t ax = 0; ax < w.seeds.size(); ++ax) {
      auto iv = sm.axis_interval(w.seeds, ax, params.tol);
      w.seed_lo[ax] = iv.first;
      w.seed_hi[ax] = iv.second;
    }
    out.push_back(std::move(w));
  }
  if (out.empty())
    throw NumericalError(
        "no feasibility peak found in the energy window; widen the search box or increase "
        "depth");
  return out;
}

}  // namespace qmboot
