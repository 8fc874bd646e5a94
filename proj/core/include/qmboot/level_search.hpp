#pragma once
#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qmboot/bootstrap_matrix.hpp"
#include "qmboot/feasibility.hpp"

namespace qmboot {

// At fixed E the matrix entries are affine in the seed moments, so the
// smallest eigenvalue is concave over the seed box and its maximum is global.
// That maximum, lambda_hat(E), is what level localization runs on: feasible
// islands are exactly the E ranges where lambda_hat(E) >= -tol, and deep
// narrow islands show up as profile peaks long before any product grid could
// land inside them.
class SliceMaximizer {
 public:
  // lo/hi bound the seed box; E stays fixed for the lifetime of the object.
  SliceMaximizer(const MatrixEvaluator& ev, double E, std::vector<double> lo,
                 std::vector<double> hi);

  double lambda(const std::vector<double>& s) const;

  struct Result {
    double lambda;
    std::vector<double> seeds;
    int evals;
  };
  // Golden section for one seed, central-cut ellipsoid otherwise. Both are
  // deterministic and immune to the extreme anisotropy of the feasible sets.
  Result maximize() const;

  // Chord of {lambda >= -tol} along one axis through s, bisected to the
  // crossing. Ends clamp to the box.
  std::pair<double, double> axis_interval(const std::vector<double>& s, std::size_t axis,
                                          double tol) const;

 private:
  double lambda_vec(const Eigen::VectorXd& s, Eigen::VectorXd* grad) const;

  Eigen::MatrixXcd M0_;
  std::vector<Eigen::MatrixXcd> A_;
  Eigen::VectorXd lo_, hi_;
};

struct ProfileSample {
  double E = 0.0;
  double lambda = 0.0;
  std::vector<double> seeds;
};

// lambda_hat on an inclusive E lattice of spacing <= e_step, seeds maximized
// over the box's seed dims per slice. Parallel over slices, deterministic.
std::vector<ProfileSample> energy_profile(const MatrixEvaluator& ev, const SearchBox& box,
                                          double e_step, int workers = 0);

// One candidate energy level: a profile peak with its -tol crossing window in
// E and the per-axis seed chords at the peak.
struct LevelWindow {
  double E = 0.0;
  double lambda = 0.0;
  std::vector<double> seeds;
  double E_lo = 0.0, E_hi = 0.0;
  std::vector<double> seed_lo, seed_hi;
};

struct LocateParams {
  double e_step = 0.15;
  double tol = 1e-9;
  int max_candidates = 2;
  int max_zooms = 8;  // profile peaks examined before giving up
  int workers = 0;
};

// Profile local maxima are examined in ascending E: each is zoomed by golden
// section, kept only if the zoomed peak actually reaches lambda_hat >= -tol,
// and then bracketed by bisection to the -tol crossings. Later peaks inside
// an accepted window are the same feature and are skipped. Throws
// NumericalError when no peak reaches feasibility. profile_out, when given,
// receives the coarse profile the windows were cut from.
std::vector<LevelWindow> locate_levels(const MatrixEvaluator& ev, const SearchBox& box,
                                       const LocateParams& params,
                                       std::vector<ProfileSample>* profile_out = nullptr);

}  // namespace qmboot
