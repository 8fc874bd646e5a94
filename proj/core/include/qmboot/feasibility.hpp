#pragma once
#include <cstddef>
#include <string>
#include <vector>

#include "qmboot/bootstrap_matrix.hpp"

namespace qmboot {

// Product lattice over the search space. dims[0] is always E; the remaining
// dims follow the potential's seed moments in order (<x^2>, <x^4>, <x^6>).
// Each dim is divided into `count` cells; lattice points are cell centers.
struct SearchBox {
  struct Dim {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;
  };
  std::vector<Dim> dims;

  std::size_t points() const;
  double step(std::size_t d) const { return (dims[d].hi - dims[d].lo) / dims[d].count; }
  double coord(std::size_t d, int idx) const {
    return dims[d].lo + (idx + 0.5) * step(d);
  }
  std::vector<int> unflatten(std::size_t flat) const;
  std::vector<double> point(std::size_t flat) const;
};

struct FeasibilityGrid {
  SearchBox box;
  int depth = 0;
  double tol = 0.0;
  std::vector<char> feasible;    // one per lattice point, row-major (last dim fastest)
  std::vector<double> min_eig;   // smallest eigenvalue per lattice point
};

// Connected component of feasible cells. Bounds are unions of whole cells, so
// [lo, hi] covers every feasible lattice cell of the component.
struct Island {
  std::vector<double> lo, hi;       // cell-edge bounds per dim
  std::vector<double> centroid;     // mean of member cell centers
  std::vector<int> cell_lo, cell_hi;
  std::size_t cells = 0;
  bool merged = false;  // true if this island is a union of corner-connected pieces
  // Bands wider than any affordable lattice (shallow depth) are measured from
  // the energy profile instead of from cells; see spectra::survey.
  bool from_profile = false;
  int depth = 0;
  double tol = 0.0;
  SearchBox source;  // lattice this island was extracted from

  double E_min() const { return lo[0]; }
  double E_max() const { return hi[0]; }
  double centroid_E() const { return centroid[0]; }
  double extent(std::size_t d) const { return hi[d] - lo[d]; }
};

// PSD feasibility on every lattice point. Pure per point, parallel over the
// lattice, deterministic gather.
FeasibilityGrid scan(const PolynomialPotential& V, const BasisSpec& basis, const SearchBox& box,
                     double tol, int workers = 0);

// Same but reusing a prebuilt evaluator (the basis/potential compile).
FeasibilityGrid scan(const MatrixEvaluator& ev, const SearchBox& box, double tol, int workers = 0);

// Face-adjacent components, sorted by ascending centroid E. Components that
// touch only through cell corners are merged into one island and flagged,
// which suppresses spurious splitting from single-cell grid noise.
std::vector<Island> extract_islands(const FeasibilityGrid& grid);

// Re-scan a one-cell-padded bounding box of the island at the same per-dim
// cell counts, `levels` times. Keeps the component nearest the previous
// centroid. Throws NumericalError if the island vanishes.
Island refine(const PolynomialPotential& V, const BasisSpec& basis, const Island& island,
              int levels, double tol, int workers = 0);
Island refine(const MatrixEvaluator& ev, const Island& island, int levels, double tol,
              int workers = 0);

}  // namespace qmboot
