#include "qmboot/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "qmboot/errors.hpp"
#include "qmboot/parallel_for.hpp"

namespace qmboot {

std::size_t SearchBox::points() const {
  std::size_t n = 1;
  for (const auto& d : dims) n *= static_cast<std::size_t>(d.count);
  return n;
}

std::vector<int> SearchBox::unflatten(std::size_t flat) const {
  std::vector<int> idx(dims.size());
  for (std::size_t d = dims.size(); d-- > 0;) {
    idx[d] = static_cast<int>(flat % static_cast<std::size_t>(dims[d].count));
    flat /= static_cast<std::size_t>(dims[d].count);
  }
  return idx;
}

std::vector<double> SearchBox::point(std::size_t flat) const {
  std::vector<int> idx = unflatten(flat);
  std::vector<double> c(dims.size());
  for (std::size_t d = 0; d < dims.size(); ++d) c[d] = coord(d, idx[d]);
  return c;
}

FeasibilityGrid scan(const MatrixEvaluator& ev, const SearchBox& box, double tol, int workers) {
  if (box.dims.empty()) throw InputError("search box has no dimensions");
  if (box.dims.size() != 1 + ev.potential().seed_orders().size())
    throw InputError("search box dimension count does not match the potential's seed moments");
  for (const auto& d : box.dims) {
    if (d.count < 1) throw InputError("grid count must be at least 1 for dim " + d.name);
    if (!(d.hi >= d.lo)) throw InputError("empty range for dim " + d.name);
  }
  if (!(tol >= 0)) throw InputError("tolerance must be non-negative");

  FeasibilityGrid grid;
  grid.box = box;
  grid.depth = ev.basis().depth;
  grid.tol = tol;
  const std::size_t npts = box.points();
  grid.feasible.assign(npts, 0);
  grid.min_eig.assign(npts, 0.0);

  parallel_for(npts, workers, [&](std::size_t i) {
    std::vector<double> c = box.point(i);
    double lam = ev.min_eig(c[0], c.data() + 1);
    grid.min_eig[i] = lam;
    grid.feasible[i] = lam >= -tol ? 1 : 0;
  });
  return grid;
}

FeasibilityGrid scan(const PolynomialPotential& V, const BasisSpec& basis, const SearchBox& box,
                     double tol, int workers) {
  MatrixEvaluator ev(V, basis);
  return scan(ev, box, tol, workers);
}

namespace {

// Offsets covering the 3^d - 1 neighborhood; face neighbors are the ones with
// a single nonzero component.
std::vector<std::vector<int>> neighbor_offsets(std::size_t d, bool faces_only) {
  std::vector<std::vector<int>> out;
  std::vector<int> off(d, -1);
  while (true) {
    int nonzero = 0;
    for (int v : off) nonzero += v != 0;
    if (nonzero > 0 && (!faces_only || nonzero == 1)) out.push_back(off);
    std::size_t k = d;
    while (k-- > 0) {
      if (off[k] < 1) {
        ++off[k];
        break;
      }
      off[k] = -1;
      if (k == 0) return out;
    }
  }
}

std::vector<int> label_components(const FeasibilityGrid& grid,
                                  const std::vector<std::vector<int>>& offsets, int& n_labels) {
  const SearchBox& box = grid.box;
  const std::size_t npts = grid.feasible.size();
  std::vector<int> label(npts, -1);
  n_labels = 0;
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < npts; ++seed) {
    if (!grid.feasible[seed] || label[seed] >= 0) continue;
    int id = n_labels++;
    stack.assign(1, seed);
    label[seed] = id;
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      std::vector<int> idx = box.unflatten(cur);
      for (const auto& off : offsets) {
        std::size_t flat = 0;
        bool ok = true;
        for (std::size_t d = 0; d < idx.size(); ++d) {
          int j = idx[d] + off[d];
          if (j < 0 || j >= box.dims[d].count) {
            ok = false;
            break;
          }
          flat = flat * static_cast<std::size_t>(box.dims[d].count) + static_cast<std::size_t>(j);
        }
        if (!ok || !grid.feasible[flat] || label[flat] >= 0) continue;
        label[flat] = id;
        stack.push_back(flat);
      }
    }
  }
  return label;
}

}  // namespace

std::vector<Island> extract_islands(const FeasibilityGrid& grid) {
  const SearchBox& box = grid.box;
  const std::size_t ndim = box.dims.size();
  int n_full = 0, n_face = 0;
  std::vector<int> full = label_components(grid, neighbor_offsets(ndim, false), n_full);
  std::vector<int> face = label_components(grid, neighbor_offsets(ndim, true), n_face);
  if (n_full == 0) return {};

  std::vector<Island> islands(static_cast<std::size_t>(n_full));
  for (auto& isl : islands) {
    isl.cell_lo.assign(ndim, std::numeric_limits<int>::max());
    isl.cell_hi.assign(ndim, std::numeric_limits<int>::min());
    isl.centroid.assign(ndim, 0.0);
    isl.depth = grid.depth;
    isl.tol = grid.tol;
    isl.source = box;
  }
  // A full-adjacency component holding more than one face-adjacency component
  // was joined across cell corners.
  std::vector<int> face_seen(static_cast<std::size_t>(n_face), -1);
  std::vector<int> face_count(static_cast<std::size_t>(n_full), 0);
  for (std::size_t i = 0; i < grid.feasible.size(); ++i) {
    if (!grid.feasible[i]) continue;
    Island& isl = islands[static_cast<std::size_t>(full[i])];
    std::vector<int> idx = box.unflatten(i);
    for (std::size_t d = 0; d < ndim; ++d) {
      isl.cell_lo[d] = std::min(isl.cell_lo[d], idx[d]);
      isl.cell_hi[d] = std::max(isl.cell_hi[d], idx[d]);
      isl.centroid[d] += box.coord(d, idx[d]);
    }
    ++isl.cells;
    if (face_seen[static_cast<std::size_t>(face[i])] != full[i]) {
      face_seen[static_cast<std::size_t>(face[i])] = full[i];
      ++face_count[static_cast<std::size_t>(full[i])];
    }
  }
  for (std::size_t k = 0; k < islands.size(); ++k) {
    Island& isl = islands[k];
    isl.merged = face_count[k] > 1;
    isl.lo.resize(ndim);
    isl.hi.resize(ndim);
    for (std::size_t d = 0; d < ndim; ++d) {
      isl.centroid[d] /= static_cast<double>(isl.cells);
      isl.lo[d] = box.dims[d].lo + isl.cell_lo[d] * box.step(d);
      isl.hi[d] = box.dims[d].lo + (isl.cell_hi[d] + 1) * box.step(d);
    }
  }
  std::sort(islands.begin(), islands.end(),
            [](const Island& a, const Island& b) { return a.centroid_E() < b.centroid_E(); });
  return islands;
}

Island refine(const MatrixEvaluator& ev, const Island& island, int levels, double tol,
              int workers) {
  if (levels < 0) throw InputError("refinement level count must be non-negative");
  Island cur = island;
  for (int lvl = 0; lvl < levels; ++lvl) {
    SearchBox next;
    next.dims.resize(cur.source.dims.size());
    for (std::size_t d = 0; d < next.dims.size(); ++d) {
      double h = cur.source.step(d);
      next.dims[d].name = cur.source.dims[d].name;
      next.dims[d].lo = cur.lo[d] - h;
      next.dims[d].hi = cur.hi[d] + h;
      next.dims[d].count = cur.source.dims[d].count;
    }
    FeasibilityGrid grid = scan(ev, next, tol, workers);
    std::vector<Island> found = extract_islands(grid);
    if (found.empty())
      throw NumericalError(
          "feasible island vanished during refinement; loosen --tol or lower --depth");
    // Track the component containing (or nearest to) the previous centroid.
    std::size_t pick = 0;
    double best = std::numeric_limits<double>::max();
    for (std::size_t k = 0; k < found.size(); ++k) {
      double dist = 0.0;
      bool inside = true;
      for (std::size_t d = 0; d < next.dims.size(); ++d) {
        double c = cur.centroid[d];
        if (c < found[k].lo[d] || c > found[k].hi[d]) inside = false;
        double dd = (c - found[k].centroid[d]) / std::max(next.step(d), 1e-300);
        dist += dd * dd;
      }
      if (inside) {
        pick = k;
        best = -1.0;
        break;
      }
      if (dist < best) {
        best = dist;
        pick = k;
      }
    }
    cur = found[pick];
  }
  return cur;
}

Island refine(const PolynomialPotential& V, const BasisSpec& basis, const Island& island,
              int levels, double tol, int workers) {
  MatrixEvaluator ev(V, basis);
  return refine(ev, island, levels, tol, workers);
}

}  // namespace qmboot
