#include "qmboot/basis.hpp"

namespace qmboot {

std::vector<BasisOp> basis_ordering(int k_x, int k_p) {
  if (k_x < 0 || k_p < 0) throw InputError("basis powers must be non-negative");
  std::vector<BasisOp> ops;
  ops.reserve(static_cast<std::size_t>((k_x + 1) * (k_p + 1)));
  for (int deg = 0; deg <= k_x + k_p; ++deg)
    for (int m = std::max(0, deg - k_p); m <= std::min(deg, k_x); ++m)
      ops.push_back({m, deg - m});
  return ops;
}

std::vector<BasisOp> basis_operators(const BasisSpec& spec) {
  if (spec.depth < 1) throw InputError("depth must be >= 1");
  auto ops = basis_ordering(spec.k_x, spec.k_p);
  if (static_cast<std::size_t>(spec.depth) > ops.size())
    throw InputError("depth exceeds (k_x+1)(k_p+1) operator pool");
  ops.resize(static_cast<std::size_t>(spec.depth));
  return ops;
}

}  // namespace qmboot
