#pragma once
#include <vector>

#include "qmboot/errors.hpp"

namespace qmboot {

// Operator basis x^m p^n, m <= k_x, n <= k_p, graded-lex ordered on
// (m+n, m) and truncated to `depth` operators. depth counts operators,
// so depth d uses O_0..O_(d-1) and bootstrap matrices nest as leading
// principal blocks when only depth changes.
struct BasisSpec {
  int k_x = 8;
  int k_p = 3;
  int depth = 10;
};

struct BasisOp {
  int xpow = 0;
  int ppow = 0;
};

// Full graded-lex ordering for (k_x, k_p), before depth truncation.
std::vector<BasisOp> basis_ordering(int k_x, int k_p);

// The first `depth` operators; throws InputError if depth exceeds the pool.
std::vector<BasisOp> basis_operators(const BasisSpec& spec);

}  // namespace qmboot
