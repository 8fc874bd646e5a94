#pragma once
#include <vector>

#include "qmboot/potential.hpp"

namespace qmboot {

struct BasisConfig {
  int size = 64;           // starting basis size, doubled until converged
  double omega_ref = 0.0;  // reference harmonic frequency; 0 = minimize the
                           // Gaussian variational energy over omega
};

struct OracleResult {
  std::vector<double> evals;  // k lowest eigenvalues, ascending
  int basis_size = 0;         // size at which they stopped moving
};

// Dense diagonalization of H = p^2/2 + V(x) in a harmonic oscillator basis.
// Completely separate code path from the bootstrap; doubles the basis until
// the requested levels move by less than 1e-8, giving up past 2048.
OracleResult diagonalize(const PolynomialPotential& V, int k, const BasisConfig& cfg = {});

}  // namespace qmboot
