#pragma once
#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "qmboot/basis.hpp"
#include "qmboot/potential.hpp"

namespace qmboot {

// Hermitian matrix of <O_i^dag O_j> at one search-space point, with the
// context that produced it.
struct BootstrapMatrix {
  Eigen::MatrixXcd entries;
  double E = 0.0;
  std::vector<double> seeds;
  PolynomialPotential V;
  BasisSpec basis;
};

// Symbolic reduction happens once per (potential, basis); evaluation at a
// search-space point is then a numeric moment recursion plus an affine
// combination per entry. Immutable after construction, safe to share across
// scan threads.
class MatrixEvaluator {
 public:
  MatrixEvaluator(const PolynomialPotential& V, const BasisSpec& basis);

  int dim() const { return dim_; }
  int seed_count() const { return static_cast<int>(seed_orders_.size()); }
  const std::vector<int>& seed_orders() const { return seed_orders_; }
  const PolynomialPotential& potential() const { return V_; }
  const BasisSpec& basis() const { return basis_; }

  // Position moments <x^t> for t = 0..max_t from (E, seeds); odd entries 0.
  void moment_table(double E, const double* seeds, std::vector<double>& m) const;

  // Upper triangle computed, lower filled by conjugation.
  void eval(double E, const double* seeds, Eigen::MatrixXcd& M) const;
  Eigen::MatrixXcd eval(double E, const std::vector<double>& seeds) const;

  // Every entry computed independently from its own reduction (no conjugate
  // shortcut); used by build_matrix so Hermiticity is measured, not assumed.
  Eigen::MatrixXcd eval_full(double E, const std::vector<double>& seeds) const;

  double min_eig(double E, const double* seeds) const;

 private:
  struct Entry {
    // value = sum over terms of c * E^k * m[t]
    std::vector<int> t, k;
    std::vector<std::complex<double>> c;
  };
  PolynomialPotential V_;
  BasisSpec basis_;
  int dim_ = 0;
  int max_t_ = 0;
  int max_epow_ = 0;
  std::vector<int> seed_orders_;
  std::vector<Entry> entries_;  // dim*dim, row-major
};

BootstrapMatrix build_matrix(double E, const std::vector<double>& seeds,
                             const PolynomialPotential& V, const BasisSpec& basis);

double min_eigenvalue(const Eigen::MatrixXcd& M);

// PSD within tolerance: smallest eigenvalue >= -tol.
bool is_feasible(const BootstrapMatrix& M, double tol);

}  // namespace qmboot
