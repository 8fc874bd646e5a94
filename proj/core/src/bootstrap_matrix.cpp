#include "qmboot/bootstrap_matrix.hpp"

#include <cmath>

#include "qmboot/errors.hpp"
#include "qmboot/moment_reduction.hpp"

namespace qmboot {

MatrixEvaluator::MatrixEvaluator(const PolynomialPotential& V, const BasisSpec& basis)
    : V_(V), basis_(basis) {
  if (!V.is_even())
    throw InputError("moment closure with even seeds needs an even potential");
  auto ops = basis_operators(basis);
  dim_ = static_cast<int>(ops.size());
  seed_orders_ = V.seed_orders();

  MomentReducer reducer(V);
  entries_.resize(static_cast<std::size_t>(dim_) * dim_);
  for (int i = 0; i < dim_; ++i) {
    OperatorPoly oi_dag = adjoint(OperatorPoly::monomial(ops[i].xpow, ops[i].ppow));
    for (int j = 0; j < dim_; ++j) {
      OperatorPoly prod = normal_order(oi_dag, OperatorPoly::monomial(ops[j].xpow, ops[j].ppow));
      MomentExpression me = reducer.reduce_poly(prod);
      max_t_ = std::max(max_t_, me.max_moment());
      max_epow_ = std::max(max_epow_, me.max_epow());
      Entry e;
      for (const CompiledTerm& term : me.compile()) {
        e.t.push_back(term.t);
        e.k.push_back(term.k);
        e.c.push_back(term.c);
      }
      entries_[static_cast<std::size_t>(i) * dim_ + j] = std::move(e);
    }
  }
  max_t_ = std::max(max_t_, seed_orders_.back());
}

void MatrixEvaluator::moment_table(double E, const double* seeds, std::vector<double>& m) const {
  m.assign(static_cast<std::size_t>(max_t_) + 1, 0.0);
  m[0] = 1.0;
  for (std::size_t i = 0; i < seed_orders_.size(); ++i) {
    int t = seed_orders_[i];
    if (t <= max_t_) m[static_cast<std::size_t>(t)] = seeds[i];
  }
  const int D = V_.degree();
  int first_unknown = std::max(D, seed_orders_.back() + 2);
  for (int tt = first_unknown; tt <= max_t_; tt += 2) {
    int t = tt + 1 - D;  // recursion index producing <x^tt>
    double num = 0.0;
    if (t >= 3) num += static_cast<double>(t) * (t - 1) * (t - 2) * m[static_cast<std::size_t>(t - 3)];
    if (t >= 1) num += 8.0 * t * E * m[static_cast<std::size_t>(t - 1)];
    for (int d = 1; d < D; ++d) {
      double vd = V_.coeff(d);
      if (vd != 0.0) num -= (8.0 * t + 4.0 * d) * vd * m[static_cast<std::size_t>(t - 1 + d)];
    }
    m[static_cast<std::size_t>(tt)] = num / (4.0 * V_.coeff(D) * (2.0 * t + D));
  }
}

void MatrixEvaluator::eval(double E, const double* seeds, Eigen::MatrixXcd& M) const {
  thread_local std::vector<double> m;
  thread_local std::vector<double> epow;
  moment_table(E, seeds, m);
  epow.assign(static_cast<std::size_t>(max_epow_) + 1, 1.0);
  for (int k = 1; k <= max_epow_; ++k)
    epow[static_cast<std::size_t>(k)] = epow[static_cast<std::size_t>(k - 1)] * E;
  M.resize(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = i; j < dim_; ++j) {
      const Entry& e = entries_[static_cast<std::size_t>(i) * dim_ + j];
      std::complex<double> v{0.0, 0.0};
      for (std::size_t n = 0; n < e.c.size(); ++n)
        v += e.c[n] * (epow[e.k[n]] * m[static_cast<std::size_t>(e.t[n])]);
      M(i, j) = v;
      if (i != j) M(j, i) = std::conj(v);
    }
  }
}

Eigen::MatrixXcd MatrixEvaluator::eval(double E, const std::vector<double>& seeds) const {
  if (static_cast<int>(seeds.size()) != seed_count())
    throw InputError("seed count mismatch for this potential");
  Eigen::MatrixXcd M;
  eval(E, seeds.data(), M);
  return M;
}

Eigen::MatrixXcd MatrixEvaluator::eval_full(double E, const std::vector<double>& seeds) const {
  if (static_cast<int>(seeds.size()) != seed_count())
    throw InputError("seed count mismatch for this potential");
  std::vector<double> m;
  moment_table(E, seeds.data(), m);
  std::vector<double> epow(static_cast<std::size_t>(max_epow_) + 1, 1.0);
  for (int k = 1; k <= max_epow_; ++k)
    epow[static_cast<std::size_t>(k)] = epow[static_cast<std::size_t>(k - 1)] * E;
  Eigen::MatrixXcd M(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      const Entry& e = entries_[static_cast<std::size_t>(i) * dim_ + j];
      std::complex<double> v{0.0, 0.0};
      for (std::size_t n = 0; n < e.c.size(); ++n)
        v += e.c[n] * (epow[static_cast<std::size_t>(e.k[n])] * m[static_cast<std::size_t>(e.t[n])]);
      M(i, j) = v;
    }
  }
  return M;
}

double MatrixEvaluator::min_eig(double E, const double* seeds) const {
  thread_local Eigen::MatrixXcd M;
  eval(E, seeds, M);
  return min_eigenvalue(M);
}

BootstrapMatrix build_matrix(double E, const std::vector<double>& seeds,
                             const PolynomialPotential& V, const BasisSpec& basis) {
  if (!std::isfinite(E)) throw InputError("E must be finite");
  for (double s : seeds)
    if (!std::isfinite(s)) throw InputError("seed moments must be finite");
  MatrixEvaluator ev(V, basis);
  BootstrapMatrix M{ev.eval_full(E, seeds), E, seeds, V, basis};
  return M;
}

double min_eigenvalue(const Eigen::MatrixXcd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed to converge");
  return es.eigenvalues()(0);
}

bool is_feasible(const BootstrapMatrix& M, double tol) {
  return min_eigenvalue(M.entries) >= -tol;
}

}  // namespace qmboot
