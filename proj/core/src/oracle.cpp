#include "qmboot/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "qmboot/errors.hpp"

namespace qmboot {

namespace {

// H in the size-N eigenbasis of p^2/2 + omega^2 x^2 / 2. Position is the
// usual tridiagonal ladder matrix; p^2 comes from (omega/2)(2N+1 - a^2 -
// a^dag^2) so no numerical differentiation is involved anywhere.
Eigen::MatrixXd hamiltonian(const PolynomialPotential& V, int N, double omega) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(N, N);
  for (int j = 0; j + 1 < N; ++j) {
    double v = std::sqrt((j + 1) / (2.0 * omega));
    X(j, j + 1) = v;
    X(j + 1, j) = v;
  }
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
  for (int j = 0; j < N; ++j) H(j, j) = 0.5 * omega * (j + 0.5);
  for (int j = 0; j + 2 < N; ++j) {
    double v = -0.25 * omega * std::sqrt(static_cast<double>(j + 1) * (j + 2));
    H(j, j + 2) = v;
    H(j + 2, j) = v;
  }
  Eigen::MatrixXd Xpow = Eigen::MatrixXd::Identity(N, N);
  for (int d = 1; d <= V.degree(); ++d) {
    Xpow = Xpow * X;
    double c = V.coeff(d);
    if (c != 0.0) H += c * Xpow;
  }
  return H;
}

// Energy of the frequency-omega Gaussian trial state. Minimizing it matches
// the basis length scale to the well; a mismatched scale makes the x^deg
// entries grow so fast with N that the 1e-8 doubling test never passes (the
// octic already fails at omega = 1).
double gaussian_energy(const PolynomialPotential& V, double omega) {
  double E = 0.25 * omega;
  for (int d = 2; d <= V.degree(); d += 2) {
    double c = V.coeff(d);
    if (c == 0.0) continue;
    double mom = 1.0;  // (d-1)!!
    for (int j = 3; j < d; j += 2) mom *= j;
    E += c * mom / std::pow(2 * omega, d / 2);
  }
  return E;
}

double auto_omega(const PolynomialPotential& V) {
  double a = 0.05, b = 200.0;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = gaussian_energy(V, c), fd = gaussian_energy(V, d);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = gaussian_energy(V, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = gaussian_energy(V, d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

OracleResult diagonalize(const PolynomialPotential& V, int k, const BasisConfig& cfg) {
  if (k < 1) throw InputError("need at least one eigenvalue");
  if (!(cfg.omega_ref >= 0))
    throw InputError("reference frequency must be positive (or 0 to choose automatically)");
  if (cfg.size < 10) throw InputError("starting basis size must be at least 10");
  double omega = cfg.omega_ref > 0 ? cfg.omega_ref : auto_omega(V);

  constexpr int kMaxSize = 2048;
  constexpr double kConvTol = 1e-8;
  int N = cfg.size;
  while (N < 4 * k) N *= 2;

  std::vector<double> prev;
  for (; N <= kMaxSize; N *= 2) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian(V, N, omega),
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("oracle eigensolver failed");
    std::vector<double> cur(es.eigenvalues().data(), es.eigenvalues().data() + k);
    if (!prev.empty()) {
      double worst = 0.0;
      for (int i = 0; i < k; ++i) worst = std::max(worst, std::abs(cur[i] - prev[i]));
      if (worst < kConvTol) return {cur, N};
    }
    prev = std::move(cur);
  }
  throw NumericalError("oracle did not converge by basis size 2048");
}

}  // namespace qmboot
