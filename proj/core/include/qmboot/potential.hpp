#pragma once
#include <vector>

#include "qmboot/errors.hpp"

namespace qmboot {

// V(x) as a coefficient list, coeff[d] multiplying x^d. The Hamiltonian is
// always H = p^2/2 + V(x) with [x, p] = i and hbar = 1.
class PolynomialPotential {
 public:
  explicit PolynomialPotential(std::vector<double> coeff) : coeff_(std::move(coeff)) {
    while (!coeff_.empty() && coeff_.back() == 0.0) coeff_.pop_back();
    if (degree() < 2) throw InputError("potential must have degree >= 2");
    if (coeff_.back() <= 0.0) throw InputError("leading coefficient must be positive (confining)");
  }

  // g*x^2 + x^(2n), the anharmonic family. n >= 2; g of either sign.
  static PolynomialPotential anharmonic(double g, int n) {
    if (n < 2) throw InputError("anharmonic order n must be >= 2");
    std::vector<double> c(static_cast<std::size_t>(2 * n) + 1, 0.0);
    c[2] = g;
    c[static_cast<std::size_t>(2 * n)] = 1.0;
    return PolynomialPotential(std::move(c));
  }

  // g*x^2 with g > 0.
  static PolynomialPotential harmonic(double g) {
    if (g <= 0.0) throw InputError("harmonic potential needs g > 0");
    return PolynomialPotential({0.0, 0.0, g});
  }

  int degree() const { return static_cast<int>(coeff_.size()) - 1; }
  double coeff(int d) const {
    return (d >= 0 && d < static_cast<int>(coeff_.size())) ? coeff_[static_cast<std::size_t>(d)]
                                                           : 0.0;
  }
  const std::vector<double>& coefficients() const { return coeff_; }

  bool is_even() const {
    for (std::size_t d = 1; d < coeff_.size(); d += 2)
      if (coeff_[d] != 0.0) return false;
    return true;
  }

  // Free seed moments for the bootstrap: the even moments the recursion cannot
  // produce. <x^2>..<x^(deg-2)> for deg >= 4; the harmonic case still scans
  // <x^2> so that its search space matches the quartic one.
  std::vector<int> seed_orders() const {
    std::vector<int> s;
    for (int t = 2; t <= degree() - 2; t += 2) s.push_back(t);
    if (s.empty()) s.push_back(2);
    return s;
  }

  double eval(double x) const {
    double v = 0.0;
    for (std::size_t d = coeff_.size(); d-- > 0;) v = v * x + coeff_[d];
    return v;
  }

 private:
  std::vector<double> coeff_;
};

}  // namespace qmboot
