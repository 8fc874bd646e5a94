#pragma once
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "qmboot/operator_algebra.hpp"
#include "qmboot/potential.hpp"

namespace qmboot {

// Polynomial in the energy E with exact rational coefficients.
struct EPoly {
  std::vector<Rational> c;  // c[k] * E^k, no trailing zeros

  static EPoly constant(Rational v) {
    EPoly p;
    if (v != 0) p.c.push_back(std::move(v));
    return p;
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }

  EPoly& operator+=(const EPoly& o);
  EPoly operator*(const Rational& s) const;
  EPoly times_E() const;  // multiply by E
  double eval(double E) const;
  bool operator==(const EPoly& o) const { return c == o.c; }
};

struct EPolyC {
  EPoly re, im;
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  EPolyC& operator+=(const EPolyC& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  bool operator==(const EPolyC& o) const { return re == o.re && im == o.im; }
};

// One term of a compiled expression: c * E^k * <x^t>.
struct CompiledTerm {
  int t = 0;
  int k = 0;
  std::complex<double> c;
};

// Affine form  sum_t coeff_t(E) * <x^t>  with <x^0> = 1; the t = 0 slot is the
// constant term. Exact until compile()/eval().
class MomentExpression {
 public:
  MomentExpression() = default;
  static MomentExpression moment(int t) {
    MomentExpression m;
    m.add(t, RatComplex::real(1), 0);
    return m;
  }

  void add(int t, const RatComplex& coeff, int epow);
  void add_scaled(const MomentExpression& o, const RatComplex& scale);
  MomentExpression times_E() const;
  MomentExpression operator+(const MomentExpression& o) const;
  MomentExpression operator-(const MomentExpression& o) const;
  MomentExpression operator*(const RatComplex& s) const;

  bool is_zero() const { return terms_.empty(); }
  bool is_real() const;
  bool is_imag() const;  // purely imaginary (or zero)
  int max_moment() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
  int max_epow() const;
  const std::map<int, EPolyC>& terms() const { return terms_; }

  bool operator==(const MomentExpression& o) const { return terms_ == o.terms_; }

  // Evaluate against a position-moment table; moments[t] must cover max_moment().
  std::complex<double> eval(double E, const std::vector<double>& moments) const;

  std::vector<CompiledTerm> compile() const;
  std::string str() const;  // canonical text for the reductions dump

 private:
  std::map<int, EPolyC> terms_;
};

// Solve the moment recursion
//   t(t-1)(t-2)<x^(t-3)> - 8t<x^(t-1)V> + 8tE<x^(t-1)> - 4<x^t V'> = 0
// for its highest moment <x^(t-1+deg V)>, returned in terms of lower moments
// and E. Exact in the (dyadic, from double) potential coefficients.
MomentExpression derive_recursion(const PolynomialPotential& V, int t);

// Reduces <x^a p^b> to position moments and E for a fixed potential, caching
// every (a, b) pair. Read-only after warm-up; build single-threaded.
class MomentReducer {
 public:
  explicit MomentReducer(const PolynomialPotential& V);

  const MomentExpression& reduce(int a, int b);
  MomentExpression reduce_poly(const OperatorPoly& op);
  const PolynomialPotential& potential() const { return V_; }

 private:
  PolynomialPotential V_;
  OperatorPoly V_op_;
  std::map<std::pair<int, int>, MomentExpression> cache_;
};

}  // namespace qmboot
