#pragma once
#include <map>
#include <string>
#include <utility>

#include "qmboot/rational.hpp"

namespace qmboot {

// One normal-ordered term coeff * x^xpow * p^ppow (all x left of all p).
struct Monomial {
  int xpow = 0;
  int ppow = 0;
  RatComplex coeff;
};

// Finite sum of normal-ordered monomials with exact complex-rational
// coefficients. Multiplication re-normal-orders via p^b x^c =
// sum_j (-i)^j j! C(b,j) C(c,j) x^(c-j) p^(b-j).
class OperatorPoly {
 public:
  using Key = std::pair<int, int>;  // (xpow, ppow)
  using TermMap = std::map<Key, RatComplex>;

  OperatorPoly() = default;
  static OperatorPoly zero() { return {}; }
  static OperatorPoly identity() { return monomial(0, 0, RatComplex::real(1)); }
  static OperatorPoly monomial(int xpow, int ppow, RatComplex coeff = RatComplex::real(1));

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  RatComplex coeff(int xpow, int ppow) const;

  void add_term(int xpow, int ppow, const RatComplex& c);

  OperatorPoly operator+(const OperatorPoly& o) const;
  OperatorPoly operator-(const OperatorPoly& o) const;
  OperatorPoly operator*(const RatComplex& s) const;

  friend bool operator==(const OperatorPoly& a, const OperatorPoly& b) {
    return a.terms_ == b.terms_;
  }

  std::string str() const;  // canonical text, for diagnostics and golden files

 private:
  TermMap terms_;
};

// Product with re-normal-ordering; exact.
OperatorPoly normal_order(const OperatorPoly& left, const OperatorPoly& right);

// Hermitian conjugate: conjugate coefficients, reverse each monomial to
// p^b x^a, then re-normal-order.
OperatorPoly adjoint(const OperatorPoly& op);

inline OperatorPoly commutator(const OperatorPoly& a, const OperatorPoly& b) {
  return normal_order(a, b) - normal_order(b, a);
}

}  // namespace qmboot
