#include "qmboot/operator_algebra.hpp"

#include <sstream>

namespace qmboot {
namespace {

// p^b x^c = sum_j (-i)^j j! C(b,j) C(c,j) x^(c-j) p^(b-j), exact integers.
void reorder_p_x(int b, int c, const RatComplex& scale, OperatorPoly& out) {
  BigInt binom_b = 1, binom_c = 1, fact = 1;
  int jmax = std::min(b, c);
  for (int j = 0; j <= jmax; ++j) {
    if (j > 0) {
      binom_b = binom_b * (b - j + 1) / j;
      binom_c = binom_c * (c - j + 1) / j;
      fact *= j;
    }
    RatComplex coeff = RatComplex::i_pow(-j) * Rational(fact * binom_b * binom_c);
    out.add_term(c - j, b - j, coeff * scale);
  }
}

}  // namespace

OperatorPoly OperatorPoly::monomial(int xpow, int ppow, RatComplex coeff) {
  OperatorPoly r;
  r.add_term(xpow, ppow, coeff);
  return r;
}

RatComplex OperatorPoly::coeff(int xpow, int ppow) const {
  auto it = terms_.find({xpow, ppow});
  return it == terms_.end() ? RatComplex{} : it->second;
}

void OperatorPoly::add_term(int xpow, int ppow, const RatComplex& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace({xpow, ppow}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

OperatorPoly OperatorPoly::operator+(const OperatorPoly& o) const {
  OperatorPoly r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k.first, k.second, c);
  return r;
}

OperatorPoly OperatorPoly::operator-(const OperatorPoly& o) const {
  OperatorPoly r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k.first, k.second, -c);
  return r;
}

OperatorPoly OperatorPoly::operator*(const RatComplex& s) const {
  OperatorPoly r;
  for (const auto& [k, c] : terms_) r.add_term(k.first, k.second, c * s);
  return r;
}

OperatorPoly normal_order(const OperatorPoly& left, const OperatorPoly& right) {
  OperatorPoly out;
  for (const auto& [kl, cl] : left.terms()) {
    for (const auto& [kr, cr] : right.terms()) {
      // (x^a p^b)(x^c p^d) = x^a (p^b x^c) p^d
      OperatorPoly mid;
      reorder_p_x(kl.second, kr.first, cl * cr, mid);
      for (const auto& [km, cm] : mid.terms())
        out.add_term(kl.first + km.first, km.second + kr.second, cm);
    }
  }
  return out;
}

OperatorPoly adjoint(const OperatorPoly& op) {
  OperatorPoly out;
  for (const auto& [k, c] : op.terms()) {
    // (c x^a p^b)^dag = conj(c) p^b x^a
    OperatorPoly mid;
    reorder_p_x(k.second, k.first, c.conj(), mid);
    for (const auto& [km, cm] : mid.terms()) out.add_term(km.first, km.second, cm);
  }
  return out;
}

std::string OperatorPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.re.str() << (c.im >= 0 ? "+" : "") << c.im.str() << "i)";
    if (k.first) os << "*x^" << k.first;
    if (k.second) os << "*p^" << k.second;
  }
  return os.str();
}

}  // namespace qmboot
