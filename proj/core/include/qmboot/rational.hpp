#pragma once
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>

namespace qmboot {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact conversion: every finite double is a dyadic rational m * 2^e.
inline Rational rational_from_double(double v) {
  if (v == 0.0) return Rational(0);
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value has no rational form");
  int exp = 0;
  double mant = std::frexp(v, &exp);
  auto m = static_cast<long long>(std::ldexp(mant, 53));  // integer, |m| < 2^53
  exp -= 53;
  Rational r(m);
  if (exp > 0) {
    r *= Rational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rational(BigInt(1) << -exp);
  }
  return r;
}

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

// Complex number with exact rational parts. std::complex over a non-float type
// is undefined behaviour, hence the hand-rolled pair.
struct RatComplex {
  Rational re{0};
  Rational im{0};

  RatComplex() = default;
  RatComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  static RatComplex real(Rational r) { return {std::move(r), Rational(0)}; }
  static RatComplex imag(Rational i) { return {Rational(0), std::move(i)}; }
  static RatComplex i_pow(int j) {
    // i^j for the reordering formula; (-i)^j is i_pow(-j mod 4)
    switch (((j % 4) + 4) % 4) {
      case 0: return real(1);
      case 1: return imag(1);
      case 2: return real(-1);
      default: return imag(-1);
    }
  }

  bool is_zero() const { return re == 0 && im == 0; }
  RatComplex conj() const { return {re, -im}; }

  RatComplex operator-() const { return {-re, -im}; }
  RatComplex& operator+=(const RatComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  RatComplex& operator-=(const RatComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend RatComplex operator+(RatComplex a, const RatComplex& b) { return a += b; }
  friend RatComplex operator-(RatComplex a, const RatComplex& b) { return a -= b; }
  friend RatComplex operator*(const RatComplex& a, const RatComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend RatComplex operator*(const RatComplex& a, const Rational& s) {
    return {a.re * s, a.im * s};
  }
  friend bool operator==(const RatComplex& a, const RatComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
};

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace qmboot
