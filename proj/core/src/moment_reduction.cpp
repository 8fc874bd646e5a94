#include "qmboot/moment_reduction.hpp"

#include <sstream>

namespace qmboot {

EPoly& EPoly::operator+=(const EPoly& o) {
  if (o.c.size() > c.size()) c.resize(o.c.size());
  for (std::size_t k = 0; k < o.c.size(); ++k) c[k] += o.c[k];
  while (!c.empty() && c.back() == 0) c.pop_back();
  return *this;
}

EPoly EPoly::operator*(const Rational& s) const {
  EPoly r;
  if (s == 0) return r;
  r.c = c;
  for (auto& v : r.c) v *= s;
  return r;
}

EPoly EPoly::times_E() const {
  EPoly r;
  if (c.empty()) return r;
  r.c.reserve(c.size() + 1);
  r.c.push_back(Rational(0));
  r.c.insert(r.c.end(), c.begin(), c.end());
  return r;
}

double EPoly::eval(double E) const {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * E + to_double(c[k]);
  return v;
}

void MomentExpression::add(int t, const RatComplex& coeff, int epow) {
  if (coeff.is_zero()) return;
  EPolyC e;
  e.re.c.assign(static_cast<std::size_t>(epow) + 1, Rational(0));
  e.im.c = e.re.c;
  e.re.c.back() = coeff.re;
  e.im.c.back() = coeff.im;
  while (!e.re.c.empty() && e.re.c.back() == 0) e.re.c.pop_back();
  while (!e.im.c.empty() && e.im.c.back() == 0) e.im.c.pop_back();
  auto [it, inserted] = terms_.try_emplace(t, e);
  if (!inserted) {
    it->second += e;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void MomentExpression::add_scaled(const MomentExpression& o, const RatComplex& s) {
  if (s.is_zero()) return;
  for (const auto& [t, e] : o.terms_) {
    EPolyC scaled;
    // (re + i im) * (s.re + i s.im)
    scaled.re = e.re * s.re;
    scaled.re += e.im * (-s.im);
    scaled.im = e.re * s.im;
    scaled.im += e.im * s.re;
    if (scaled.is_zero()) continue;
    auto [it, inserted] = terms_.try_emplace(t, scaled);
    if (!inserted) {
      it->second += scaled;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
}

MomentExpression MomentExpression::times_E() const {
  MomentExpression r;
  for (const auto& [t, e] : terms_) {
    EPolyC shifted{e.re.times_E(), e.im.times_E()};
    r.terms_.emplace(t, std::move(shifted));
  }
  return r;
}

MomentExpression MomentExpression::operator+(const MomentExpression& o) const {
  MomentExpression r = *this;
  r.add_scaled(o, RatComplex::real(1));
  return r;
}

MomentExpression MomentExpression::operator-(const MomentExpression& o) const {
  MomentExpression r = *this;
  r.add_scaled(o, RatComplex::real(-1));
  return r;
}

MomentExpression MomentExpression::operator*(const RatComplex& s) const {
  MomentExpression r;
  r.add_scaled(*this, s);
  return r;
}

bool MomentExpression::is_real() const {
  for (const auto& [t, e] : terms_)
    if (!e.im.is_zero()) return false;
  return true;
}

bool MomentExpression::is_imag() const {
  for (const auto& [t, e] : terms_)
    if (!e.re.is_zero()) return false;
  return true;
}

int MomentExpression::max_epow() const {
  int k = 0;
  for (const auto& [t, e] : terms_)
    k = std::max({k, e.re.degree(), e.im.degree()});
  return k;
}

std::complex<double> MomentExpression::eval(double E, const std::vector<double>& moments) const {
  std::complex<double> v{0.0, 0.0};
  for (const auto& [t, e] : terms_) {
    double m = (t == 0) ? 1.0 : moments.at(static_cast<std::size_t>(t));
    v += std::complex<double>(e.re.eval(E) * m, e.im.eval(E) * m);
  }
  return v;
}

std::vector<CompiledTerm> MomentExpression::compile() const {
  std::vector<CompiledTerm> out;
  for (const auto& [t, e] : terms_) {
    int kmax = std::max(e.re.degree(), e.im.degree());
    for (int k = 0; k <= kmax; ++k) {
      double re = k <= e.re.degree() ? to_double(e.re.c[static_cast<std::size_t>(k)]) : 0.0;
      double im = k <= e.im.degree() ? to_double(e.im.c[static_cast<std::size_t>(k)]) : 0.0;
      if (re != 0.0 || im != 0.0) out.push_back({t, k, {re, im}});
    }
  }
  return out;
}

std::string MomentExpression::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, e] : terms_) {
    int kmax = std::max(e.re.degree(), e.im.degree());
    for (int k = 0; k <= kmax; ++k) {
      Rational re = k <= e.re.degree() ? e.re.c[static_cast<std::size_t>(k)] : Rational(0);
      Rational im = k <= e.im.degree() ? e.im.c[static_cast<std::size_t>(k)] : Rational(0);
      if (re == 0 && im == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << re.str() << (im >= 0 ? "+" : "") << im.str() << "i)";
      if (k > 0) os << "*E^" << k;
      if (t > 0) os << "*<x^" << t << ">";
    }
  }
  return os.str();
}

MomentExpression derive_recursion(const PolynomialPotential& V, int t) {
  if (t < 0) throw InputError("recursion index t must be >= 0");
  int D = V.degree();
  Rational vD = rational_from_double(V.coeff(D));
  if (vD == 0) throw InputError("degenerate leading coefficient");
  // coefficient of the top moment <x^(t-1+D)> is (8t + 4D) * v_D
  Rational lead = Rational(8 * t + 4 * D) * vD;
  MomentExpression top;
  if (t >= 3) {
    Rational c = Rational(BigInt(t) * (t - 1) * (t - 2)) / lead;
    top.add(t - 3, RatComplex::real(c), 0);
  }
  if (t >= 1) top.add(t - 1, RatComplex::real(Rational(8 * t) / lead), 1);
  for (int d = 1; d < D; ++d) {
    Rational vd = rational_from_double(V.coeff(d));
    if (vd == 0) continue;
    Rational c = -Rational(8 * t + 4 * d) * vd / lead;
    top.add(t - 1 + d, RatComplex::real(c), 0);
  }
  return top;
}

MomentReducer::MomentReducer(const PolynomialPotential& V) : V_(V) {
  for (int d = 0; d <= V.degree(); ++d) {
    double c = V.coeff(d);
    if (c != 0.0) V_op_.add_term(d, 0, RatComplex::real(rational_from_double(c)));
  }
}

const MomentExpression& MomentReducer::reduce(int a, int b) {
  if (a < 0 || b < 0) throw InputError("moment powers must be non-negative");
  auto it = cache_.find({a, b});
  if (it != cache_.end()) return it->second;

  MomentExpression r;
  if (b == 0) {
    r = MomentExpression::moment(a);
  } else if (b == 1) {
    // <x^a p> = (i a / 2) <x^(a-1)>, from <[H, x^(a+1)]> = 0
    if (a > 0) r.add(a - 1, RatComplex::imag(Rational(a) / 2), 0);
  } else {
    // <x^a p^b> = 2 E <x^a p^(b-2)> - 2 <x^a p^(b-2) V(x)>
    const MomentExpression lower = reduce(a, b - 2);  // copy: recursion may grow cache_
    OperatorPoly prod = normal_order(OperatorPoly::monomial(a, b - 2), V_op_);
    MomentExpression pv = reduce_poly(prod);
    r = lower.times_E() * RatComplex::real(2) - pv * RatComplex::real(2);
  }
  return cache_.emplace(std::make_pair(a, b), std::move(r)).first->second;
}

MomentExpression MomentReducer::reduce_poly(const OperatorPoly& op) {
  MomentExpression r;
  for (const auto& [k, c] : op.terms()) r.add_scaled(reduce(k.first, k.second), c);
  return r;
}

}  // namespace qmboot
