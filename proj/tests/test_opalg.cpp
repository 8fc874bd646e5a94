#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmboot/operator_algebra.hpp"

using namespace qmboot;

namespace {

OperatorPoly xop(int n = 1) { return OperatorPoly::monomial(n, 0); }
OperatorPoly pop(int n = 1) { return OperatorPoly::monomial(0, n); }

}  // namespace

TEST_CASE("canonical commutator [x, p] = i") {
  OperatorPoly c = commutator(xop(), pop());
  CHECK(c.coeff(0, 0) == RatComplex::imag(1));
  CHECK(c.terms().size() == 1);
}

TEST_CASE("single swap p x = x p - i") {
  OperatorPoly r = normal_order(pop(), xop());
  CHECK(r.coeff(1, 1) == RatComplex::real(1));
  CHECK(r.coeff(0, 0) == RatComplex::imag(-1));
  CHECK(r.terms().size() == 2);
}

// Reference orderings computed with an independent implementation that peels
// one p at a time through the x string instead of using the closed-form
// binomial sum.
TEST_CASE("normal ordering matches the swap-by-swap reference") {
  struct Term {
    int x, p;
    long long re, im;
  };
  struct Case {
    int b, c;  // p^b x^c
    std::vector<Term> terms;
  };
  const Case cases[] = {
      {2, 2, {{0, 0, -2, 0}, {1, 1, 0, -4}, {2, 2, 1, 0}}},
      {3, 3, {{0, 0, 0, 6}, {1, 1, -18, 0}, {2, 2, 0, -9}, {3, 3, 1, 0}}},
      {3, 2, {{0, 1, -6, 0}, {1, 2, 0, -6}, {2, 3, 1, 0}}},
      {1, 4, {{3, 0, 0, -4}, {4, 1, 1, 0}}},
  };
  for (const auto& cs : cases) {
    CAPTURE(cs.b);
    CAPTURE(cs.c);
    OperatorPoly r = normal_order(pop(cs.b), xop(cs.c));
    CHECK(r.terms().size() == cs.terms.size());
    for (const auto& t : cs.terms)
      CHECK(r.coeff(t.x, t.p) == RatComplex(Rational(t.re), Rational(t.im)));
  }
}

TEST_CASE("adjoint reverses and conjugates") {
  // (x^2 p)^dag = p x^2 = x^2 p - 2i x
  OperatorPoly a = adjoint(OperatorPoly::monomial(2, 1));
  CHECK(a.coeff(2, 1) == RatComplex::real(1));
  CHECK(a.coeff(1, 0) == RatComplex::imag(-2));

  // (i x p)^dag = -i p x = -i x p - 1
  OperatorPoly b = adjoint(OperatorPoly::monomial(1, 1, RatComplex::imag(1)));
  CHECK(b.coeff(1, 1) == RatComplex::imag(-1));
  CHECK(b.coeff(0, 0) == RatComplex::real(-1));
}

TEST_CASE("adjoint is an involution on random-ish polys") {
  OperatorPoly op;
  op.add_term(3, 2, RatComplex(Rational(2, 3), Rational(-1, 7)));
  op.add_term(0, 3, RatComplex::imag(5));
  op.add_term(4, 0, RatComplex::real(-2));
  op.add_term(1, 1, RatComplex(Rational(1), Rational(1)));
  CHECK(adjoint(adjoint(op)) == op);
}

TEST_CASE("a Hamiltonian-shaped operator is self-adjoint") {
  // H = p^2/2 + x^2 + x^4
  OperatorPoly H = pop(2) * RatComplex::real(Rational(1, 2)) + xop(2) + xop(4);
  CHECK(adjoint(H) == H);
  // [H, x] = -i p
  OperatorPoly c = commutator(H, xop());
  CHECK(c.coeff(0, 1) == RatComplex::imag(-1));
  CHECK(c.terms().size() == 1);
}

TEST_CASE("product respects associativity") {
  OperatorPoly a = xop(2) + pop(1) * RatComplex::imag(1);
  OperatorPoly b = pop(2) - xop(1);
  OperatorPoly c = xop(1) + pop(1);
  CHECK(normal_order(normal_order(a, b), c) == normal_order(a, normal_order(b, c)));
}

TEST_CASE("cancellation empties the term map") {
  OperatorPoly op = xop(2);
  op.add_term(2, 0, RatComplex::real(-1));
  CHECK(op.is_zero());
  CHECK((xop(1) - xop(1)).is_zero());
  CHECK(commutator(xop(2), xop(5)).is_zero());
  CHECK(commutator(pop(1), pop(3)).is_zero());
}

TEST_CASE("coeff on a missing term is zero") {
  CHECK(xop(2).coeff(1, 1).is_zero());
  CHECK(OperatorPoly::zero().is_zero());
  CHECK(OperatorPoly::identity().coeff(0, 0) == RatComplex::real(1));
}
