#include <doctest.h>

#include "hpt/errors.hpp"
#include "hpt/expression.hpp"
#include "hpt/gaussian_element.hpp"
#include "hpt/gaussian_space.hpp"
#include "hpt/polynomial.hpp"
#include "hpt/random.hpp"
#include "hpt/rational.hpp"
#include "oracles.hpp"

using namespace hpt;

namespace {

Polynomial P(std::vector<Rational> c) { return Polynomial(std::move(c)); }
const Polynomial X = Polynomial::x();

GaussianElement parse_g(std::string_view s) { return GaussianSpace::get(parse_expression(*gaussian_space(), s)); }

}  // namespace

TEST_CASE("rationals parse, print and reject zero denominators") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(to_string(parse_rational("-6/4")) == "-3/2");
  CHECK(to_string(parse_rational("10/5")) == "2");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK(factorial(0) == 1);
  CHECK(factorial(10) == 3628800);
}

TEST_CASE("poly_mul examples") {
  CHECK((X + P({1})) * (X - P({1})) == P({-1, 0, 1}));
  CHECK((Polynomial{} * P({1, 2, 3})).is_zero());
  CHECK(poly_mul(Polynomial::monomial(2, 1), Polynomial::monomial(3, 2)) == Polynomial::monomial(6, 3));
}

TEST_CASE("poly_derivative examples") {
  CHECK(poly_derivative(Polynomial::monomial(1, 3)) == Polynomial::monomial(3, 2));
  CHECK(poly_derivative(Polynomial::constant(5)).is_zero());
  CHECK(poly_derivative(P({0, -1, 1})) == P({-1, 2}));
}

TEST_CASE("polynomials are canonical") {
  CHECK(P({1, 0, 0}) == P({1}));
  CHECK(P({0, 0}).is_zero());
  CHECK(P({0, 0}).degree() == Polynomial::kZeroDegree);
  CHECK((X - X).is_zero());
  CHECK(P({Rational(-1, 2), 0, 1}).to_string() == "x^2 - 1/2");
  CHECK(Polynomial::monomial(-3, 1).to_string() == "-3*x");
  CHECK(Polynomial{}.to_string() == "0");
}

TEST_CASE("polynomial ring laws against pointwise evaluation") {
  Rng rng(11);
  const std::vector<Rational> points{0, 1, -2, Rational(1, 3), Rational(-5, 2), 7, 11, 13, -17, Rational(3, 7)};
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = random_polynomial(rng, 8), b = random_polynomial(rng, 8), c = random_polynomial(rng, 8);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    for (const auto& t : points) {
      CHECK(oracle::evaluate(a * b, t) == oracle::evaluate(a, t) * oracle::evaluate(b, t));
      CHECK(oracle::evaluate(a - b, t) == oracle::evaluate(a, t) - oracle::evaluate(b, t));
    }
    // product rule
    CHECK(poly_derivative(a * b) == poly_derivative(a) * b + a * poly_derivative(b));
  }
}

TEST_CASE("gauss_product examples") {
  const auto xe = GaussianElement{X, Polynomial::constant(1)};
  CHECK(gauss_product(xe, xe) == GaussianElement{X * X, Polynomial::monomial(2, 1)});
  const auto z = GaussianElement{P({1, 2}), P({0, 0, 3})};
  CHECK(gauss_product(z, GaussianElement::polynomial(Polynomial::constant(1))) == z);
  CHECK(gauss_product(GaussianElement::eta(), GaussianElement::eta()).is_zero());
}

TEST_CASE("gauss_product is graded commutative and associative") {
  Rng rng(5);
  const auto& g = *gaussian_space();
  for (int trial = 0; trial < 80; ++trial) {
    const auto u = GaussianSpace::get(g.random_homogeneous(rng, 8));
    const auto v = GaussianSpace::get(g.random_homogeneous(rng, 8));
    const auto w = GaussianSpace::get(g.random_homogeneous(rng, 8));
    const int sign = (*u.degree() * *v.degree()) % 2 == 0 ? 1 : -1;
    CHECK(gauss_product(u, v) == Rational(sign) * gauss_product(v, u));
    CHECK(gauss_product(gauss_product(u, v), w) == gauss_product(u, gauss_product(v, w)));
  }
}

TEST_CASE("gaussian element degrees and printing") {
  CHECK(GaussianElement::eta().degree() == -1);
  CHECK(GaussianElement::polynomial(X).degree() == 0);
  CHECK_FALSE(GaussianElement{X, X}.degree().has_value());
  CHECK_FALSE(GaussianElement{}.degree().has_value());
  CHECK(GaussianElement{X * X, Polynomial::monomial(2, 1)}.to_string() == "x^2 + 2*x*eta");
  CHECK(GaussianElement::eta_multiple(X - Polynomial::constant(1)).to_string() == "(x - 1)*eta");
  CHECK(GaussianElement::eta_multiple(Polynomial::constant(-1)).to_string() == "-eta");
  CHECK(GaussianElement{}.to_string() == "0");
}

TEST_CASE("expression parser") {
  CHECK(parse_g("x^2 - 1/2") == GaussianElement::polynomial(P({Rational(-1, 2), 0, 1})));
  CHECK(parse_g("(x-1)*eta") == GaussianElement::eta_multiple(X - Polynomial::constant(1)));
  CHECK(parse_g("eta*eta").is_zero());
  CHECK(parse_g("-(x+eta)^2") == GaussianElement{-(X * X), Polynomial::monomial(-2, 1)});
  CHECK(parse_g("3/4*x/3") == GaussianElement::polynomial(Polynomial::monomial(Rational(1, 4), 1)));
  CHECK(parse_g("  2 ") == GaussianElement::polynomial(Polynomial::constant(2)));
  CHECK(parse_g("x^0") == GaussianElement::polynomial(Polynomial::constant(1)));
}

TEST_CASE("expression parser reports byte offsets") {
  const auto& g = *gaussian_space();
  auto offset_of = [&](std::string_view s) -> std::size_t {
    try {
      parse_expression(g, s);
    } catch (const ParseError& e) {
      return e.offset();
    }
    return std::string_view::npos;
  };
  CHECK(offset_of("x +* 2") == 3);
  CHECK(offset_of("y") == 0);
  CHECK(offset_of("x + zeta") == 4);
  CHECK(offset_of("(x") == 2);
  CHECK(offset_of("x / x") != std::string_view::npos);
  CHECK(offset_of("x / 0") != std::string_view::npos);
  CHECK(offset_of("") == 0);
  CHECK(offset_of("x ) ") == 2);
}

TEST_CASE("formatting round-trips through the parser") {
  Rng rng(3);
  const auto& g = *gaussian_space();
  for (int trial = 0; trial < 50; ++trial) {
    const Element a = g.add(g.random_homogeneous(rng, 6), g.random_homogeneous(rng, 6));
    CHECK(g.equal(parse_expression(g, g.format(a)), a));
  }
}

TEST_CASE("seeded randomness is reproducible") {
  Rng a(99), b(99);
  for (int i = 0; i < 20; ++i) CHECK(random_polynomial(a, 5) == random_polynomial(b, 5));
  Rng c(1);
  for (int i = 0; i < 200; ++i) {
    const auto v = uniform_int(c, -3, 4);
    CHECK(v >= -3);
    CHECK(v <= 4);
    CHECK(random_coefficient(c, true) != 0);
  }
}
