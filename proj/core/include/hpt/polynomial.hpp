#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hpt/rational.hpp"

namespace hpt {

/// Univariate polynomial in x with exact coefficients, stored densely by
/// exponent. Trailing zeros are always stripped, so two polynomials are equal
/// iff their coefficient vectors are.
class Polynomial {
 public:
  static constexpr int kZeroDegree = -1;

  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coefficients);

  static Polynomial constant(const Rational& c);
  static Polynomial monomial(const Rational& c, std::size_t exponent);
  static Polynomial x() { return monomial(1, 1); }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  // kZeroDegree for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }
  Rational coefficient(std::size_t exponent) const;
  bool is_monomial() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  /// Descending powers, e.g. `x^2 - 1/2`, `-3*x`, `0`.
  std::string to_string() const;

 private:
  void normalize();
  std::vector<Rational> coeffs_;
};

Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
Polynomial poly_derivative(const Polynomial& a);
Polynomial pow(const Polynomial& base, unsigned exponent);

}  // namespace hpt
