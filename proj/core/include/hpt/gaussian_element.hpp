#pragma once

#include <optional>
#include <string>

#include "hpt/polynomial.hpp"

namespace hpt {

/// p + q*eta in the free graded-commutative algebra on x (degree 0) and
/// eta (degree -1). eta*eta = 0 is built into the representation.
struct GaussianElement {
  Polynomial p;  // degree 0
  Polynomial q;  // coefficient of eta, degree -1

  static constexpr int kEtaDegree = -1;

  static GaussianElement polynomial(Polynomial p) { return {std::move(p), {}}; }
  static GaussianElement eta_multiple(Polynomial q) { return {{}, std::move(q)}; }
  static GaussianElement eta() { return eta_multiple(Polynomial::constant(1)); }

  bool is_zero() const noexcept { return p.is_zero() && q.is_zero(); }
  bool is_homogeneous() const noexcept { return p.is_zero() || q.is_zero(); }
  /// nullopt for zero and for mixed elements.
  std::optional<int> degree() const noexcept;

  GaussianElement& operator+=(const GaussianElement& o) {
    p += o.p;
    q += o.q;
    return *this;
  }
  GaussianElement& operator-=(const GaussianElement& o) {
    p -= o.p;
    q -= o.q;
    return *this;
  }
  friend GaussianElement operator+(GaussianElement a, const GaussianElement& b) { return a += b; }
  friend GaussianElement operator-(GaussianElement a, const GaussianElement& b) { return a -= b; }
  friend GaussianElement operator*(const Rational& c, const GaussianElement& a) {
    return {c * a.p, c * a.q};
  }
  friend bool operator==(const GaussianElement&, const GaussianElement&) = default;

  /// `x^2 + 2*x*eta`, `(x - 1)*eta`, `-eta`, `0`.
  std::string to_string() const;
};

/// (p + q eta)(r + s eta) = pr + (ps + qr) eta.
GaussianElement gauss_product(const GaussianElement& u, const GaussianElement& v);

}  // namespace hpt
