#include "hpt/gaussian_element.hpp"

namespace hpt {

std::optional<int> GaussianElement::degree() const noexcept {
  if (!p.is_zero() && q.is_zero()) return 0;
  if (p.is_zero() && !q.is_zero()) return kEtaDegree;
  return std::nullopt;
}

GaussianElement gauss_product(const GaussianElement& u, const GaussianElement& v) {
  return {u.p * v.p, u.p * v.q + u.q * v.p};
}

namespace {

std::string eta_term(const Polynomial& q, bool leading) {
  std::string out;
  if (q.is_monomial()) {
    const int k = q.degree();
    const Rational c = q.coefficient(static_cast<std::size_t>(k));
    const Rational mag = abs(c);
    if (leading) {
      if (c < 0) out += '-';
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (mag != 1) out += to_string(mag) + "*";
    if (k >= 1) out += k == 1 ? "x*" : "x^" + std::to_string(k) + "*";
    out += "eta";
    return out;
  }
  out = leading ? "" : " + ";
  return out + "(" + q.to_string() + ")*eta";
}

}  // namespace

std::string GaussianElement::to_string() const {
  if (is_zero()) return "0";
  if (q.is_zero()) return p.to_string();
  if (p.is_zero()) return eta_term(q, true);
  return p.to_string() + eta_term(q, false);
}

}  // namespace hpt
