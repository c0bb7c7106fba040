#pragma once

#include <cstddef>

#include "hpt/gaussian_element.hpp"
#include "hpt/limits.hpp"
#include "hpt/space.hpp"

namespace hpt {

/// The polynomial-eta complex: V = Q[x] + Q[x] eta with d(p + q eta) = q' - x q
/// and the standard Gaussian expectation on the polynomial part. Homology is
/// one-dimensional, spanned by the class of 1, and the expectation is
/// computed through that class rather than by integration.
class GaussianSpace final : public Space {
 public:
  Backend backend() const noexcept override { return Backend::Gaussian; }
  std::string name() const override { return "gaussian"; }

  Element zero() const override { return GaussianElement{}; }
  std::optional<Element> unit() const override;
  Element add(const Element& a, const Element& b) const override;
  Element scale(const Rational& c, const Element& a) const override;
  Element differential(const Element& a) const override;
  Element product(const Element& a, const Element& b) const override;
  Rational expectation(const Element& a) const override;
  bool is_zero(const Element& a) const override;
  std::vector<std::pair<int, Element>> homogeneous_parts(const Element& a) const override;
  std::string format(const Element& a) const override;
  std::optional<Element> generator(std::string_view name) const override;
  Element random_homogeneous(Rng& rng, int max_poly_degree) const override;

  /// Randomized axiom sampling (polynomial degree <= 10) plus the chain-map
  /// identity E(q' - x q) = 0 replayed on every monomial q = x^k, k <= 10.
  ValidationReport check_axioms(std::uint64_t seed) const override;

  static const GaussianElement& get(const Element& a);
};

SpaceHandle gaussian_space();

GaussianElement gauss_d(const GaussianElement& z);

/// The scalar c with [p] = c [1] in homology, using [x^n] = (n-1)[x^(n-2)],
/// [x] = 0, [1] = 1.
Rational homology_reduce(const Polynomial& p);

/// homology_reduce of the polynomial part; the eta part has expectation zero.
Rational gauss_expectation(const GaussianElement& z);

/// The second transported component written as a bracket:
///   p' s - r' q + ((q' - x q) s - (s' - x s) q) eta
/// for u = p + q eta, v = r + s eta.
GaussianElement d2_closed_form(const GaussianElement& u, const GaussianElement& v);

/// Bounded check of E(f^n) = E(g^n) for 1 <= n <= max_power. A true answer
/// is only evidence, not proof, that 1 -> f and 1 -> g are homotopic.
bool moment_sequence_equal(const Polynomial& f, const Polynomial& g, std::size_t max_power,
                           const Limits& limits = {});

}  // namespace hpt
