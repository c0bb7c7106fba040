#include "hpt/gaussian_space.hpp"

#include "hpt/errors.hpp"

namespace hpt {

const GaussianElement& GaussianSpace::get(const Element& a) {
  const auto* g = std::get_if<GaussianElement>(&a);
  if (g == nullptr) throw SpaceMismatchError("expected an element of the gaussian space");
  return *g;
}

std::optional<Element> GaussianSpace::unit() const {
  return GaussianElement::polynomial(Polynomial::constant(1));
}

Element GaussianSpace::add(const Element& a, const Element& b) const { return get(a) + get(b); }

Element GaussianSpace::scale(const Rational& c, const Element& a) const { return c * get(a); }

Element GaussianSpace::differential(const Element& a) const { return gauss_d(get(a)); }

Element GaussianSpace::product(const Element& a, const Element& b) const { return gauss_product(get(a), get(b)); }

Rational GaussianSpace::expectation(const Element& a) const { return gauss_expectation(get(a)); }

bool GaussianSpace::is_zero(const Element& a) const { return get(a).is_zero(); }

std::vector<std::pair<int, Element>> GaussianSpace::homogeneous_parts(const Element& a) const {
  const auto& g = get(a);
  std::vector<std::pair<int, Element>> out;
  if (!g.q.is_zero()) out.emplace_back(GaussianElement::kEtaDegree, GaussianElement::eta_multiple(g.q));
  if (!g.p.is_zero()) out.emplace_back(0, GaussianElement::polynomial(g.p));
  return out;
}

std::string GaussianSpace::format(const Element& a) const { return get(a).to_string(); }

std::optional<Element> GaussianSpace::generator(std::string_view name) const {
  if (name == "x") return GaussianElement::polynomial(Polynomial::x());
  if (name == "eta") return GaussianElement::eta();
  return std::nullopt;
}

Element GaussianSpace::random_homogeneous(Rng& rng, int max_poly_degree) const {
  Polynomial poly = random_polynomial(rng, max_poly_degree);
  if (uniform_int(rng, 0, 1) == 0) return GaussianElement::polynomial(std::move(poly));
  return GaussianElement::eta_multiple(std::move(poly));
}

ValidationReport GaussianSpace::check_axioms(std::uint64_t seed) const {
  constexpr int kMaxDegree = 10;
  constexpr int kTrials = 40;
  ValidationReport report;
  auto fail = [&](std::string identity, std::string witness) {
    report.violations.push_back({std::move(identity), std::move(witness)});
  };
  for (std::size_t k = 0; k <= kMaxDegree; ++k) {
    const auto q = GaussianElement::eta_multiple(Polynomial::monomial(1, k));
    const Rational e = gauss_expectation(gauss_d(q));
    ++report.checks;
    if (e != 0) fail("E∘d = 0", "E(d(" + q.to_string() + ")) = " + to_string(e));
  }
  Rng rng(seed);
  const GaussianElement one = GaussianElement::polynomial(Polynomial::constant(1));
  for (int trial = 0; trial < kTrials; ++trial) {
    const GaussianElement a = get(random_homogeneous(rng, kMaxDegree));
    const GaussianElement b = get(random_homogeneous(rng, kMaxDegree));
    const GaussianElement c = get(random_homogeneous(rng, kMaxDegree));
    const auto da = gauss_d(a);
    report.checks += 6;
    if (!gauss_d(da).is_zero()) fail("d∘d = 0", "d(d(" + a.to_string() + ")) ≠ 0");
    if (gauss_expectation(da) != 0) fail("E∘d = 0", "E(d(" + a.to_string() + ")) ≠ 0");
    if (a.degree() != 0 && gauss_expectation(a) != 0) fail("E vanishes off degree 0", a.to_string());
    const int sign = (*a.degree() * *b.degree()) % 2 == 0 ? 1 : -1;
    if (gauss_product(a, b) != Rational(sign) * gauss_product(b, a))
      fail("graded commutativity", a.to_string() + " and " + b.to_string());
    if (gauss_product(gauss_product(a, b), c) != gauss_product(a, gauss_product(b, c)))
      fail("associativity", a.to_string() + ", " + b.to_string() + ", " + c.to_string());
    if (gauss_product(one, a) != a) fail("unit law", a.to_string());
  }
  return report;
}

SpaceHandle gaussian_space() {
  static const SpaceHandle space = std::make_shared<const GaussianSpace>();
  return space;
}

GaussianElement gauss_d(const GaussianElement& z) {
  return GaussianElement::polynomial(poly_derivative(z.q) - Polynomial::x() * z.q);
}

Rational homology_reduce(const Polynomial& p) {
  const auto& coeffs = p.coefficients();
  // classes[n] = c with [x^n] = c [1]
  std::vector<Rational> classes(coeffs.size());
  Rational sum = 0;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    if (n == 0) {
      classes[n] = 1;
    } else if (n == 1) {
      classes[n] = 0;
    } else {
      classes[n] = classes[n - 2] * static_cast<unsigned long>(n - 1);
    }
    if (coeffs[n] != 0) sum += coeffs[n] * classes[n];
  }
  return sum;
}

Rational gauss_expectation(const GaussianElement& z) { return homology_reduce(z.p); }

GaussianElement d2_closed_form(const GaussianElement& u, const GaussianElement& v) {
  const Polynomial& p = u.p;
  const Polynomial& q = u.q;
  const Polynomial& r = v.p;
  const Polynomial& s = v.q;
  const Polynomial x = Polynomial::x();
  Polynomial even = poly_derivative(p) * s - poly_derivative(r) * q;
  Polynomial odd = (poly_derivative(q) - x * q) * s - (poly_derivative(s) - x * s) * q;
  return {std::move(even), std::move(odd)};
}

bool moment_sequence_equal(const Polynomial& f, const Polynomial& g, std::size_t max_power, const Limits& limits) {
  if (max_power == 0) throw SizeLimitError("moment_sequence_equal needs at least one power");
  if (max_power > limits.moment_cap)
    throw SizeLimitError("power bound " + std::to_string(max_power) + " exceeds moment cap " +
                         std::to_string(limits.moment_cap));
  Polynomial fp = f;
  Polynomial gp = g;
  for (std::size_t n = 1; n <= max_power; ++n) {
    if (homology_reduce(fp) != homology_reduce(gp)) return false;
    fp = fp * f;
    gp = gp * g;
  }
  return true;
}

}  // namespace hpt
