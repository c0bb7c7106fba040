#include "hpt/random.hpp"

#include <vector>

namespace hpt {

Rational random_coefficient(Rng& rng, bool nonzero) {
  for (;;) {
    const auto num = uniform_int(rng, -3, 3);
    const auto den = uniform_int(rng, 0, 3) == 0 ? 2 : 1;
    if (nonzero && num == 0) continue;
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
}

Polynomial random_polynomial(Rng& rng, int max_degree) {
  for (;;) {
    const auto degree = uniform_int(rng, 0, max_degree);
    std::vector<Rational> coeffs(static_cast<std::size_t>(degree) + 1);
    for (auto& c : coeffs) c = random_coefficient(rng);
    Polynomial poly(std::move(coeffs));
    if (!poly.is_zero()) return poly;
  }
}

}  // namespace hpt
