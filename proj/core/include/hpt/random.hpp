#pragma once

#include <cstdint>
#include <random>

#include "hpt/polynomial.hpp"
#include "hpt/rational.hpp"

namespace hpt {

// mt19937_64 output is specified bit-for-bit by the standard; the helpers
// below avoid <random> distributions, which are not, so seeded runs agree
// across standard libraries.
using Rng = std::mt19937_64;

inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<std::int64_t>(rng() % span);
}

/// Small integer or half-integer in [-3, 3], never zero when `nonzero`.
Rational random_coefficient(Rng& rng, bool nonzero = false);

/// Random polynomial of degree <= max_degree; nonzero.
Polynomial random_polynomial(Rng& rng, int max_degree);

}  // namespace hpt
