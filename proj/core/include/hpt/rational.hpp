#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hpt {

/// Exact scalar. `mpq_class` keeps values canonical (reduced, positive
/// denominator, zero as 0/1) after every arithmetic operation.
using Rational = mpq_class;

/// Parses `a`, `-a` or `a/b` (decimal integers, b != 0).
Rational parse_rational(std::string_view text);

/// `a/b`, with `/b` omitted when the denominator is one.
std::string to_string(const Rational& value);

Rational factorial(unsigned n);

}  // namespace hpt
