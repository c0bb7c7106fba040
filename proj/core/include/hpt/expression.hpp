#pragma once

#include <string_view>

#include "hpt/space.hpp"

namespace hpt {

/// Parses an element of `space`.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' integer)?
///   primary := integer | identifier | '(' expr ')'
///
/// Identifiers are the space's generators (`x` and `eta` for the Gaussian
/// space, basis names for finite-table spaces). Division is by nonzero
/// scalars only, which is how rationals such as `1/2` are written. A bare
/// scalar denotes that multiple of the unit.
///
/// Throws ParseError carrying the byte offset of the problem.
Element parse_expression(const Space& space, std::string_view text);

}  // namespace hpt
