#pragma once

#include <string_view>

#include "dofib/ratfunc.hpp"

namespace dofib {

/// Parses an expression over `ring`: integer literals, ring symbols,
/// + - * / ^ and parentheses. Exponents are integer literals (negative
/// exponents need a rational base). Unknown symbols are a ParseError.
RatFunc parse_ratfunc(std::string_view text, const RingPtr& ring);

/// As parse_ratfunc, but the result must be a polynomial.
Poly parse_poly(std::string_view text, const RingPtr& ring);

/// Parses a rational literal such as "3", "-2/5".
BigRat parse_rational(std::string_view text);

}  // namespace dofib
