#pragma once

#include <optional>
#include <span>

#include "dofib/poly.hpp"

namespace dofib::detail {

/// gcd of two integer-coefficient polynomials over the same ring whose
/// supports are both `support`. Images modulo word-size primes are computed by
/// evaluation and dense interpolation, then combined by CRT. The result is
/// primitive and certified by exact division; nullopt if no candidate passes.
std::optional<Poly> modular_gcd(const Poly& a, const Poly& b, std::span<const std::size_t> support);

}  // namespace dofib::detail
