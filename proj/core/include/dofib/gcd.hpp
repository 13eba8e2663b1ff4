#pragma once

#include <vector>

#include "dofib/poly.hpp"

namespace dofib {

/// Greatest common divisor, integer-primitive with positive leading
/// coefficient. gcd(0, 0) = 0 and gcd(p, 0) = primitive(p).
Poly gcd(const Poly& a, const Poly& b);

/// gcd of the coefficients of `p` viewed as a polynomial in `var`.
Poly content_in(const Poly& p, std::size_t var);

/// p = root^2 * squarefree, where squarefree has no repeated non-constant
/// factor. The rational constant of p stays in `squarefree`.
struct SquareSplit {
  Poly root;
  Poly squarefree;
};
SquareSplit extract_square(const Poly& p);

/// Factors f_1, f_2, ... with p = c * prod f_i^i (Yun), each f_i square-free
/// and pairwise coprime. Entries may be 1.
std::vector<Poly> squarefree_decomposition(const Poly& p);

/// Pairwise coprime, square-free, primitive polynomials whose products
/// recover the radical of every input up to constants. Sorted by text.
std::vector<Poly> coprime_base(const std::vector<Poly>& ps);

/// Sylvester resultant in `var`, computed by fraction-free elimination.
Poly resultant(const Poly& a, const Poly& b, std::size_t var);
/// (-1)^(n(n-1)/2) res(f, f') / lc(f).
Poly discriminant(const Poly& f, std::size_t var);

/// Pseudo-remainder of a by b in `var`.
Poly pseudo_remainder(const Poly& a, const Poly& b, std::size_t var);

}  // namespace dofib
