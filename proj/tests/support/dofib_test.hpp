#pragma once

#include <random>
#include <string>

#include "dofib/parse.hpp"
#include "dofib/ratfunc.hpp"

namespace dofib::testing {

inline RatFunc rf(const std::string& text, const RingPtr& ring) { return parse_ratfunc(text, ring); }
inline Poly poly(const std::string& text, const RingPtr& ring) { return parse_poly(text, ring); }

inline BigRat random_rational(std::mt19937_64& rng, long bound = 9) {
  std::uniform_int_distribution<long> num(-bound, bound), den(1, bound);
  BigRat q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline long random_int(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

}  // namespace dofib::testing

namespace dofib::testing {

/// Random polynomial with `terms` terms of total degree <= deg and small
/// integer coefficients.
inline Poly random_poly(std::mt19937_64& rng, const RingPtr& ring, int terms, int deg, long bound = 5) {
  Poly::Builder b(ring);
  std::vector<Poly::Exp> e(ring->size());
  for (int k = 0; k < terms; ++k) {
    int left = random_int(rng, 0, deg);
    for (auto& x : e) x = 0;
    while (left-- > 0) e[random_int(rng, 0, static_cast<long>(ring->size()) - 1)]++;
    long c = random_int(rng, -bound, bound);
    if (c != 0) b.add(e, BigRat(c));
  }
  return b.finish();
}

inline Poly random_nonzero_poly(std::mt19937_64& rng, const RingPtr& ring, int terms, int deg) {
  Poly p;
  do p = random_poly(rng, ring, terms, deg);
  while (p.is_zero());
  return p;
}

}  // namespace dofib::testing
