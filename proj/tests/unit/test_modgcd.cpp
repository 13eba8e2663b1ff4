#include "doctest.h"

#include "dofib/gcd.hpp"
#include "dofib_test.hpp"
#include "modgcd.hpp"

using namespace dofib;
using dofib::testing::random_nonzero_poly;

namespace {

std::vector<std::size_t> joint_support(const Poly& a, const Poly& b) {
  auto s = a.support();
  for (auto v : b.support()) s.push_back(v);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::optional<Poly> modular(const Poly& a, const Poly& b) {
  const auto s = joint_support(a, b);
  return detail::modular_gcd(a.primitive(), b.primitive(), s);
}

// Integer coefficients near 2^100 so no single word-size prime suffices.
Poly inflate(const Poly& p, long salt) {
  const BigInt big = BigInt(1) << 100;
  Poly::Builder b(p.ring());
  for (std::size_t t = 0; t < p.size(); ++t) {
    b.add(p.exps(t), p.coeff(t) * BigRat(big + BigInt(salt + static_cast<long>(t))));
  }
  return b.finish();
}

}  // namespace

TEST_CASE("modular gcd recovers a planted common factor") {
  std::mt19937_64 rng(8128);
  const RingPtr r = make_ring({"x", "y", "z", "a"});
  int recovered = 0;
  for (int it = 0; it < 30; ++it) {
    const Poly c = random_nonzero_poly(rng, r, 3, 2);
    const Poly u = random_nonzero_poly(rng, r, 4, 3), v = random_nonzero_poly(rng, r, 4, 3);
    const Poly a = u * c, b = v * c;
    if (joint_support(a, b) != joint_support(a, a) || joint_support(a, b) != joint_support(b, b)) continue;
    auto g = modular(a, b);
    REQUIRE(g.has_value());
    CHECK(a.divide_exact(*g).has_value());
    CHECK(b.divide_exact(*g).has_value());
    if (!c.is_constant()) CHECK(g->divide_exact(c.primitive()).has_value());
    CHECK(*g == gcd(a, b));
    ++recovered;
  }
  CHECK(recovered > 10);
}

TEST_CASE("modular gcd needs several primes for large coefficients") {
  const RingPtr r = make_ring({"x", "y"});
  const Poly c = inflate(testing::poly("3*x^2*y + x*y^2 - 7*y + 2", r), 17);
  const Poly u = testing::poly("x + y + 1", r), v = testing::poly("x^2 - 2*y", r);
  auto g = modular(u * c, v * c);
  REQUIRE(g.has_value());
  CHECK(*g == c.primitive());
}

TEST_CASE("modular gcd of coprime inputs is one") {
  const RingPtr r = make_ring({"x", "y"});
  auto g = modular(testing::poly("x^3 + y^2 + 1", r), testing::poly("x*y - 2", r));
  REQUIRE(g.has_value());
  CHECK(g->is_one());
}

TEST_CASE("modular gcd with a univariate content") {
  const RingPtr r = make_ring({"x", "y"});
  // The shared factor lives only in y, which exercises the content step.
  const Poly a = testing::poly("(y^2 + 1)*(x + y)", r), b = testing::poly("(y^2 + 1)*(x - y)*(y - 3)", r);
  auto g = modular(a, b);
  REQUIRE(g.has_value());
  CHECK(*g == testing::poly("y^2 + 1", r));
}
