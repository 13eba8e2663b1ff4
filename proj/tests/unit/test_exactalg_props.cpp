#include "doctest.h"

#include "dofib/errors.hpp"
#include "dofib/gcd.hpp"
#include "dofib/mobius.hpp"
#include "dofib/sqrt_scalar.hpp"
#include "dofib_test.hpp"

using namespace dofib;
using namespace dofib::testing;

namespace {

RingPtr ring3() { return make_ring({"x", "y", "z"}); }

bool squarefree_in_every_variable(const Poly& s) {
  for (std::size_t v = 0; v < s.nvars(); ++v) {
    if (!s.involves(v)) continue;
    // A repeated factor involving v survives in gcd(s, ds/dv).
    if (gcd(s, s.derivative(v)).involves(v)) return false;
  }
  return true;
}

ProjPoint pt(const BigRat& q) { return ProjPoint::value(RatFunc(make_ring({}), q)); }

Quadruple random_quadruple(std::mt19937_64& rng) {
  while (true) {
    Quadruple q{pt(random_rational(rng)), pt(random_rational(rng)), pt(random_rational(rng)),
                pt(random_rational(rng))};
    bool distinct = true;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) distinct = distinct && !(q[i] == q[j]);
    if (distinct) return q;
  }
}

Mobius random_mobius(std::mt19937_64& rng) {
  const RingPtr r = make_ring({});
  while (true) {
    RatFunc a(r, random_rational(rng)), b(r, random_rational(rng)), c(r, random_rational(rng)),
        d(r, random_rational(rng));
    if (!(a * d - b * c).is_zero()) return Mobius(a, b, c, d);
  }
}

}  // namespace

TEST_CASE("ring laws on random polynomials") {
  std::mt19937_64 rng(101);
  const RingPtr r = ring3();
  for (int it = 0; it < 40; ++it) {
    Poly a = random_poly(rng, r, 5, 3), b = random_poly(rng, r, 5, 3), c = random_poly(rng, r, 5, 3);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Poly(r));
  }
}

TEST_CASE("operands over different rings are aligned by name") {
  RingPtr rx = make_ring({"x", "y"}), ry = make_ring({"y", "z"});
  Poly s = parse_poly("x + y", rx) * parse_poly("y - z", ry);
  CHECK(s == parse_poly("x*y - x*z + y^2 - y*z", make_ring({"x", "y", "z"})));
}

TEST_CASE("substitution composes") {
  std::mt19937_64 rng(202);
  const RingPtr r = ring3();
  for (int it = 0; it < 20; ++it) {
    Poly p = random_poly(rng, r, 4, 3);
    std::map<std::string, RatFunc> sigma{{"x", RatFunc(random_poly(rng, r, 3, 2))},
                                         {"y", RatFunc(random_poly(rng, r, 3, 1))}};
    std::map<std::string, RatFunc> tau{{"x", RatFunc(random_poly(rng, r, 2, 1))},
                                       {"z", RatFunc(random_poly(rng, r, 3, 2))}};
    // tau o sigma: apply sigma first, then tau to the result
    std::map<std::string, RatFunc> both = tau;
    for (const auto& [k, v] : sigma) both[k] = v.substitute(tau);
    CHECK(substitute(p, sigma).substitute(tau) == substitute(p, both));
  }
}

TEST_CASE("substitution examples") {
  RingPtr r = make_ring({"x", "y", "z", "t", "s"});
  CHECK(substitute(parse_poly("x + y + z + t", r), {{"t", rf("s*z", r)}}) == rf("x + y + (1 + s)*z", r));
  CHECK(substitute(parse_poly("x", r), {{"x", rf("x", r)}}) == rf("x", r));
  CHECK_THROWS_AS(rf("1/(x - y)", r).substitute({{"x", rf("y", r)}}), DivisionByZero);
}

TEST_CASE("gcd divides both and is stable under a common factor") {
  std::mt19937_64 rng(303);
  const RingPtr r = ring3();
  for (int it = 0; it < 25; ++it) {
    Poly a = random_nonzero_poly(rng, r, 4, 2), b = random_nonzero_poly(rng, r, 4, 2);
    Poly c = random_nonzero_poly(rng, r, 3, 2);
    Poly g = gcd(a * c, b * c);
    CHECK((a * c).divide_exact(g).has_value());
    CHECK((b * c).divide_exact(g).has_value());
    CHECK(g.divide_exact(c.primitive()).has_value());
    CHECK(g == (gcd(a, b) * c).primitive());
  }
  CHECK(gcd(parse_poly("x^2 - y^2", r), parse_poly("x^2 + 2*x*y + y^2", r)) == parse_poly("x + y", r));
  CHECK(gcd(parse_poly("2*x + 4*y", r), Poly(r)) == parse_poly("x + 2*y", r));
}

TEST_CASE("extract_square soundness") {
  std::mt19937_64 rng(404);
  const RingPtr r = ring3();
  for (int it = 0; it < 25; ++it) {
    Poly a = random_nonzero_poly(rng, r, 3, 2), b = random_nonzero_poly(rng, r, 3, 2);
    Poly c = random_nonzero_poly(rng, r, 3, 1);
    Poly p = a * a * b * c * c * c;
    SquareSplit s = extract_square(p);
    CHECK(s.root * s.root * s.squarefree == p);
    CHECK(squarefree_in_every_variable(s.squarefree));
  }
  SquareSplit s = extract_square(parse_poly("(x+y)^2*(x-y)", r));
  CHECK(s.root.primitive() == parse_poly("x + y", r));
  CHECK(s.squarefree.primitive() == parse_poly("x - y", r));
}

TEST_CASE("coprime_base is pairwise coprime and divides every input") {
  std::mt19937_64 rng(454);
  const RingPtr r = ring3();
  for (int it = 0; it < 15; ++it) {
    Poly a = random_nonzero_poly(rng, r, 3, 2), b = random_nonzero_poly(rng, r, 3, 1);
    Poly c = random_nonzero_poly(rng, r, 3, 1);
    std::vector<Poly> in{a * b * b, b * c, c * c * c * a};
    std::vector<Poly> base = coprime_base(in);
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(squarefree_in_every_variable(base[i]));
      for (std::size_t j = i + 1; j < base.size(); ++j) CHECK(gcd(base[i], base[j]).is_constant());
    }
    // Each input is a product of base powers up to a constant.
    for (Poly p : in) {
      for (const auto& f : base) {
        while (auto q = p.divide_exact(f)) p = *q;
      }
      CHECK(p.is_constant());
    }
  }
  std::vector<Poly> base = coprime_base({parse_poly("x^2*y", r), parse_poly("x^2 - 2*x*y", r),
                                         parse_poly("x*y - y^2", r), parse_poly("7", r)});
  REQUIRE(base.size() == 4);
  CHECK(base[0] == parse_poly("x", r));
}

TEST_CASE("resultant commutes with specialization") {
  std::mt19937_64 rng(505);
  const RingPtr r = ring3();
  const std::size_t x = 0;
  for (int it = 0; it < 20; ++it) {
    Poly a = random_nonzero_poly(rng, r, 4, 3), b = random_nonzero_poly(rng, r, 4, 3);
    if (a.degree(x) == 0 || b.degree(x) == 0) continue;
    Poly res = resultant(a, b, x);
    std::map<std::string, BigRat> at{{"y", random_rational(rng)}, {"z", random_rational(rng)}};
    Poly as = a.evaluate(at), bs = b.evaluate(at);
    // Leading coefficients must survive the specialization.
    if (as.degree(x) != a.degree(x) || bs.degree(x) != b.degree(x)) continue;
    CHECK(res.evaluate(at) == resultant(as, bs, x));
  }
}

TEST_CASE("discriminant of a product of linear factors") {
  RingPtr r = make_ring({"t", "a", "b", "c"});
  Poly f = parse_poly("(t + a)*(t + b)*(t + c)", r);
  CHECK(discriminant(f, 0) == parse_poly("(a - b)^2*(a - c)^2*(b - c)^2", r));
  CHECK(resultant(parse_poly("t - a", r), parse_poly("t - b", r), 0).primitive() ==
        parse_poly("a - b", r).primitive());
  CHECK_THROWS_AS(resultant(parse_poly("a", r), parse_poly("t - b", r), 0), DegenerateInput);
}

TEST_CASE("cross-ratio is invariant under Möbius transforms") {
  std::mt19937_64 rng(606);
  for (int it = 0; it < 50; ++it) {
    Quadruple q = random_quadruple(rng);
    Mobius m = random_mobius(rng);
    Quadruple mq{m.apply(q[0]), m.apply(q[1]), m.apply(q[2]), m.apply(q[3])};
    CHECK(cross_ratio(mq) == cross_ratio(q));
  }
}

TEST_CASE("cross-ratio orbit under the 24 orderings") {
  std::mt19937_64 rng(707);
  Quadruple q = random_quadruple(rng);
  std::array<int, 4> p{0, 1, 2, 3};
  do {
    RatFunc c = cross_ratio({q[p[0]], q[p[1]], q[p[2]], q[p[3]]});
    CHECK(orbit_position(cross_ratio(q), c).has_value());
  } while (std::next_permutation(p.begin(), p.end()));
}

TEST_CASE("from_pairs: fourth point matches iff the cross-ratios agree") {
  std::mt19937_64 rng(808);
  int matched = 0, unmatched = 0;
  for (int it = 0; it < 60; ++it) {
    Quadruple a = random_quadruple(rng);
    Quadruple b = random_quadruple(rng);
    if (it % 2 == 0) {
      // force equal cross-ratios by construction
      Mobius m = random_mobius(rng);
      b = {m.apply(a[0]), m.apply(a[1]), m.apply(a[2]), m.apply(a[3])};
    }
    Mobius m = Mobius::from_pairs({a[0], a[1], a[2]}, {b[0], b[1], b[2]});
    for (int i = 0; i < 3; ++i) CHECK(m.apply(a[i]) == b[i]);
    const bool same = cross_ratio(a) == cross_ratio(b);
    CHECK((m.apply(a[3]) == b[3]) == same);
    (same ? matched : unmatched)++;
  }
  CHECK(matched >= 30);
  CHECK(unmatched > 0);
}

TEST_CASE("from_pairs examples") {
  RingPtr r = make_ring({"a", "b", "w"});
  auto inf = ProjPoint::infinity(r);
  auto v = [&](const char* s) { return ProjPoint::value(rf(s, r)); };
  CHECK(Mobius::from_pairs({v("0"), v("1"), inf}, {v("0"), v("1"), inf}).equivalent(Mobius::identity(r)));
  Mobius aff = Mobius::from_pairs({v("0"), v("1"), inf}, {v("b"), v("a + b"), inf});
  CHECK(aff.apply(rf("w", r)) == rf("a*w + b", r));
  CHECK_THROWS_AS(Mobius::from_pairs({v("0"), v("0"), inf}, {v("0"), v("1"), inf}), DegenerateQuadruple);
}

TEST_CASE("cross-ratio convention and degeneracy") {
  RingPtr r = make_ring({"w"});
  auto v = [&](const char* s) { return ProjPoint::value(rf(s, r)); };
  // ((z1 - z3)(z2 - z4)) / ((z2 - z3)(z1 - z4)) with z4 at infinity
  CHECK(cross_ratio({v("0"), v("1"), v("w"), ProjPoint::infinity(r)}) == rf("w/(w - 1)", r));
  CHECK_THROWS_AS(cross_ratio({v("0"), v("1"), v("1"), v("w")}), DegenerateQuadruple);
}

TEST_CASE("formal square roots") {
  RingPtr r = make_ring({"A", "B"});
  SqrtScalar s(rf("1", r), rf("A^3*B^3", r));
  CHECK(s.coeff() == rf("A*B", r));
  CHECK(s.radicand() == parse_poly("A*B", r));
  CHECK(s.square() == rf("A^3*B^3", r));
  SqrtScalar i(rf("1", r), rf("-1", r));
  CHECK(!i.is_rational());
  CHECK((i * i) == SqrtScalar(rf("-1", r)));
  std::mt19937_64 rng(909);
  for (int it = 0; it < 20; ++it) {
    SqrtScalar a(RatFunc(random_nonzero_poly(rng, r, 2, 2)), RatFunc(random_nonzero_poly(rng, r, 3, 2)));
    SqrtScalar b(RatFunc(random_nonzero_poly(rng, r, 2, 2)), RatFunc(random_nonzero_poly(rng, r, 3, 2)));
    CHECK((a * b).square() == a.square() * b.square());
  }
}
