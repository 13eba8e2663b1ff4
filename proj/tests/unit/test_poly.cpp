#include "doctest.h"

#include <random>

#include "dofib/errors.hpp"
#include "dofib/gcd.hpp"
#include "dofib/parse.hpp"

using namespace dofib;

namespace {

RingPtr xyz() { return make_ring({"x", "y", "z", "t"}); }
Poly P(const char* s, const RingPtr& r) { return parse_poly(s, r); }

}  // namespace

TEST_CASE("difference of squares") {
  auto r = xyz();
  CHECK((P("x+y", r) * P("x-y", r)).to_string() == "x^2 - y^2");
}

TEST_CASE("canonical printing is graded lex") {
  auto r = make_ring({"t", "a", "b", "c"});
  Poly p = P("(t+a)*(t+b)*(t+c)", r);
  CHECK(p.to_string() ==
        "t^3 + t^2*a + t^2*b + t^2*c + t*a*b + t*a*c + t*b*c + a*b*c");
}

TEST_CASE("gcd basics") {
  auto r = xyz();
  CHECK(gcd(P("x^2-y^2", r), P("x^2+2*x*y+y^2", r)) == P("x+y", r));
  CHECK(gcd(P("2*x+4*y", r), Poly(r)) == P("x+2*y", r));
  CHECK(gcd(P("x*y^2*(x+z)^3", r), P("y*(x+z)*(x-t)", r)) == P("x*y+y*z", r));
}

TEST_CASE("exact division") {
  auto r = xyz();
  Poly a = P("(x+y+z)^3*(x-t)", r);
  CHECK(a.divide_exact(P("x+y+z", r)).value() == P("(x+y+z)^2*(x-t)", r));
  CHECK_FALSE(a.divide_exact(P("x+y", r)).has_value());
}

TEST_CASE("square extraction") {
  auto r = xyz();
  auto s = extract_square(P("(x+y)^2*(x-y)", r));
  CHECK(s.root == P("x+y", r));
  CHECK(s.squarefree == P("x-y", r));
  auto s2 = extract_square(P("-12*x^3*y^2*(z+t)^5", r));
  CHECK(s2.root * s2.root * s2.squarefree == P("-12*x^3*y^2*(z+t)^5", r));
  CHECK(s2.squarefree == P("-12*x*(z+t)", r));
}

TEST_CASE("resultant and discriminant") {
  auto r = make_ring({"t", "a", "b", "c"});
  CHECK(resultant(P("t-a", r), P("t-b", r), 0) == P("a-b", r));
  Poly disc = discriminant(P("(t+a)*(t+b)*(t+c)", r), 0);
  CHECK(disc == P("(a-b)^2*(a-c)^2*(b-c)^2", r));
}

TEST_CASE("parse errors") {
  auto r = xyz();
  CHECK_THROWS_AS(P("x+w", r), ParseError);
  CHECK_THROWS_AS(P("x+", r), ParseError);
  CHECK_THROWS_AS(P("x/y", r), ParseError);
}
