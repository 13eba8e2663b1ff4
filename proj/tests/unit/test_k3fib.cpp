#include "doctest.h"

#include "dofib/errors.hpp"
#include "dofib/io.hpp"
#include "dofib/k3fib.hpp"
#include "dofib_test.hpp"

using namespace dofib;
using namespace dofib::testing;

namespace {

OcticArrangement fixture(const char* name) { return load_arrangement(std::string(DOFIB_TEST_DATA) + "/" + name); }

RatFunc var(const RingPtr& r, const std::string& n) { return RatFunc(Poly::variable(r, n)); }

// The octic evaluated at x = M point, lifted to the union of both rings.
RatFunc octic_at(const OcticArrangement& arr, const ProjectiveChange& change, const std::array<RatFunc, 4>& point,
                 const RingPtr& u) {
  std::map<std::string, RatFunc> at;
  for (int i = 0; i < 4; ++i) {
    RatFunc v{Poly(u)};
    for (int j = 0; j < 4; ++j) v += change.matrix()[i][j].in_ring(u) * point[j].in_ring(u);
    at.emplace(arr.vars()[i], v);
  }
  return arr.octic().in_ring(u).substitute(at);
}

OcticArrangement kummer_ready() {
  return OcticArrangement::from_expressions("kummer", {"x", "y", "z", "t"}, {},
                                            {"x", "y", "x + z", "x - y + 2*z", "t", "y + t", "z + t", "y - 2*z + 3*t"});
}

}  // namespace

TEST_CASE("quadric family pullback identity for every census seed") {
  for (const char* name : {"famX.json", "famY.json"}) {
    CAPTURE(name);
    OcticArrangement arr = fixture(name);
    Census c = fibration_census(arr, false);
    for (std::size_t k = 0; k < c.entries.size(); ++k) {
      QuadricFamily f = quadric_family(arr, c.entries[k].seed);
      RingPtr u = unite(arr.ring(), f.ring);
      const RatFunc p0 = var(u, "p0"), p1 = var(u, "p1"), q0 = var(u, "q0"), q1 = var(u, "q1"), l = var(u, "l");
      RatFunc lhs = octic_at(arr, f.change, {p0 * q0, p0 * q1, p1 * q0, l * p1 * q1}, u);
      CHECK(lhs == (p0 * p1 * q0 * q1).pow(2) * f.branch.in_ring(u));
      CHECK(f.factors.size() == 5);
    }
  }
}

TEST_CASE("residual quadric factors are bihomogeneous of bidegree (1, 1)") {
  OcticArrangement arr = fixture("famX.json");
  QuadricFamily f = quadric_family(arr, {2, 4, 5, 3});
  const RingPtr& r = f.ring;
  RingPtr u = unite(r, make_ring({"a", "b"}));
  const RatFunc a = var(u, "a"), b = var(u, "b");
  for (std::size_t i = 1; i < 5; ++i) {
    RatFunc g = f.factors[i].in_ring(u);
    RatFunc sp = g.substitute({{"p0", a * var(u, "p0")}, {"p1", a * var(u, "p1")}});
    RatFunc sq = g.substitute({{"q0", b * var(u, "q0")}, {"q1", b * var(u, "q1")}});
    CHECK(sp == a * g);
    CHECK(sq == b * g);
  }
}

TEST_CASE("census counts") {
  for (const char* name : {"famX.json", "famY.json"}) {
    Census c = fibration_census(fixture(name), false);
    CHECK(c.entries.size() == 165);
  }
  CHECK(fibration_census(fixture("famX.json"), false).skew_line_pairs == 129);
  CHECK(fibration_census(fixture("famY.json"), false).skew_line_pairs == 149);
}

TEST_CASE("census count is invariant under a projective change") {
  OcticArrangement arr = fixture("no35.json").specialize({{"A", BigRat(3)}, {"B", BigRat(5)}});
  const RingPtr& r = arr.ring();
  std::array<std::array<RatFunc, 4>, 4> m;
  const long rows[4][4] = {{1, 2, 0, 1}, {0, 1, 3, 0}, {2, 0, 1, 1}, {1, 1, 1, 2}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = RatFunc(r, BigRat(rows[i][j]));
  OcticArrangement moved = arr.transformed(ProjectiveChange(m));
  CHECK(fibration_census(moved, false).entries.size() == fibration_census(arr, false).entries.size());
  CHECK(fibration_census(moved, false).skew_line_pairs == fibration_census(arr, false).skew_line_pairs);
}

TEST_CASE("quadric family rejects non-skew seeds") {
  CHECK_THROWS_AS(quadric_family(fixture("famX.json"), {0, 1, 2, 5}), NotSkew);
}

TEST_CASE("node elliptic identity") {
  for (auto chart : {NodeChart::P0Q1, NodeChart::P1Q0}) {
    OcticArrangement arr = fixture(chart == NodeChart::P0Q1 ? "famX.json" : "famY.json");
    std::array<std::size_t, 4> seed = chart == NodeChart::P0Q1 ? std::array<std::size_t, 4>{2, 4, 5, 3}
                                                               : std::array<std::size_t, 4>{2, 3, 5, 6};
    QuadricFamily f = quadric_family(arr, seed);
    NodeEllipticFibration n = node_elliptic(f, chart);
    const RingPtr& r = n.model.ring();
    std::map<std::string, RatFunc> sub;
    if (chart == NodeChart::P0Q1) {
      sub = {{"q0", var(r, "p1") * var(r, "t1")}, {"q1", var(r, "p0") * var(r, "t0")}};
    } else {
      sub = {{"p0", var(r, "q1") * var(r, "t1")}, {"p1", var(r, "q0") * var(r, "t0")}};
    }
    CHECK(f.branch.in_ring(r).substitute(sub) == n.square.pow(2) * n.model);
    // four factors are linear in t0 after the substitution
    std::size_t linear = 0;
    for (const auto& g : n.factors) linear += g.num().degree(*r->index_of("t0")) == 1;
    CHECK(linear >= 4);
  }
}

TEST_CASE("node elliptic rejects points off the branch") {
  OcticArrangement arr = fixture("famX.json");
  QuadricFamily f = quadric_family(arr, {2, 4, 5, 3});
  // p1 = q0 = 0 meets at most one factor for this seed
  bool threw = false;
  try {
    node_elliptic(f, NodeChart::P1Q0);
  } catch (const NotANode&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("Kummer branches multiply to the octic") {
  OcticArrangement arr = kummer_ready();
  KummerFibration k = kummer(arr);
  CHECK(k.s1_branch * k.s2_branch == arr.octic());
  CHECK_FALSE(k.s1_branch.involves("t"));
  CHECK_FALSE(k.s2_branch.involves("x"));
  CHECK(k.quotient == "(S1 x_P1 S2)/(i1 x i2)");
  CHECK_THROWS_AS(kummer(fixture("famX.json")), NotNormalized);
}

TEST_CASE("Kummer setup from a disjoint point pair after a projective change") {
  OcticArrangement base = kummer_ready();
  const RingPtr& r = base.ring();
  std::array<std::array<RatFunc, 4>, 4> m;
  const long rows[4][4] = {{2, 1, 0, 1}, {1, 1, 1, 0}, {0, 1, 3, 1}, {1, 0, 1, 1}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = RatFunc(r, BigRat(rows[i][j]));
  OcticArrangement arr = base.transformed(ProjectiveChange(m));
  IncidenceReport rep = analyze(arr);
  FibrationSeeds s = find_fibration_seeds(arr, rep);
  REQUIRE_FALSE(s.point_pairs.empty());
  const auto& pp = s.point_pairs.front();
  Normalized n = normalize_point_pair(arr, rep.points[pp.first], rep.points[pp.second], pp.quad1, pp.quad2);
  KummerFibration k = kummer(n.arrangement);
  CHECK(k.s1_branch * k.s2_branch == n.arrangement.octic());
}

TEST_CASE("sextic family at s = 0 and at infinity") {
  OcticArrangement arr = fixture("famX.json");
  IncidenceReport rep = analyze(arr);
  for (const auto& line : rep.lines) {
    if (line.multiplicity() != 2) continue;
    SexticFamily f = sextic_family(arr, line.planes[0], line.planes[1]);
    const auto& n = f.normalized;
    REQUIRE(f.lines.size() == 6);
    // the last two planes are z and t up to constants
    for (std::size_t k = 6; k < 8; ++k)
      for (std::size_t c = 0; c < 4; ++c) CHECK(n.plane(k).c[c].is_zero() == (c != k - 4));
    // s = 0: restriction of the octic to t = 0, with the two seed planes removed
    RingPtr r = f.fiber_branch.ring();
    RatFunc at0 = f.fiber_branch.substitute({{"s", RatFunc(r, BigRat(0))}});
    RatFunc restricted = n.scale().in_ring(r);
    for (std::size_t k = 0; k < 6; ++k) restricted *= n.plane_expression(k).in_ring(r);
    restricted = restricted.substitute({{n.vars()[3], RatFunc(r, BigRat(0))}});
    CHECK(at0 == restricted);
    // t = s z substituted into the octic
    RatFunc octic = n.octic().in_ring(r).substitute({{n.vars()[3], var(r, "s") * var(r, n.vars()[2])}});
    CHECK(octic == var(r, "s") * var(r, n.vars()[2]).pow(2) * f.fiber_branch * n.plane(6).c[2].in_ring(r) *
                       n.plane(7).c[3].in_ring(r));
    CHECK_FALSE(f.fiber_at_infinity.involves(n.vars()[2]));
    break;
  }
}

TEST_CASE("sextic seeds of multiplicity four are rejected") {
  OcticArrangement arr = OcticArrangement::from_expressions(
      "fourline", {"x", "y", "z", "t"}, {}, {"x", "y", "x + y", "x - y", "z", "t", "z + t + x", "y + 2*z - t"});
  CHECK_THROWS_AS(sextic_family(arr, 0, 1), BadSeed);
}

TEST_CASE("special fibers of a sextic family") {
  OcticArrangement arr = fixture("no35.json").specialize({{"A", BigRat(2)}, {"B", BigRat(1)}});
  IncidenceReport rep = analyze(arr);
  for (const auto& line : rep.lines) {
    if (line.multiplicity() != 2) continue;
    SexticFamily f = sextic_family(arr, line.planes[0], line.planes[1]);
    auto special = sextic_special_fibers(f);
    CHECK_FALSE(special.empty());
    for (const auto& sf : special) {
      CHECK(sf.condition.involves("s"));
      for (const auto& root : sf.rational_roots) {
        CHECK(sf.condition.evaluate({{"s", root}}).is_zero());
      }
    }
    // a random generic fiber has six distinct lines, no four concurrent
    for (const auto& sf : special) CHECK_FALSE(sf.condition.evaluate({{"s", BigRat(997, 13)}}).is_zero());
    break;
  }
}

TEST_CASE("sextic family of lines independent of s has no special fibers") {
  // the residual planes all contain t only through the seed planes
  OcticArrangement arr = OcticArrangement::from_expressions(
      "flat", {"x", "y", "z", "t"}, {}, {"x", "y", "x + y + z", "x - y + 2*z", "x + 3*y - z", "2*x + y + 5*z", "z", "t"});
  SexticFamily f = sextic_family(arr, 6, 7);
  for (const auto& l : f.lines) CHECK_FALSE(l.involves("s"));
  CHECK(sextic_special_fibers(f).empty());
}
