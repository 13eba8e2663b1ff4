#include "doctest.h"

#include "dofib/bimap.hpp"
#include "dofib/errors.hpp"
#include "dofib/io.hpp"
#include "dofib_test.hpp"

using namespace dofib;
using namespace dofib::testing;

namespace {

const std::vector<std::string> kCoords{"x", "y", "z", "t"};

std::string data(const std::string& name) { return std::string(DOFIB_TEST_DATA) + "/" + name; }

RatFunc var(const RingPtr& r, const std::string& n) { return RatFunc(Poly::variable(r, n)); }

OcticArrangement random_arrangement(std::mt19937_64& rng) {
  while (true) {
    std::vector<std::string> planes;
    for (int k = 0; k < 8; ++k) {
      std::string e = "0";
      for (const auto& v : kCoords) e += " + (" + std::to_string(random_int(rng, -3, 3)) + ")*" + v;
      planes.push_back(e);
    }
    try {
      auto a = OcticArrangement::from_expressions("random", {"x", "y", "z", "t"}, {}, planes);
      a.validate();
      return a;
    } catch (const InvalidArrangement&) {
    }
  }
}

// The coordinate change x = M x' as a map from the transformed cover to the original.
DoubleCoverMap change_map(const ProjectiveChange& c, const RingPtr& r) {
  DoubleCoverMap m;
  m.source_coords = m.target_coords = kCoords;
  for (int i = 0; i < 4; ++i) {
    RatFunc v{Poly(r)};
    for (int j = 0; j < 4; ++j) v += c.matrix()[i][j] * var(r, kCoords[j]);
    m.components.emplace(kCoords[i], v);
  }
  return m;
}

ProjectiveChange random_change(std::mt19937_64& rng, const RingPtr& r) {
  while (true) {
    std::array<std::array<RatFunc, 4>, 4> m;
    for (auto& row : m)
      for (auto& e : row) e = RatFunc(r, BigRat(random_int(rng, -2, 2)));
    try {
      return ProjectiveChange(m);
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_CASE("identity verifies with multiplier one") {
  OcticArrangement a = load_arrangement(data("famX.json"));
  auto id = DoubleCoverMap::identity(kCoords, a.params());
  Certification c = verify(id, a, a);
  CHECK(c.status == CertStatus::Verified);
  CHECK(c.root == SqrtScalar(RatFunc(a.ring(), BigRat(1))));
  CHECK(to_string(c.status) == "verified");
}

TEST_CASE("coordinate changes between random arrangements verify, also after rescaling") {
  std::mt19937_64 rng(4242);
  for (int it = 0; it < 8; ++it) {
    OcticArrangement a = random_arrangement(rng);
    ProjectiveChange ch = random_change(rng, a.ring());
    OcticArrangement b = a.transformed(ch);
    DoubleCoverMap phi = change_map(ch, a.ring());
    CHECK(verify(phi, b, a).status == CertStatus::Verified);
    RatFunc h = var(a.ring(), "x") + RatFunc(a.ring(), BigRat(random_int(rng, 1, 4))) * var(a.ring(), "t");
    Certification c = verify(phi.rescaled(h), b, a);
    CHECK(c.status == CertStatus::Verified);
    CHECK(c.root.coeff() == h.pow(4));
  }
}

TEST_CASE("multiplier outcomes") {
  OcticArrangement a = load_arrangement(data("famY.json"));
  const RingPtr& r = a.ring();
  auto id = DoubleCoverMap::identity(kCoords, a.params());
  auto with = [&](SqrtScalar m) {
    DoubleCoverMap phi = id;
    phi.multiplier = std::move(m);
    return verify(phi, a, a);
  };
  CHECK(with(SqrtScalar(RatFunc(r, BigRat(1)))).status == CertStatus::Verified);
  CHECK(with(SqrtScalar(RatFunc(r, BigRat(-1)))).status == CertStatus::Verified);
  Certification twist = with(SqrtScalar(RatFunc(r, BigRat(1)), var(r, "A0")));
  CHECK(twist.status == CertStatus::TwistMismatch);
  CHECK(to_string(twist.status) == "twist_mismatch");
  CHECK(twist.residual_twist.num().involves("A0"));
  Certification square = with(SqrtScalar(var(r, "A1")));
  CHECK(square.status == CertStatus::Failed);
  CHECK_FALSE(square.note.empty());
}

TEST_CASE("a map that does not pull the branch back fails") {
  RingPtr r = make_ring(kCoords);
  std::vector<RatFunc> src{var(r, "x"), var(r, "y"), var(r, "x") + var(r, "y") + var(r, "z")};
  std::vector<RatFunc> tgt = src;
  auto id = DoubleCoverMap::identity(kCoords, {});
  DoubleCoverMap flip = id;
  flip.components.at("z") = -var(r, "z");
  CHECK(verify(flip, src, tgt).status == CertStatus::Failed);
  // without a multiplier a nonsquare constant ratio is a twist
  std::vector<RatFunc> tgt3{RatFunc(r, BigRat(3)), var(r, "x"), var(r, "y"), var(r, "x") + var(r, "y") + var(r, "z")};
  CHECK(verify(id, src, tgt3).status == CertStatus::TwistMismatch);
}

TEST_CASE("degenerate maps are not dominant") {
  RingPtr r = make_ring(kCoords);
  auto zero = DoubleCoverMap::identity(kCoords, {});
  for (auto& [name, c] : zero.components) c = RatFunc(Poly(r));
  std::vector<RatFunc> f{var(r, "x")};
  CHECK_THROWS_AS(verify(zero, f, f), NotDominant);
  auto collapse = DoubleCoverMap::identity(kCoords, {});
  collapse.components.at("x") = RatFunc(Poly(r));
  CHECK_THROWS_AS(verify(collapse, f, f), NotDominant);
}

TEST_CASE("cancellation") {
  OcticArrangement a = load_arrangement(data("famX.json"));
  CancelToken token;
  token.cancel();
  CHECK_THROWS_AS(verify(DoubleCoverMap::identity(kCoords, a.params()), a, a, &token), Cancelled);
}

TEST_CASE("composition") {
  std::mt19937_64 rng(99);
  OcticArrangement a = random_arrangement(rng);
  ProjectiveChange c1 = random_change(rng, a.ring());
  OcticArrangement b = a.transformed(c1);
  ProjectiveChange c2 = random_change(rng, a.ring());
  OcticArrangement c = b.transformed(c2);
  DoubleCoverMap phi = change_map(c1, a.ring()), psi = change_map(c2, a.ring());
  phi.multiplier = SqrtScalar(RatFunc(a.ring(), BigRat(1)));
  psi.multiplier = SqrtScalar(RatFunc(a.ring(), BigRat(1)));
  DoubleCoverMap both = compose(phi, psi);
  CHECK(verify(both, c, a).status == CertStatus::Verified);

  auto id = DoubleCoverMap::identity(kCoords, {});
  id.multiplier = SqrtScalar(RatFunc(a.ring(), BigRat(1)));
  auto h = projectively_equivalent(compose(phi, id), phi);
  REQUIRE(h.has_value());
  CHECK(*h == RatFunc(a.ring(), BigRat(1)));
  CHECK(compose(id, phi).multiplier == phi.multiplier);
}

TEST_CASE("projective equivalence and primitive coordinates") {
  RingPtr r = make_ring({"x", "y", "z", "t", "A"});
  DoubleCoverMap m;
  m.source_coords = m.target_coords = kCoords;
  m.source_params = m.target_params = {"A"};
  m.components = {{"x", var(r, "x")}, {"y", var(r, "A") * var(r, "y")}, {"z", var(r, "z")},
                  {"t", var(r, "x") + var(r, "t")}, {"A", var(r, "A")}};
  RatFunc h = (var(r, "x") + var(r, "y")) / (RatFunc(r, BigRat(3)) * var(r, "A"));
  auto got = projectively_equivalent(m.rescaled(h), m);
  REQUIRE(got.has_value());
  CHECK(*got == h);
  DoubleCoverMap prim = primitive_coordinates(m.rescaled(h));
  CHECK(projectively_equivalent(prim, m).has_value());
  for (const auto& n : kCoords) CHECK(prim.component(n).den().is_constant());

  DoubleCoverMap other = m;
  other.components.at("z") = var(r, "t");
  CHECK_FALSE(projectively_equivalent(other, m).has_value());
  DoubleCoverMap param = m;
  param.components.at("A") = RatFunc(r, BigRat(2)) * var(r, "A");
  CHECK_FALSE(projectively_equivalent(param, m).has_value());
}

TEST_CASE("roots of linear factors") {
  RingPtr r = make_ring({"t0", "a", "b"});
  const RatFunc t0 = var(r, "t0"), a = var(r, "a"), b = var(r, "b");
  auto roots = roots_in({RatFunc(r, BigRat(7)), t0 - a, RatFunc(r, BigRat(2)) * t0 + b, a * b}, "t0");
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == a);
  CHECK(roots[1] == -b / RatFunc(r, BigRat(2)));
  CHECK_THROWS_AS(roots_in({t0 * t0 - a}, "t0"), NonlinearFactor);
  CHECK_THROWS_AS(roots_in({a / (t0 - b)}, "t0"), NonlinearFactor);
}

TEST_CASE("matching a quadruple with itself contains the identity") {
  RingPtr r = make_ring({"a", "b"});
  const RatFunc a = var(r, "a"), b = var(r, "b");
  std::array<RatFunc, 4> q{RatFunc(r, BigRat(0)), a, b, a + b + RatFunc(r, BigRat(1))};
  QuadrupleMatch m = match_quadruples(q, q, {});
  CHECK(m.candidates == 4);
  CHECK(m.alternatives.size() == 4);
  bool found = false;
  for (const auto& [perm, mob] : m.alternatives) {
    if (perm == std::array<int, 4>{0, 1, 2, 3}) found = mob.equivalent(Mobius::identity(r));
    for (int i = 0; i < 4; ++i) CHECK(mob.apply(m.substituted[perm[i]]) == q[i]);
  }
  CHECK(found);
}

TEST_CASE("matching under a substitution and a Möbius transform") {
  RingPtr r = make_ring({"a", "b", "c"});
  const RatFunc a = var(r, "a"), b = var(r, "b"), one(r, BigRat(1));
  std::array<RatFunc, 4> qb{one, a, b, a * b};
  Mobius g(one, RatFunc(r, BigRat(2)), RatFunc(r, BigRat(3)), RatFunc(r, BigRat(-1)));
  std::map<std::string, RatFunc> sub{{"a", var(r, "c")}};
  std::array<RatFunc, 4> qa;
  const std::array<int, 4> perm{2, 0, 3, 1};
  for (int i = 0; i < 4; ++i) qa[i] = g.apply(qb[perm[i]].substitute(sub));
  QuadrupleMatch m = match_quadruples(qa, qb, sub);
  bool found = false;
  for (const auto& [p, mob] : m.alternatives) found = found || (p == perm && mob.equivalent(g));
  CHECK(found);

  std::array<RatFunc, 4> unrelated{one, a, b, a + b * b};
  CHECK_THROWS_AS(match_quadruples(unrelated, qb, {}), NoMatch);
}

TEST_CASE("map files round trip") {
  for (const char* name : {"maps/no35_to_X.json", "maps/X_to_Y.json", "maps/Xt_to_X.json"}) {
    CAPTURE(name);
    DoubleCoverMap m = load_map(data(name));
    DoubleCoverMap back = parse_map(map_to_json(m, "copy"));
    CHECK(back.components.size() == m.components.size());
    for (const auto& [n, c] : m.components) CHECK(back.component(n).to_string() == c.to_string());
    REQUIRE(back.multiplier.has_value());
    CHECK(*back.multiplier == *m.multiplier);
    CHECK(map_to_json(back, "copy") == map_to_json(m, "copy"));
  }
}

TEST_CASE("map parse errors") {
  const std::string head = R"({"source": {"variables": ["x", "y"], "parameters": ["A"]},
                               "target": {"variables": ["x", "y"], "parameters": ["A"]}, )";
  CHECK_THROWS_AS(parse_map(head + R"("x": "y"})"), ParseError);
  CHECK_THROWS_AS(parse_map(head + R"("x": "y", "y": "x", "params": {"A": "A*x"}})"), ParseError);
  CHECK_THROWS_AS(parse_map(head + R"("x": "y", "y": "x +"})"), ParseError);
  CHECK_THROWS_AS(parse_map("{"), ParseError);
  CHECK_NOTHROW(parse_map(head + R"("x": "y", "y": "x"})"));
}
