#include "doctest.h"

#include <set>

#include "dofib/arrangement.hpp"
#include "dofib/errors.hpp"
#include "dofib/io.hpp"
#include "dofib_test.hpp"
#include "incidence_oracle.hpp"

using namespace dofib;
using namespace dofib::testing;

namespace {

OcticArrangement fixture(const char* name) { return load_arrangement(std::string(DOFIB_TEST_DATA) + "/" + name); }

}  // namespace

TEST_CASE("incidence agrees with a brute-force oracle on 100 random arrangements") {
  std::mt19937_64 rng(20261015);
  for (int it = 0; it < 100; ++it) {
    auto planes = random_planes(rng);
    IncidenceReport rep = analyze(build(planes));
    Oracle expect = brute_force(planes), got = from_report(rep);
    CHECK(got.lines == expect.lines);
    CHECK(got.points == expect.points);
  }
}

TEST_CASE("incidence is invariant under projective changes") {
  std::mt19937_64 rng(77);
  for (int it = 0; it < 10; ++it) {
    auto planes = random_planes(rng);
    OcticArrangement a = build(planes);
    RingPtr r = a.ring();
    std::array<std::array<RatFunc, 4>, 4> m;
    std::vector<Row> rows(4);
    do {
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rows[i][j] = BigRat(random_int(rng, -3, 3));
    } while (rank_of(rows) < 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m[i][j] = RatFunc(r, rows[i][j]);
    OcticArrangement b = a.transformed(ProjectiveChange(m));
    CHECK(from_report(analyze(b)).points == from_report(analyze(a)).points);
    CHECK(from_report(analyze(b)).lines == from_report(analyze(a)).lines);
  }
}

TEST_CASE("invalid arrangements are rejected") {
  std::vector<std::string> e{"x", "2*x", "y", "z", "t", "x+y", "y+z", "z+t"};
  CHECK_THROWS_AS(OcticArrangement::from_expressions("bad", {"x", "y", "z", "t"}, {}, e).validate(),
                  InvalidArrangement);
  CHECK_THROWS_AS(parse_arrangement("{\"variables\": [\"x\"], \"planes\": []}"), ParseError);
}

TEST_CASE("family X and Y incidence") {
  for (const char* name : {"famX.json", "famY.json"}) {
    CAPTURE(name);
    OcticArrangement a = fixture(name);
    IncidenceReport rep = analyze(a);
    CHECK(rep.admissible);
    std::size_t fivefold = 0, fourfold = 0;
    for (const auto& p : rep.points) {
      fivefold += p.multiplicity() == 5;
      fourfold += p.multiplicity() == 4;
    }
    FibrationSeeds s = find_fibration_seeds(a, rep);
    CHECK(s.points.size() == fivefold + fourfold);
    if (std::string(name) == "famX.json") {
      CHECK(fivefold == 1);
      CHECK(fourfold == 10);
      CHECK(rep.lines.size() == 24);
      CHECK(s.skew_pairs.size() == 129);
    } else {
      CHECK(fivefold == 2);
      CHECK(fourfold == 5);
      CHECK(rep.lines.size() == 26);
      CHECK(s.skew_pairs.size() == 149);
    }
  }
}

TEST_CASE("No. 35 and X have the same incidence pattern") {
  CHECK(from_report(analyze(fixture("no35.json"))).points == from_report(analyze(fixture("famX.json"))).points);
  CHECK(from_report(analyze(fixture("no71.json"))).points == from_report(analyze(fixture("famY.json"))).points);
}

TEST_CASE("normalizing a fourfold point of No. 35") {
  OcticArrangement a = fixture("no35.json");
  IncidenceReport rep = analyze(a);
  for (const auto& p : rep.points) {
    if (p.multiplicity() != 4) continue;
    Normalized n = normalize_point(a, p);
    RingPtr r = n.arrangement.ring();
    for (std::size_t k = 0; k < 8; ++k) {
      const RatFunc& tc = n.arrangement.plane(k).c[3];
      CHECK(tc == RatFunc(r, BigRat(k < 4 ? 0 : 1)));
      // the new plane k is the pulled-back old plane order[k], up to a constant
      LinearForm old = n.change.pull_back(a.plane(n.order[k]));
      std::size_t lead = 0;
      while (old.c[lead].is_zero()) ++lead;
      RatFunc ratio = n.arrangement.plane(k).c[lead] / old.c[lead];
      for (std::size_t c = 0; c < 4; ++c) CHECK(n.arrangement.plane(k).c[c] == ratio * old.c[c]);
    }
    // planes through the point come first in original order
    for (std::size_t k = 0; k + 1 < 4; ++k) CHECK(n.order[k] < n.order[k + 1]);
    // the branch is preserved up to the recorded scale
    IncidenceReport again = analyze(n.arrangement);
    bool found = false;
    for (const auto& q : again.points) found = found || (q.planes == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(found);
    // round trip
    for (std::size_t k = 0; k < 8; ++k) {
      LinearForm back = n.change.push_forward(n.change.pull_back(a.plane(k)));
      CHECK(back == a.plane(k));
    }
  }
}

TEST_CASE("skew-line normalization") {
  OcticArrangement x = fixture("famX.json");
  // x - y, x, y all contain the line x = y = 0
  CHECK_THROWS_AS(normalize_skew_lines(x, {0, 1, 2, 5}), NotSkew);
  CHECK_THROWS_AS(normalize_skew_lines(x, {0, 0, 2, 5}), NotSkew);
  Normalized n = normalize_skew_lines(x, {2, 4, 5, 3});
  const RingPtr r = n.arrangement.ring();
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t c = 0; c < 4; ++c) CHECK(n.arrangement.plane(k).c[c] == RatFunc(r, BigRat(c == k ? 1 : 0)));
}

TEST_CASE("specialization drops parameters") {
  OcticArrangement a = fixture("no35.json").specialize({{"A", BigRat(2)}, {"B", BigRat(1)}});
  CHECK(a.params().empty());
  IncidenceReport rep = analyze(a, true);
  CHECK(rep.admissible);
  CHECK(rep.conditions.empty());
}

TEST_CASE("strict mode refuses parameter-dependent decisions") {
  CHECK_THROWS_AS(analyze(fixture("no35.json"), true), ParameterDegeneracy);
}
