#include "doctest.h"

#include <algorithm>

#include <json.hpp>

#include "dofib/errors.hpp"
#include "dofib/io.hpp"
#include "dofib/parse.hpp"
#include "dofib/pipeline.hpp"
#include "dofib_test.hpp"

using namespace dofib;

namespace {

std::string data(const std::string& name) { return std::string(DOFIB_TEST_DATA) + "/" + name; }

struct Printed {
  nlohmann::json j = nlohmann::json::parse(read_file(data("printed.json")));
  RingPtr ring = make_ring(j.at("ring").get<std::vector<std::string>>());
  RatFunc operator()(const char* key) const { return parse_ratfunc(j.at(key).get<std::string>(), ring); }
  std::array<RatFunc, 4> quadruple(const char* key) const {
    std::array<RatFunc, 4> q;
    for (int i = 0; i < 4; ++i) q[i] = parse_ratfunc(j.at(key).at(i).get<std::string>(), ring);
    return q;
  }
};

const Printed& printed() {
  static const Printed p;
  return p;
}

bool free_of(const RatFunc& f, std::initializer_list<const char*> names) {
  return std::none_of(names.begin(), names.end(), [&](const char* n) { return f.involves(n); });
}

const auto kFiber = {"p0", "p1", "q0", "q1", "l", "t0", "t1"};

struct Fixture {
  OcticArrangement x = load_arrangement(data("famX.json"));
  OcticArrangement y = load_arrangement(data("famY.json"));
  BridgeConfig cfg = parse_bridge(read_file(data("bridge.json")));
};

const PipelineResult& result() {
  static const PipelineResult r = [] {
    Fixture f;
    return run_pipeline(f.x, f.y, f.cfg);
  }();
  return r;
}

}  // namespace

TEST_CASE("the seed encoded in the reference parametrization of X reproduces the reference double quadric") {
  Fixture f;
  QuadricFamily fam = quadric_family(f.x, {2, 4, 7, 3});
  RatFunc ratio = fam.branch / printed()("x_tilde");
  CHECK(ratio == RatFunc(ratio.ring(), BigRat(-1)));
}

TEST_CASE("the seed named by the seed lines differs from the reference double quadric") {
  Fixture f;
  RatFunc ratio = result().x_family.branch / printed()("x_tilde");
  CHECK_FALSE(free_of(ratio, kFiber));
}

TEST_CASE("double quadric family of Y up to a constant") {
  RatFunc ratio = result().y_family.branch / printed()("y_tilde");
  REQUIRE(free_of(ratio, kFiber));
  CHECK(ratio == parse_ratfunc("-1/(A0^2*A1^2)", ratio.ring()));
}

TEST_CASE("node models up to sign") {
  RatFunc rx = result().x_node.model / printed()("x_node");
  RatFunc ry = result().y_node.model / printed()("y_node");
  CHECK(rx == RatFunc(rx.ring(), BigRat(-1)));
  CHECK(ry == RatFunc(ry.ring(), BigRat(-1)));
}

TEST_CASE("root quadruples as sets") {
  auto same_set = [](const std::array<RatFunc, 4>& a, const std::array<RatFunc, 4>& b) {
    for (const auto& r : a) {
      if (std::none_of(b.begin(), b.end(), [&](const RatFunc& s) { return s == r; })) return false;
    }
    return true;
  };
  CHECK(same_set(result().x_roots, printed().quadruple("quadr35")));
  CHECK(same_set(result().y_roots, printed().quadruple("quadr71")));
}

TEST_CASE("cross-ratios lie in the reference orbits") {
  CHECK(orbit_position(result().x_cross_ratio, printed()("cr35")).has_value());
  CHECK(orbit_position(result().y_cross_ratio, printed()("cr71")).has_value());
  // the bridge substitution carries one orbit onto the other
  const auto& sub = printed().j.at("bridge");
  std::map<std::string, RatFunc> sigma;
  for (auto it = sub.begin(); it != sub.end(); ++it)
    sigma.emplace(it.key(), parse_ratfunc(it.value().get<std::string>(), printed().ring));
  CHECK(orbit_position(printed()("cr35"), printed()("cr71").substitute(sigma)).has_value());
}

TEST_CASE("the matched Möbius transform gives the reference fiber map") {
  const auto& r = result();
  CHECK(r.match.candidates == 4);
  CHECK(r.match.alternatives.size() == 4);
  CHECK(r.fiber_map == printed()("t0_map"));
}

TEST_CASE("the composite is the theorem map up to scaling and verifies") {
  const auto& r = result();
  CHECK(r.certification.status == CertStatus::Verified);
  for (const auto& [name, step] : r.steps) {
    CAPTURE(name);
    CHECK(step.multiplier.has_value());
  }
  DoubleCoverMap thm = load_map(data("maps/X_to_Y.json"));
  auto h = projectively_equivalent(r.composite, thm);
  REQUIRE(h.has_value());
  DoubleCoverMap corrected = load_map(data("maps/X_to_Y_corrected.json"));
  SqrtScalar expect = *corrected.multiplier * SqrtScalar(h->pow(4));
  CHECK(*r.composite.multiplier == expect);
}

TEST_CASE("other Möbius solutions give maps that are not the theorem map") {
  Fixture f;
  DoubleCoverMap thm = load_map(data("maps/X_to_Y.json"));
  for (std::size_t k : {0u, 2u, 3u}) {
    f.cfg.mobius_choice = k;
    PipelineResult r = run_pipeline(f.x, f.y, f.cfg);
    CHECK(r.certification.status == CertStatus::Verified);
    CHECK_FALSE(projectively_equivalent(r.composite, thm).has_value());
  }
  f.cfg.mobius_choice = 9;
  CHECK_THROWS_AS(run_pipeline(f.x, f.y, f.cfg), DegenerateInput);
}

TEST_CASE("the reference fiber map can be supplied directly") {
  Fixture f;
  f.cfg.fiber_map = printed().j.at("t0_map").get<std::string>();
  PipelineResult r = run_pipeline(f.x, f.y, f.cfg);
  CHECK(r.certification.status == CertStatus::Verified);
}

TEST_CASE("the seed of the reference double quadric admits no bridge") {
  Fixture f;
  f.cfg.x_seed = {2, 4, 7, 3};
  CHECK_THROWS_AS(run_pipeline(f.x, f.y, f.cfg), NoMatch);
}

TEST_CASE("cancelled pipeline") {
  Fixture f;
  CancelToken t;
  t.cancel();
  CHECK_THROWS_AS(run_pipeline(f.x, f.y, f.cfg, &t), Cancelled);
}

TEST_CASE("certification of the reference maps") {
  auto cover = [](const char* n) { return load_cover(data(n)); };
  auto check = [&](const char* map, const char* src, const char* tgt) {
    return verify(load_map(data(map)), cover(src).factors, cover(tgt).factors);
  };
  CHECK(check("maps/no35_to_X.json", "no35.json", "famX.json").status == CertStatus::Verified);
  CHECK(check("maps/no71_to_Y.json", "no71.json", "famY.json").status == CertStatus::Verified);
  Certification fwd = check("maps/X_to_Y.json", "famX.json", "famY.json");
  Certification inv = check("maps/Y_to_X.json", "famY.json", "famX.json");
  CHECK(fwd.status == CertStatus::TwistMismatch);
  CHECK(inv.status == CertStatus::TwistMismatch);
  CHECK(fwd.residual_twist.to_string() == "A0");
  CHECK(inv.residual_twist.to_string() == "A0");
  CHECK(check("maps/X_to_Y_corrected.json", "famX.json", "famY.json").status == CertStatus::Verified);
  CHECK(check("maps/Y_to_X_corrected.json", "famY.json", "famX.json").status == CertStatus::Verified);
  CHECK(check("maps/Xt_to_X.json", "Xt.json", "famX.json").status == CertStatus::TwistMismatch);
  CHECK(check("maps/Yt_to_Y.json", "Yt.json", "famY.json").status == CertStatus::Failed);
}

TEST_CASE("round trips of the theorem maps are the identity up to scaling") {
  for (auto [fwd, inv] : {std::pair{"maps/X_to_Y.json", "maps/Y_to_X.json"},
                          std::pair{"maps/X_to_Y_corrected.json", "maps/Y_to_X_corrected.json"}}) {
    CAPTURE(fwd);
    DoubleCoverMap back = compose(load_map(data(inv)), load_map(data(fwd)));
    DoubleCoverMap id = DoubleCoverMap::identity({"x", "y", "z", "t"}, {"A0", "A1"});
    auto h = projectively_equivalent(back, id);
    REQUIRE(h.has_value());
    CHECK(*back.multiplier == SqrtScalar(h->pow(4)));
  }
}
