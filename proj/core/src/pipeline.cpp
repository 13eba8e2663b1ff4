#include "dofib/pipeline.hpp"

#include <tuple>

#include <json.hpp>

#include "dofib/errors.hpp"
#include "dofib/parse.hpp"

namespace dofib {

namespace {

RatFunc var(const RingPtr& r, const std::string& n) { return RatFunc(Poly::variable(r, n)); }

RingPtr ring_of(const std::vector<std::string>& coords, const std::vector<std::string>& params) {
  std::vector<std::string> all = coords;
  all.insert(all.end(), params.begin(), params.end());
  return make_ring(all);
}

void keep_params(DoubleCoverMap& m, const RingPtr& r) {
  for (const auto& p : m.target_params) m.components.emplace(p, var(r, p));
}

std::vector<std::string> coords_of(const OcticArrangement& a) { return {a.vars().begin(), a.vars().end()}; }

const std::vector<std::string> kQuadric{"p0", "p1", "q0", "q1", "l"};

std::vector<std::string> node_coords(NodeChart chart) {
  return chart == NodeChart::P0Q1 ? std::vector<std::string>{"p0", "p1", "l", "t0", "t1"}
                                  : std::vector<std::string>{"q0", "q1", "l", "t0", "t1"};
}

NodeChart parse_chart(const std::string& s) {
  if (s == "P0Q1") return NodeChart::P0Q1;
  if (s == "P1Q0") return NodeChart::P1Q0;
  throw ParseError("chart must be P0Q1 or P1Q0, got " + s);
}

std::optional<std::array<RatFunc, 4>> scales_in(const std::optional<std::array<std::string, 4>>& s,
                                                const RingPtr& r) {
  if (!s) return std::nullopt;
  std::array<RatFunc, 4> out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = parse_ratfunc((*s)[i], r);
  return out;
}

std::array<RatFunc, 4> four_roots(const NodeEllipticFibration& n, const std::string& v) {
  std::vector<RatFunc> r = roots_in(n.factors, v);
  if (r.size() != 4) {
    throw DegenerateFibration("the node model has " + std::to_string(r.size()) + " roots in " + v + ", expected 4");
  }
  return {r[0], r[1], r[2], r[3]};
}

}  // namespace

DoubleCoverMap quadric_parametrization(const OcticArrangement& arr, const QuadricFamily& f) {
  DoubleCoverMap m;
  m.source_coords = kQuadric;
  m.source_params = m.target_params = arr.params();
  m.target_coords = coords_of(arr);
  const RingPtr r = ring_of(m.source_coords, m.source_params);
  const RatFunc p0 = var(r, "p0"), p1 = var(r, "p1"), q0 = var(r, "q0"), q1 = var(r, "q1"), l = var(r, "l");
  const std::array<RatFunc, 4> point{p0 * q0, p0 * q1, p1 * q0, l * p1 * q1};
  const auto& M = f.change.matrix();
  for (std::size_t i = 0; i < 4; ++i) {
    RatFunc acc{Poly(r)};
    for (std::size_t j = 0; j < 4; ++j) acc += M[i][j].in_ring(r) * point[j];
    m.components.emplace(m.target_coords[i], acc);
  }
  keep_params(m, r);
  return m;
}

DoubleCoverMap quadric_inverse(const OcticArrangement& arr, const QuadricFamily& f) {
  DoubleCoverMap m;
  m.source_coords = coords_of(arr);
  m.source_params = m.target_params = arr.params();
  m.target_coords = kQuadric;
  const RingPtr r = ring_of(m.source_coords, m.source_params);
  std::array<RatFunc, 4> x;
  for (std::size_t i = 0; i < 4; ++i) x[i] = var(r, m.source_coords[i]);
  const auto n = f.change.map_point(x);
  m.components.emplace("p0", n[0]);
  m.components.emplace("p1", n[2]);
  m.components.emplace("q0", n[0]);
  m.components.emplace("q1", n[1]);
  m.components.emplace("l", n[0] * n[3] / (n[1] * n[2]));
  keep_params(m, r);
  return m;
}

DoubleCoverMap node_to_quadric(const QuadricFamily& f, NodeChart chart) {
  DoubleCoverMap m;
  m.source_coords = node_coords(chart);
  m.source_params = m.target_params = f.normalized.params();
  m.target_coords = kQuadric;
  const RingPtr r = ring_of(m.source_coords, m.source_params);
  const RatFunc t0 = var(r, "t0"), t1 = var(r, "t1");
  if (chart == NodeChart::P0Q1) {
    m.components.emplace("p0", var(r, "p0"));
    m.components.emplace("p1", var(r, "p1"));
    m.components.emplace("q0", var(r, "p1") * t1);
    m.components.emplace("q1", var(r, "p0") * t0);
  } else {
    m.components.emplace("q0", var(r, "q0"));
    m.components.emplace("q1", var(r, "q1"));
    m.components.emplace("p0", var(r, "q1") * t1);
    m.components.emplace("p1", var(r, "q0") * t0);
  }
  m.components.emplace("l", var(r, "l"));
  keep_params(m, r);
  return m;
}

DoubleCoverMap quadric_to_node(const QuadricFamily& f, NodeChart chart) {
  DoubleCoverMap m;
  m.source_coords = kQuadric;
  m.source_params = m.target_params = f.normalized.params();
  m.target_coords = node_coords(chart);
  const RingPtr r = ring_of(m.source_coords, m.source_params);
  const RatFunc p0 = var(r, "p0"), p1 = var(r, "p1"), q0 = var(r, "q0"), q1 = var(r, "q1");
  if (chart == NodeChart::P0Q1) {
    // t0 : t1 = q1/p0 : q0/p1
    m.components.emplace("p0", p0);
    m.components.emplace("p1", p1);
    m.components.emplace("t0", q1 * p1);
    m.components.emplace("t1", q0 * p0);
  } else {
    // t0 : t1 = p1/q0 : p0/q1
    m.components.emplace("q0", q0);
    m.components.emplace("q1", q1);
    m.components.emplace("t0", p1 * q1);
    m.components.emplace("t1", p0 * q0);
  }
  m.components.emplace("l", var(r, "l"));
  keep_params(m, r);
  return m;
}

DoubleCoverMap with_derived_multiplier(DoubleCoverMap m, const std::vector<RatFunc>& source_factors,
                                       const std::vector<RatFunc>& target_factors) {
  m.multiplier.reset();
  Certification c = verify(m, source_factors, target_factors);
  if (c.status == CertStatus::Failed) {
    throw DegenerateInput("the pullback ratio is not a square: " + c.note);
  }
  m.multiplier = c.root;
  return m;
}

BridgeConfig parse_bridge(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  BridgeConfig c;
  try {
    auto seed = [&](const char* k) {
      auto v = j.at(k).get<std::vector<std::size_t>>();
      if (v.size() != 4) throw ParseError(std::string(k) + " needs four plane indices");
      return std::array<std::size_t, 4>{v[0], v[1], v[2], v[3]};
    };
    auto scales = [&](const char* k) -> std::optional<std::array<std::string, 4>> {
      if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
      auto v = j.at(k).get<std::vector<std::string>>();
      if (v.size() != 4) throw ParseError(std::string(k) + " needs four expressions");
      return std::array<std::string, 4>{v[0], v[1], v[2], v[3]};
    };
    c.x_seed = seed("x_seed");
    c.y_seed = seed("y_seed");
    c.x_scales = scales("x_scales");
    c.y_scales = scales("y_scales");
    c.x_chart = parse_chart(j.value("x_chart", std::string("P0Q1")));
    c.y_chart = parse_chart(j.value("y_chart", std::string("P1Q0")));
    c.substitution = j.at("substitution").get<std::map<std::string, std::string>>();
    c.fiber = j.value("fiber", c.fiber);
    c.fiber_other = j.value("fiber_other", c.fiber_other);
    c.mobius_choice = j.value("mobius_choice", std::size_t{0});
    if (j.contains("fiber_map")) c.fiber_map = j.at("fiber_map").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad bridge file: ") + e.what());
  }
  return c;
}

PipelineResult run_pipeline(const OcticArrangement& x, const OcticArrangement& y, const BridgeConfig& cfg,
                            const CancelToken* cancel) {
  auto poll = [&] {
    if (cancel) cancel->check();
  };
  QuadricFamily fx = quadric_family(x, cfg.x_seed, scales_in(cfg.x_scales, x.ring()));
  QuadricFamily fy = quadric_family(y, cfg.y_seed, scales_in(cfg.y_scales, y.ring()));
  NodeEllipticFibration nx = node_elliptic(fx, cfg.x_chart);
  NodeEllipticFibration ny = node_elliptic(fy, cfg.y_chart);
  poll();

  const auto xr = four_roots(nx, cfg.fiber);
  const auto yr = four_roots(ny, cfg.fiber);
  auto pt = [](const RatFunc& v) { return ProjPoint::value(v); };
  RatFunc xc = cross_ratio({pt(xr[0]), pt(xr[1]), pt(xr[2]), pt(xr[3])});
  RatFunc yc = cross_ratio({pt(yr[0]), pt(yr[1]), pt(yr[2]), pt(yr[3])});

  // Bridge between the node pencils: the supplied substitution on the base,
  // the Möbius solution on the fiber.
  const std::vector<std::string> xn = node_coords(cfg.x_chart), yn = node_coords(cfg.y_chart);
  const RingPtr br = ring_of(xn, x.params());
  const RingPtr sub_ring = unite(br, ring_of(kQuadric, {}));
  std::map<std::string, RatFunc> sigma;
  for (const auto& [k, v] : cfg.substitution) sigma.emplace(k, parse_ratfunc(v, sub_ring));
  QuadrupleMatch match = match_quadruples(xr, yr, sigma);
  poll();
  const RatFunc w = var(br, cfg.fiber);
  if (cfg.mobius_choice >= match.alternatives.size()) {
    throw DegenerateInput("mobius_choice " + std::to_string(cfg.mobius_choice) + " out of range (" +
                          std::to_string(match.alternatives.size()) + " solutions)");
  }
  std::tie(match.permutation, match.mobius) = match.alternatives[cfg.mobius_choice];
  const RatFunc fiber_map =
      cfg.fiber_map ? parse_ratfunc(*cfg.fiber_map, br) : match.mobius.inverse().apply(w);

  DoubleCoverMap bridge;
  bridge.source_coords = xn;
  bridge.source_params = x.params();
  bridge.target_coords = yn;
  bridge.target_params = y.params();
  for (const auto& n : yn) {
    if (n == cfg.fiber) {
      bridge.components.emplace(n, fiber_map);
    } else if (auto it = sigma.find(n); it != sigma.end()) {
      bridge.components.emplace(n, it->second.in_ring(br));
    } else {
      bridge.components.emplace(n, var(br, n));
    }
  }
  for (const auto& n : y.params()) {
    auto it = sigma.find(n);
    bridge.components.emplace(n, it != sigma.end() ? it->second.in_ring(br) : var(br, n));
  }

  const auto xf = branch_factors(x), yf = branch_factors(y);
  PipelineResult out{fx, fy, nx, ny, xr, yr, xc, yc, match, fiber_map, {}, {}, {}};
  out.steps.emplace_back("X -> double quadrics", with_derived_multiplier(quadric_inverse(x, fx), xf, fx.factors));
  poll();
  out.steps.emplace_back("double quadrics -> node pencil",
                         with_derived_multiplier(quadric_to_node(fx, cfg.x_chart), fx.factors, nx.factors));
  poll();
  out.steps.emplace_back("node pencil bridge", with_derived_multiplier(bridge, nx.factors, ny.factors));
  poll();
  out.steps.emplace_back("node pencil -> double quadrics",
                         with_derived_multiplier(node_to_quadric(fy, cfg.y_chart), ny.factors, fy.factors));
  poll();
  out.steps.emplace_back("double quadrics -> Y",
                         with_derived_multiplier(quadric_parametrization(y, fy), fy.factors, yf));
  poll();

  DoubleCoverMap acc = out.steps.front().second;
  for (std::size_t i = 1; i < out.steps.size(); ++i) {
    acc = compose(out.steps[i].second, acc, cancel);
  }
  out.composite = primitive_coordinates(acc);
  out.certification = verify(out.composite, xf, yf, cancel);
  return out;
}

}  // namespace dofib
