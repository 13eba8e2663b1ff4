#include "commands.hpp"

#include <algorithm>
#include <set>
#include <thread>

#include "dofib/elliptic.hpp"
#include "dofib/errors.hpp"
#include "dofib/gcd.hpp"
#include "dofib/io.hpp"
#include "dofib/k3fib.hpp"
#include "dofib/parse.hpp"
#include "dofib/pipeline.hpp"

namespace dofib::cli {

namespace {

// ---------------------------------------------------------------- inputs

const std::string& file(const Options& o, std::size_t i) {
  if (i >= o.files.size()) throw ParseError(o.command + " needs " + std::to_string(i + 1) + " input files");
  return o.files[i];
}

std::map<std::string, BigRat> specialization(const Options& o) {
  std::map<std::string, BigRat> out;
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("--set expects NAME=VALUE, got '" + s + "'");
    BigRat v;
    if (v.set_str(s.substr(eq + 1), 10) != 0) throw ParseError("--set value is not a rational: '" + s + "'");
    v.canonicalize();
    out[s.substr(0, eq)] = v;
  }
  return out;
}

OcticArrangement arrangement(const Options& o, std::size_t i = 0) {
  OcticArrangement a = load_arrangement(file(o, i));
  auto values = specialization(o);
  for (const auto& [name, v] : values) {
    if (std::find(a.params().begin(), a.params().end(), name) == a.params().end()) {
      throw ParseError("--set names '" + name + "', which is not a parameter of " + a.label());
    }
  }
  return values.empty() ? a : a.specialize(values);
}

std::size_t seed_index(const Options& o, std::size_t count, const char* what) {
  if (!o.seed) throw BadSeed(o.command + " needs --seed N (" + std::to_string(count) + " " + what + ")");
  if (*o.seed >= count) {
    throw BadSeed("--seed " + std::to_string(*o.seed) + " out of range: " + std::to_string(count) + " " + what);
  }
  return *o.seed;
}

// ---------------------------------------------------------------- report pieces

Json text(const RatFunc& f) { return f.to_string(); }
Json text(const Poly& p) { return p.to_string(); }

template <class C>
Json texts(const C& fs) {
  Json out = Json::array();
  for (const auto& f : fs) out.push_back(text(f));
  return out;
}

template <class C>
Json indices(const C& c) {
  Json out = Json::array();
  for (auto v : c) out.push_back(v);
  return out;
}

Json planes_of(const OcticArrangement& a) {
  Json out = Json::array();
  for (std::size_t k = 0; k < a.planes().size(); ++k) out.push_back(text(a.plane_expression(k)));
  return out;
}

Json arrangement_json(const OcticArrangement& a) {
  Json j;
  j["label"] = a.label();
  j["variables"] = a.vars();
  j["parameters"] = a.params();
  if (!(a.scale() == RatFunc(a.ring(), BigRat(1)))) j["scale"] = text(a.scale());
  j["planes"] = planes_of(a);
  return j;
}

Json normalized_json(const Normalized& n) {
  Json j;
  j["plane_order"] = indices(n.order);
  Json m = Json::array();
  for (const auto& row : n.change.matrix()) m.push_back(texts(row));
  j["change"] = m;
  j["arrangement"] = arrangement_json(n.arrangement);
  return j;
}

Json model_json(const WeierstrassModel& m, const WeierstrassInvariants* known = nullptr) {
  Json j;
  j["base"] = m.base;
  j["f6"] = text(m.f6);
  j["f12"] = text(m.f12);
  j["f18"] = text(m.f18);
  const WeierstrassInvariants inv = known ? *known : m.invariants();
  j["discriminant"] = text(inv.disc);
  j["J"] = text(inv.J);
  return j;
}

Json conditions_json(const std::vector<Poly>& cs) {
  Json out = Json::array();
  for (const auto& f : coprime_base(cs)) out.push_back(f.to_string());
  return out;
}

Json certification_json(const Certification& c, bool timing) {
  Json j;
  j["status"] = to_string(c.status);
  j["multiplier"] = c.root.to_string();
  j["square_factor"] = text(c.square_factor);
  j["residual_twist"] = text(c.residual_twist);
  j["sign_flipped"] = c.sign_flipped;
  if (!c.note.empty()) j["note"] = c.note;
  if (timing) j["seconds"] = c.seconds;
  return j;
}

Json map_json(const DoubleCoverMap& m) { return Json::parse(map_to_json(m)); }

std::array<std::size_t, 4> quad(const std::vector<std::size_t>& v, const char* what) {
  if (v.size() != 4) throw ParseError(std::string(what) + " needs four plane indices");
  return {v[0], v[1], v[2], v[3]};
}

std::optional<std::array<RatFunc, 4>> scales(const Options& o, const RingPtr& r) {
  if (o.scales.empty()) return std::nullopt;
  if (o.scales.size() != 4) throw ParseError("--scales needs four expressions");
  return std::array<RatFunc, 4>{parse_ratfunc(o.scales[0], r), parse_ratfunc(o.scales[1], r),
                                parse_ratfunc(o.scales[2], r), parse_ratfunc(o.scales[3], r)};
}

NodeChart chart(const std::string& s) {
  if (s == "P0Q1") return NodeChart::P0Q1;
  if (s == "P1Q0") return NodeChart::P1Q0;
  throw ParseError("--chart must be P0Q1 or P1Q0");
}

// Census seed from --planes, or the --seed-th census entry.
std::array<std::size_t, 4> quadric_seed(const Options& o, const OcticArrangement& a) {
  if (!o.planes.empty()) return quad(o.planes, "--planes");
  Census c = fibration_census(a, false);
  return c.entries[seed_index(o, c.entries.size(), "census seeds")].seed;
}

Json quadric_json(const QuadricFamily& f) {
  Json j;
  j["seed"] = indices(f.seed);
  j["factors"] = texts(f.factors);
  j["branch"] = text(f.branch);
  return j;
}

struct PointSeed {
  IncidenceReport rep;
  FibrationSeeds seeds;
  std::size_t index = 0;  // into rep.points
  const IncidencePoint& point() const { return rep.points[index]; }
};

PointSeed point_seed(const Options& o, const OcticArrangement& a) {
  PointSeed p{analyze(a), {}, 0};
  p.seeds = find_fibration_seeds(a, p.rep);
  p.index = p.seeds.points[seed_index(o, p.seeds.points.size(), "point seeds")];
  return p;
}

WeierstrassModel point_model(const Normalized& n, std::size_t multiplicity) {
  return multiplicity == 5 ? from_fivefold(n.arrangement) : from_fourfold(n.arrangement);
}

}  // namespace

// ---------------------------------------------------------------- commands

Outcome cmd_analyze(const Options& o) {
  OcticArrangement a = arrangement(o);
  IncidenceReport rep = analyze(a, o.strict);
  Json j;
  j["arrangement"] = arrangement_json(a);
  j["admissible"] = rep.admissible;
  Json points = Json::array();
  for (const auto& p : rep.points) {
    points.push_back({{"multiplicity", p.multiplicity()}, {"planes", indices(p.planes)}, {"point", texts(p.coords)}});
  }
  Json lines = Json::array();
  for (const auto& l : rep.lines) lines.push_back({{"multiplicity", l.multiplicity()}, {"planes", indices(l.planes)}});
  auto count = [](const auto& v, std::size_t m) {
    return std::count_if(v.begin(), v.end(), [m](const auto& e) { return e.multiplicity() == m; });
  };
  j["counts"] = {{"points", rep.points.size()},
                 {"triple_points", count(rep.points, 3)},
                 {"fourfold_points", count(rep.points, 4)},
                 {"fivefold_points", count(rep.points, 5)},
                 {"lines", rep.lines.size()},
                 {"double_lines", count(rep.lines, 2)},
                 {"triple_lines", count(rep.lines, 3)}};
  j["points"] = points;
  j["lines"] = lines;
  j["genericity_conditions"] = conditions_json(rep.conditions);
  return {j};
}

Outcome cmd_seeds(const Options& o) {
  OcticArrangement a = arrangement(o);
  IncidenceReport rep = analyze(a);
  FibrationSeeds s = find_fibration_seeds(a, rep);
  Json j;
  Json points = Json::array();
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& p = rep.points[s.points[i]];
    points.push_back({{"seed", i}, {"multiplicity", p.multiplicity()}, {"planes", indices(p.planes)}});
  }
  Json skew = Json::array();
  for (std::size_t i = 0; i < s.skew_pairs.size(); ++i) {
    skew.push_back({{"seed", i},
                    {"first", indices(rep.lines[s.skew_pairs[i].first].planes)},
                    {"second", indices(rep.lines[s.skew_pairs[i].second].planes)}});
  }
  Json pairs = Json::array();
  for (std::size_t i = 0; i < s.point_pairs.size(); ++i) {
    const auto& pp = s.point_pairs[i];
    pairs.push_back({{"seed", i}, {"first", indices(pp.quad1)}, {"second", indices(pp.quad2)}});
  }
  Json lines = Json::array();
  for (std::size_t i = 0; i < s.lines.size(); ++i) {
    const auto& l = rep.lines[s.lines[i]];
    lines.push_back({{"seed", i}, {"multiplicity", l.multiplicity()}, {"planes", indices(l.planes)}});
  }
  j["counts"] = {{"points", s.points.size()},
                 {"skew_pairs", s.skew_pairs.size()},
                 {"point_pairs", s.point_pairs.size()},
                 {"lines", s.lines.size()}};
  j["points"] = points;
  j["skew_pairs"] = skew;
  j["point_pairs"] = pairs;
  j["lines"] = lines;
  return {j};
}

Outcome cmd_elliptic_point(const Options& o) {
  OcticArrangement a = arrangement(o);
  PointSeed p = point_seed(o, a);
  Normalized n = normalize_point(a, p.point());
  Json j;
  j["point"] = {{"planes", indices(p.point().planes)}, {"coordinates", texts(p.point().coords)}};
  j["normalized"] = normalized_json(n);
  j["model"] = model_json(point_model(n, p.point().multiplicity()));
  return {j};
}

Outcome cmd_elliptic_skew(const Options& o) {
  OcticArrangement a = arrangement(o);
  IncidenceReport rep = analyze(a);
  FibrationSeeds s = find_fibration_seeds(a, rep);
  const auto& pair = s.skew_pairs[seed_index(o, s.skew_pairs.size(), "skew line pairs")];
  const auto& l1 = rep.lines[pair.first].planes;
  const auto& l2 = rep.lines[pair.second].planes;
  Normalized n = normalize_skew_lines(a, {l1[0], l1[1], l2[0], l2[1]});
  Json j;
  j["lines"] = {indices(l1), indices(l2)};
  j["normalized"] = normalized_json(n);
  j["model"] = model_json(from_skew_lines(n.arrangement));
  return {j};
}

Outcome cmd_kummer(const Options& o) {
  OcticArrangement a = arrangement(o);
  IncidenceReport rep = analyze(a);
  FibrationSeeds s = find_fibration_seeds(a, rep);
  const auto& pp = s.point_pairs[seed_index(o, s.point_pairs.size(), "point pairs")];
  Normalized n = normalize_point_pair(a, rep.points[pp.first], rep.points[pp.second], pp.quad1, pp.quad2);
  KummerFibration k = kummer(n.arrangement);
  Json j;
  j["quadruples"] = {indices(pp.quad1), indices(pp.quad2)};
  j["normalized"] = normalized_json(n);
  j["S1_branch"] = text(k.s1_branch);
  j["S2_branch"] = text(k.s2_branch);
  j["pencil"] = k.pencil;
  j["quotient"] = k.quotient;
  return {j};
}

Outcome cmd_sextic(const Options& o) {
  OcticArrangement a = arrangement(o);
  IncidenceReport rep = analyze(a);
  FibrationSeeds s = find_fibration_seeds(a, rep);
  const auto& line = rep.lines[s.lines[seed_index(o, s.lines.size(), "lines")]];
  SexticFamily f = sextic_family(a, line.planes[0], line.planes[1]);
  Json j;
  j["line"] = {{"planes", indices(line.planes)}, {"multiplicity", line.multiplicity()}};
  j["normalized"] = arrangement_json(f.normalized);
  j["parameter"] = f.parameter;
  j["lines"] = texts(f.lines);
  j["fiber_branch"] = text(f.fiber_branch);
  j["fiber_at_infinity"] = text(f.fiber_at_infinity);
  Json special = Json::array();
  for (const auto& sf : sextic_special_fibers(f)) {
    Json roots = Json::array();
    for (const auto& r : sf.rational_roots) roots.push_back(r.get_str());
    special.push_back(
        {{"kind", sf.kind}, {"lines", indices(sf.lines)}, {"condition", text(sf.condition)}, {"rational_roots", roots}});
  }
  j["special_fibers"] = special;
  return {j};
}

Outcome cmd_quadric(const Options& o) {
  OcticArrangement a = arrangement(o);
  QuadricFamily f = quadric_family(a, quadric_seed(o, a), scales(o, a.ring()));
  Json j = quadric_json(f);
  j["normalized"] = arrangement_json(f.normalized);
  return {j};
}

Outcome cmd_node_elliptic(const Options& o) {
  OcticArrangement a = arrangement(o);
  QuadricFamily f = quadric_family(a, quadric_seed(o, a), scales(o, a.ring()));
  NodeEllipticFibration n = node_elliptic(f, chart(o.chart));
  Json j;
  j["quadric"] = quadric_json(f);
  j["chart"] = o.chart;
  j["fiber_coordinates"] = n.fiber;
  j["factors"] = texts(n.factors);
  j["model"] = text(n.model);
  j["square"] = text(n.square);
  return {j};
}

Outcome cmd_census(const Options& o) {
  OcticArrangement a = arrangement(o);
  Census c = fibration_census(a, false);
  // Seeds are independent; each worker fills its own slots.
  const std::size_t workers = std::max<std::size_t>(1, std::min(o.threads, c.entries.size()));
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < c.entries.size(); i += workers) {
          c.entries[i].branch = quadric_family(a, c.entries[i].seed).branch;
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  Json j;
  j["fibrations"] = c.entries.size();
  j["skew_line_pairs"] = c.skew_line_pairs;
  Json entries = Json::array();
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    entries.push_back({{"seed", i}, {"planes", indices(c.entries[i].seed)}, {"branch", text(c.entries[i].branch)}});
  }
  j["entries"] = entries;
  j["genericity_conditions"] = conditions_json(c.conditions);
  return {j};
}

Outcome cmd_kodaira(const Options& o) {
  OcticArrangement a = arrangement(o);
  PointSeed p = point_seed(o, a);
  Normalized n = normalize_point(a, p.point());
  WeierstrassModel m = point_model(n, p.point().multiplicity());
  // Candidate lines: the planes through the point, and differences of the
  // other planes' base parts (their t-coefficient is 1).
  const auto& na = n.arrangement;
  const RingPtr& r = na.ring();
  const std::size_t mult = p.point().multiplicity();
  const WeierstrassInvariants inv = m.invariants();
  std::vector<Poly> candidates;
  for (std::size_t k = 0; k < mult; ++k) candidates.push_back(na.plane_expression(k).num());
  for (std::size_t i = mult; i < 8; ++i)
    for (std::size_t k = i + 1; k < 8; ++k) candidates.push_back((na.plane_expression(i) - na.plane_expression(k)).num());
  std::vector<Poly> lines;
  for (auto& c : candidates) {
    Poly prim = c.in_ring(r).primitive();
    if (prim.is_constant()) continue;
    // Drop a content in the parameters so the line is a prime of the base.
    Poly content(r);
    for (const auto& v : m.base) {
      if (auto i = r->index_of(v); i && prim.degree(*i) == 1) content = gcd(content, prim.coefficients_in(*i)[1]);
    }
    if (!content.is_constant()) prim = prim.exact_quotient(content).primitive();
    bool seen = false;
    for (const auto& l : lines) seen = seen || l == prim;
    if (!seen) lines.push_back(prim);
  }
  Json fibers = Json::array();
  std::uint32_t accounted = 0;
  for (const auto& l : lines) {
    KodairaFiber k = kodaira_along(inv, l, m.base);
    accounted += static_cast<std::uint32_t>(k.v_disc);
    fibers.push_back({{"line", text(l)}, {"type", k.type}, {"v_c4", k.v_c4}, {"v_c6", k.v_c6}, {"v_disc", k.v_disc}});
  }
  // Degree of the discriminant in the base against the degree the listed lines explain.
  const Poly disc = inv.disc.num();
  std::vector<std::size_t> base_vars;
  for (const auto& v : m.base) {
    if (auto i = disc.ring()->index_of(v)) base_vars.push_back(*i);
  }
  Json j;
  j["point"] = {{"planes", indices(p.point().planes)}, {"multiplicity", mult}};
  j["model"] = model_json(m, &inv);
  j["fibers"] = fibers;
  if (auto deg = disc.homogeneous_degree(base_vars)) {
    j["discriminant_degree"] = *deg;
    j["accounted_degree"] = accounted;
  }
  return {j};
}

Outcome cmd_verify_map(const Options& o) {
  DoubleCoverMap m = load_map(file(o, 0));
  DoubleCover src = load_cover(file(o, 1)), tgt = load_cover(file(o, 2));
  Certification c = verify(m, src.factors, tgt.factors);
  Json j;
  j["source"] = src.label;
  j["target"] = tgt.label;
  j["certification"] = certification_json(c, o.timing);
  return {j, c.status == CertStatus::Verified};
}

Outcome cmd_match(const Options& o) {
  const Json in = [&] {
    try {
      return Json::parse(read_file(file(o, 0)));
    } catch (const Json::exception& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what());
    }
  }();
  std::vector<std::string> vars;
  std::array<std::string, 4> qa, qb;
  std::map<std::string, std::string> sub;
  try {
    vars = in.at("variables").get<std::vector<std::string>>();
    auto a = in.at("qA").get<std::vector<std::string>>(), b = in.at("qB").get<std::vector<std::string>>();
    if (a.size() != 4 || b.size() != 4) throw ParseError("qA and qB need four entries");
    std::copy(a.begin(), a.end(), qa.begin());
    std::copy(b.begin(), b.end(), qb.begin());
    if (in.contains("substitution")) sub = in.at("substitution").get<std::map<std::string, std::string>>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad match file: ") + e.what());
  }
  const RingPtr r = make_ring(vars);
  std::array<RatFunc, 4> a, b;
  for (int i = 0; i < 4; ++i) {
    a[i] = parse_ratfunc(qa[i], r);
    b[i] = parse_ratfunc(qb[i], r);
  }
  std::map<std::string, RatFunc> sigma;
  for (const auto& [k, v] : sub) sigma.emplace(k, parse_ratfunc(v, r));
  QuadrupleMatch m = match_quadruples(a, b, sigma);
  Json j;
  j["cross_ratio"] = text(cross_ratio({ProjPoint::value(a[0]), ProjPoint::value(a[1]), ProjPoint::value(a[2]),
                                       ProjPoint::value(a[3])}));
  j["substituted"] = texts(m.substituted);
  j["candidates"] = m.candidates;
  Json sols = Json::array();
  for (const auto& [perm, mob] : m.alternatives) {
    sols.push_back({{"permutation", indices(perm)},
                    {"mobius", {text(mob.a()), text(mob.b()), text(mob.c()), text(mob.d())}}});
  }
  j["solutions"] = sols;
  return {j};
}

Outcome cmd_compose(const Options& o) {
  if (o.files.empty()) throw ParseError("compose needs at least one map");
  DoubleCoverMap acc = load_map(o.files[0]);
  for (std::size_t i = 1; i < o.files.size(); ++i) acc = compose(load_map(o.files[i]), acc);
  // Same map projectively; dropping the common factor keeps verification cheap.
  acc = primitive_coordinates(acc);
  Json j = map_json(acc);
  if (o.source.empty() != o.target.empty()) throw ParseError("--source and --target go together");
  if (o.source.empty()) return {j};
  Certification c = verify(acc, load_cover(o.source).factors, load_cover(o.target).factors);
  j["certification"] = certification_json(c, o.timing);
  return {j, c.status == CertStatus::Verified};
}

Outcome cmd_pipeline(const Options& o) {
  OcticArrangement x = arrangement(o, 0), y = arrangement(o, 1);
  BridgeConfig cfg = parse_bridge(read_file(file(o, 2)));
  PipelineResult r = run_pipeline(x, y, cfg);
  auto node = [](const NodeEllipticFibration& n, NodeChart c) {
    return Json{{"chart", c == NodeChart::P0Q1 ? "P0Q1" : "P1Q0"}, {"factors", texts(n.factors)}, {"model", text(n.model)}};
  };
  Json j;
  j["x_family"] = quadric_json(r.x_family);
  j["y_family"] = quadric_json(r.y_family);
  j["x_node"] = node(r.x_node, cfg.x_chart);
  j["y_node"] = node(r.y_node, cfg.y_chart);
  j["x_roots"] = texts(r.x_roots);
  j["y_roots"] = texts(r.y_roots);
  j["x_cross_ratio"] = text(r.x_cross_ratio);
  j["y_cross_ratio"] = text(r.y_cross_ratio);
  Json sols = Json::array();
  for (const auto& [perm, mob] : r.match.alternatives) {
    sols.push_back({{"permutation", indices(perm)},
                    {"mobius", {text(mob.a()), text(mob.b()), text(mob.c()), text(mob.d())}}});
  }
  j["match"] = {{"candidates", r.match.candidates}, {"chosen", cfg.mobius_choice}, {"solutions", sols}};
  j["fiber_map"] = {{cfg.fiber, text(r.fiber_map)}};
  Json steps = Json::array();
  for (const auto& [name, m] : r.steps) {
    steps.push_back({{"step", name}, {"multiplier", m.multiplier ? m.multiplier->to_string() : "-"}});
  }
  j["steps"] = steps;
  j["composite"] = map_json(r.composite);
  j["certification"] = certification_json(r.certification, o.timing);
  return {j, r.certification.status == CertStatus::Verified};
}

}  // namespace dofib::cli
