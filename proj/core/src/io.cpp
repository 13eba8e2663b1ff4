#include "dofib/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dofib/errors.hpp"
#include "dofib/parse.hpp"

namespace dofib {

namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field \"") + key + "\" has the wrong type");
  }
}

std::vector<std::string> names(const json& j, const char* key, bool required) {
  if (!j.contains(key)) {
    if (required) throw ParseError(std::string("missing field \"") + key + "\"");
    return {};
  }
  return field<std::vector<std::string>>(j, key);
}

RingPtr ring_of(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> all = a;
  all.insert(all.end(), b.begin(), b.end());
  return make_ring(all);
}

std::string expression(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError("component \"" + key + "\" must be an expression string");
}

}  // namespace

RingPtr DoubleCover::ring() const { return ring_of(coords, params); }

RatFunc DoubleCover::branch() const {
  RatFunc out(ring(), BigRat(1));
  for (const RatFunc& f : factors) out *= f;
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OcticArrangement parse_arrangement(std::string_view text) {
  const json j = parse_json(text);
  auto vars = names(j, "variables", true);
  if (vars.size() != 4) throw ParseError("an arrangement needs exactly four variables");
  auto planes = field<std::vector<std::string>>(j, "planes");
  auto label = j.value("label", std::string("arrangement"));
  OcticArrangement arr = OcticArrangement::from_expressions(label, {vars[0], vars[1], vars[2], vars[3]},
                                                            names(j, "parameters", false), planes);
  if (j.contains("scale")) {
    arr = arr.with_scale(parse_ratfunc(field<std::string>(j, "scale"), arr.ring()));
  }
  return arr;
}

DoubleCover parse_cover(std::string_view text) {
  const json j = parse_json(text);
  DoubleCover c;
  c.label = j.value("label", std::string("cover"));
  if (j.contains("planes")) {
    OcticArrangement arr = parse_arrangement(text);
    c.coords.assign(arr.vars().begin(), arr.vars().end());
    c.params = arr.params();
    c.factors = branch_factors(arr);
    c.arrangement = std::move(arr);
    return c;
  }
  c.coords = names(j, "variables", true);
  c.params = names(j, "parameters", false);
  const RingPtr r = c.ring();
  if (!j.contains("branch")) throw ParseError("a cover needs \"planes\" or \"branch\"");
  const json& b = j.at("branch");
  if (b.is_string()) {
    c.factors.push_back(parse_ratfunc(b.get<std::string>(), r));
  } else if (b.is_array()) {
    for (const auto& f : b) {
      if (!f.is_string()) throw ParseError("branch factors must be expression strings");
      c.factors.push_back(parse_ratfunc(f.get<std::string>(), r));
    }
  } else {
    throw ParseError("\"branch\" must be an expression or a list of expressions");
  }
  return c;
}

DoubleCoverMap parse_map(std::string_view text) {
  const json j = parse_json(text);
  if (!j.contains("source") || !j.contains("target")) throw ParseError("a map needs \"source\" and \"target\"");
  DoubleCoverMap m;
  m.source_coords = names(j.at("source"), "variables", true);
  m.source_params = names(j.at("source"), "parameters", false);
  m.target_coords = names(j.at("target"), "variables", true);
  m.target_params = names(j.at("target"), "parameters", false);
  const RingPtr r = m.source_ring();
  for (const auto& n : m.target_coords) {
    if (!j.contains(n)) throw ParseError("missing component \"" + n + "\"");
    m.components.emplace(n, parse_ratfunc(expression(j, n), r));
  }
  const json params = j.value("params", json::object());
  for (const auto& n : m.target_params) {
    if (params.contains(n)) {
      RatFunc v = parse_ratfunc(expression(params, n), r);
      for (const auto& c : m.source_coords) {
        if (v.involves(c)) throw ParseError("parameter component \"" + n + "\" involves the coordinate " + c);
      }
      m.components.emplace(n, std::move(v));
    } else {
      auto idx = r->index_of(n);
      if (!idx) throw ParseError("parameter \"" + n + "\" has no component and is not a source parameter");
      m.components.emplace(n, RatFunc(Poly::variable(r, n)));
    }
  }
  if (j.contains("u_multiplier")) {
    const json& u = j.at("u_multiplier");
    RatFunc coeff = parse_ratfunc(u.contains("coeff") ? expression(u, "coeff") : "1", r);
    RatFunc radicand = parse_ratfunc(u.contains("radicand") ? expression(u, "radicand") : "1", r);
    m.multiplier = SqrtScalar(std::move(coeff), radicand);
  }
  return m;
}

std::string map_to_json(const DoubleCoverMap& m, const std::string& label) {
  json j;
  if (!label.empty()) j["label"] = label;
  j["source"] = {{"variables", m.source_coords}, {"parameters", m.source_params}};
  j["target"] = {{"variables", m.target_coords}, {"parameters", m.target_params}};
  for (const auto& n : m.target_coords) j[n] = m.component(n).to_string();
  json params = json::object();
  for (const auto& n : m.target_params) params[n] = m.component(n).to_string();
  j["params"] = params;
  if (m.multiplier) {
    j["u_multiplier"] = {{"coeff", m.multiplier->coeff().to_string()},
                         {"radicand", m.multiplier->radicand().to_string()}};
  }
  return j.dump(2) + "\n";
}

}  // namespace dofib
