#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dofib/arrangement.hpp"
#include "dofib/bimap.hpp"

namespace dofib {

/// Double cover u^2 = product of `factors`, from either an arrangement file
/// ("planes") or a branch file ("branch": one expression or a list).
struct DoubleCover {
  std::string label;
  std::vector<std::string> coords, params;
  std::vector<RatFunc> factors;
  std::optional<OcticArrangement> arrangement;

  RingPtr ring() const;
  RatFunc branch() const;
};

std::string read_file(const std::string& path);

/// {"label", "variables": [4 names], "parameters": [...], "planes": [8 expressions]}
OcticArrangement parse_arrangement(std::string_view json_text);
DoubleCover parse_cover(std::string_view json_text);

/// {"label", "source": {"variables", "parameters"}, "target": {...},
///  "<target variable>": expr, ..., "params": {"<target parameter>": expr},
///  "u_multiplier": {"coeff": expr, "radicand": expr}}
DoubleCoverMap parse_map(std::string_view json_text);
std::string map_to_json(const DoubleCoverMap& m, const std::string& label = "");

inline OcticArrangement load_arrangement(const std::string& path) { return parse_arrangement(read_file(path)); }
inline DoubleCover load_cover(const std::string& path) { return parse_cover(read_file(path)); }
inline DoubleCoverMap load_map(const std::string& path) { return parse_map(read_file(path)); }

}  // namespace dofib
