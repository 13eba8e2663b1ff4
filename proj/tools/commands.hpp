#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"

namespace dofib::cli {

struct Options;

struct Outcome {
  Json report;
  bool verified = true;  // false maps to the verification-failure exit code
};

using Command = std::function<Outcome(const Options&)>;

struct Options {
  std::string command;
  Command run;
  std::vector<std::string> files;
  std::vector<std::string> sets;
  std::optional<std::size_t> seed;
  bool json = false;
  bool timing = false;
  bool strict = false;
  std::string out;
  std::vector<std::size_t> planes;
  std::vector<std::string> scales;
  std::string chart = "P0Q1";
  std::size_t threads = 1;
  std::string source, target;
};

Outcome cmd_analyze(const Options&);
Outcome cmd_seeds(const Options&);
Outcome cmd_elliptic_point(const Options&);
Outcome cmd_elliptic_skew(const Options&);
Outcome cmd_kummer(const Options&);
Outcome cmd_sextic(const Options&);
Outcome cmd_quadric(const Options&);
Outcome cmd_node_elliptic(const Options&);
Outcome cmd_census(const Options&);
Outcome cmd_kodaira(const Options&);
Outcome cmd_verify_map(const Options&);
Outcome cmd_match(const Options&);
Outcome cmd_compose(const Options&);
Outcome cmd_pipeline(const Options&);

}  // namespace dofib::cli
