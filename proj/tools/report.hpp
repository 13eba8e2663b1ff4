#pragma once

#include <string>

#include <json.hpp>

namespace dofib::cli {

using Json = nlohmann::ordered_json;

/// Indented "key: value" rendering of a report; key order is preserved.
std::string render_text(const Json& report);

}  // namespace dofib::cli
