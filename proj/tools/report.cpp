#include "report.hpp"

#include <sstream>

namespace dofib::cli {

namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

std::string scalar(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "-";
  return j.dump();
}

bool flat_list(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (!is_scalar(e)) return false;
  return true;
}

bool inline_list(const Json& j) { return flat_list(j) && j.size() <= 8; }

std::string inline_text(const Json& j) {
  std::string s = "[";
  for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + scalar(j[i]);
  return s + "]";
}

void emit(std::ostringstream& out, const Json& j, int indent);

void emit_item(std::ostringstream& out, const std::string& key, const Json& v, int indent) {
  const std::string pad(indent, ' ');
  if (is_scalar(v)) {
    out << pad << key << ": " << scalar(v) << "\n";
  } else if (inline_list(v)) {
    out << pad << key << ": " << inline_text(v) << "\n";
  } else if (v.empty()) {
    out << pad << key << ": " << (v.is_array() ? "[]" : "{}") << "\n";
  } else {
    out << pad << key << ":\n";
    emit(out, v, indent + 2);
  }
}

void emit(std::ostringstream& out, const Json& j, int indent) {
  const std::string pad(indent, ' ');
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) emit_item(out, it.key(), it.value(), indent);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const Json& e = j[i];
      if (is_scalar(e)) {
        out << pad << "- " << scalar(e) << "\n";
      } else if (inline_list(e) && !e.empty()) {
        out << pad << "- " << inline_text(e) << "\n";
      } else {
        out << pad << "- [" << i << "]\n";
        emit(out, e, indent + 2);
      }
    }
  } else {
    out << pad << scalar(j) << "\n";
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream out;
  emit(out, report, 0);
  return out.str();
}

}  // namespace dofib::cli
