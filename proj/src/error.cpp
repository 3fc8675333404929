#include "thermorisk/error.hpp"

#include <sstream>

namespace thermorisk {

std::string format_violation(const Violation& v) {
  return v.path + ": " + v.rule + " (actual: " + v.actual + ")";
}

namespace {

std::string join_report(const ValidationReport& report) {
  std::ostringstream os;
  os << report.size() << " validation violation(s)";
  for (const auto& v : report) os << "\n  " << format_violation(v);
  return os.str();
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out = "unresolved material(s):";
  for (const auto& n : names) out += " " + n;
  return out;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : Error(join_report(report)), report_(std::move(report)) {}

UnresolvedMaterialError::UnresolvedMaterialError(std::vector<std::string> names)
    : Error(join_names(names)), names_(std::move(names)) {}

InvalidDrawError::InvalidDrawError(std::size_t variable_index, std::string variable_name,
                                   double value, std::string rule)
    : Error("invalid draw for " + variable_name + " = " + std::to_string(value) + ": " + rule),
      index_(variable_index),
      name_(std::move(variable_name)),
      value_(value) {}

}  // namespace thermorisk
