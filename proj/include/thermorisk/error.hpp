#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace thermorisk {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing or unreadable files, failed writes.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed syntax or schema violation in an input document. The message
/// names the source, line and offending key.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, std::string detail)
      : Error(source + ":" + std::to_string(line) + ": " + detail),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// One broken invariant or cross-reference.
struct Violation {
  std::string path;    // e.g. "options[1].glazing_shgc"
  std::string rule;    // e.g. "GlazingSpec.shgc in (0, 1]"
  std::string actual;  // offending value as text

  bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

std::string format_violation(const Violation& v);

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);

  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// A design-option property that is neither in the project nor the material
/// database.
class UnresolvedMaterialError : public Error {
 public:
  explicit UnresolvedMaterialError(std::vector<std::string> names);

  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
};

/// A substituted sample value breaks a model invariant (e.g. RSI <= 0).
class InvalidDrawError : public Error {
 public:
  InvalidDrawError(std::size_t variable_index, std::string variable_name, double value,
                   std::string rule);

  std::size_t variable_index() const noexcept { return index_; }
  const std::string& variable_name() const noexcept { return name_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t index_;
  std::string name_;
  double value_;
};

/// Too many rejected draws; the uncertain-input distributions are
/// misconfigured for the model.
class CampaignAbortError : public Error {
 public:
  using Error::Error;
};

}  // namespace thermorisk
