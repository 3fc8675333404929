#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "thermorisk/model.hpp"

namespace testing {

std::filesystem::path source_dir();
std::filesystem::path fixture_dir();
std::filesystem::path data_dir();
std::filesystem::path project_file();

/// The bundled office project with its material database merged in.
struct Fixture {
  thermorisk::ProjectConfig project;
  thermorisk::ClimateTable climate;
};
const Fixture& fixture();

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Fresh, empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};
CliResult run_cli(const std::vector<std::string>& args);

/// Doubles whose text rendering ("%.9g") is used for comparison.
std::vector<double> read_column(const std::filesystem::path& path);

/// Project text with the fixture's relative paths made absolute, so it can be
/// written anywhere.
std::string portable_project_text();

}  // namespace testing

namespace testing {

/// Checks every annotated element of every SVG under `run_dir/plots` against
/// summary.json / ranking.json. Returns one message per mismatch and counts
/// the annotations inspected.
std::vector<std::string> svg_annotation_mismatches(const std::filesystem::path& run_dir,
                                                   std::size_t& checked);

}  // namespace testing
