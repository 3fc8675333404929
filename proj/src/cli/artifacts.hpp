#pragma once

// On-disk run artifacts shared by `run` and `report`.

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace thermorisk::cli::detail {

/// `v` rounded to the 9 significant digits used in every artifact.
double round9(double v);

struct RunArtifacts {
  nlohmann::json summary;
  nlohmann::json ranking;
  std::map<int, std::vector<double>> samples;  // results.csv by option id
};

/// Reads summary.json, ranking.json and results.csv from a run directory.
/// Throws IoError for missing files and ParseError for corrupt ones.
RunArtifacts load_run_artifacts(const std::filesystem::path& dir);

/// (file name, SVG document) for every figure: one histogram per option, the
/// comparative box plot and the criterion chart.
std::vector<std::pair<std::string, std::string>> render_plots(const RunArtifacts& artifacts);

std::string sha256_hex(const std::string& bytes);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace thermorisk::cli::detail
