#include "cli/artifacts.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>

#include "text_util.hpp"
#include "thermorisk/error.hpp"
#include "thermorisk/model.hpp"

namespace thermorisk::cli::detail {

using thermorisk::detail::format_9g;

double round9(double v) { return std::stod(format_9g(v)); }

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    std::array<char, 3> b{};
    std::snprintf(b.data(), b.size(), "%02x", digest[i]);
    hex += b.data();
  }
  return hex;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

namespace {

nlohmann::json read_json(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string(), 0, std::string("corrupt JSON: ") + e.what());
  }
}

std::map<int, std::vector<double>> read_results(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  const auto lines = thermorisk::detail::split_lines(text);
  if (lines.empty() || lines[0] != "option_id,sample_index,annual_load_kWh_m2") {
    throw ParseError(path.string(), 1, "unexpected results.csv header");
  }
  std::map<int, std::vector<double>> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = thermorisk::detail::split(lines[i], ',');
    const auto id = cells.size() == 3 ? thermorisk::detail::parse_int<int>(cells[0]) : std::nullopt;
    const auto idx =
        cells.size() == 3 ? thermorisk::detail::parse_int<std::size_t>(cells[1]) : std::nullopt;
    const auto v = cells.size() == 3 ? thermorisk::detail::parse_double(cells[2]) : std::nullopt;
    if (!id || !idx || !v) throw ParseError(path.string(), i + 1, "malformed results row");
    auto& samples = out[*id];
    if (*idx != samples.size()) throw ParseError(path.string(), i + 1, "sample_index out of order");
    samples.push_back(*v);
  }
  return out;
}

}  // namespace

RunArtifacts load_run_artifacts(const std::filesystem::path& dir) {
  RunArtifacts a;
  a.summary = read_json(dir / "summary.json");
  if (a.summary.value("mode", "") != "monte_carlo") {
    throw ParseError((dir / "summary.json").string(), 0,
                     "not a Monte Carlo run (deterministic-only runs have no figures)");
  }
  a.ranking = read_json(dir / "ranking.json");
  a.samples = read_results(dir / "results.csv");
  for (const auto& opt : a.summary.at("options")) {
    const int id = opt.at("option_id").get<int>();
    if (a.samples.count(id) == 0) {
      throw ParseError((dir / "results.csv").string(), 0,
                       "no samples for option " + std::to_string(id));
    }
  }
  return a;
}

}  // namespace thermorisk::cli::detail
