#include "support.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "thermorisk/cli.hpp"

namespace testing {

namespace fs = std::filesystem;
using namespace thermorisk;

fs::path source_dir() { return THERMORISK_SOURCE_DIR; }
fs::path fixture_dir() { return source_dir() / "fixtures" / "chicago_office"; }
fs::path data_dir() { return source_dir() / "tests" / "data"; }
fs::path project_file() { return fixture_dir() / "project.ini"; }

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out;
    const auto db = load_material_db(fixture_dir() / "materials.csv");
    out.project = merge_material_properties(load_project(project_file()), db);
    out.climate = load_climate(fixture_dir() / "climate.csv");
    return out;
  }();
  return f;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

fs::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = fs::temp_directory_path() /
                   ("thermorisk-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"thermorisk"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<double> read_column(const fs::path& path) {
  std::ifstream in(path);
  std::vector<double> out;
  double v = 0.0;
  while (in >> v) out.push_back(v);
  return out;
}

std::string portable_project_text() {
  auto text = read_file(project_file());
  const auto swap = [&text](const std::string& from, const std::string& to) {
    text.replace(text.find(from), from.size(), to);
  };
  swap("materials = materials.csv", "materials = " + (fixture_dir() / "materials.csv").string());
  swap("climate = climate.csv", "climate = " + (fixture_dir() / "climate.csv").string());
  return text;
}

}  // namespace testing

#include <json.hpp>
#include <map>
#include <regex>

#include "text_util.hpp"

namespace testing {

std::vector<std::string> svg_annotation_mismatches(const fs::path& run_dir, std::size_t& checked) {
  std::map<std::string, nlohmann::json> docs;
  for (const char* name : {"summary.json", "ranking.json"}) {
    docs[name] = nlohmann::json::parse(read_file(run_dir / name));
  }
  static const std::regex element(R"re(<(\w+)((?:\s+[\w-]+="[^"]*")*)\s*(/?)>([^<]*))re");
  static const std::regex attribute(R"re(([\w-]+)="([^"]*)")re");

  std::vector<std::string> problems;
  checked = 0;
  for (const auto& entry : fs::directory_iterator(run_dir / "plots")) {
    if (entry.path().extension() != ".svg") continue;
    const auto svg = read_file(entry.path());
    const auto file = entry.path().filename().string();
    for (std::sregex_iterator it(svg.begin(), svg.end(), element), end; it != end; ++it) {
      std::map<std::string, std::string> attrs;
      const std::string attr_text = (*it)[2];
      for (std::sregex_iterator a(attr_text.begin(), attr_text.end(), attribute); a != end; ++a) {
        attrs[(*a)[1]] = (*a)[2];
      }
      if (attrs["class"] != "annotation") continue;
      ++checked;
      const auto where = file + " " + attrs["data-role"] + " " + attrs["data-key"];
      const auto doc = docs.find(attrs["data-source"]);
      if (doc == docs.end()) {
        problems.push_back(where + ": unknown data-source");
        continue;
      }
      const auto pointer = nlohmann::json::json_pointer(attrs["data-key"]);
      if (!doc->second.contains(pointer) || !doc->second.at(pointer).is_number()) {
        problems.push_back(where + ": key does not name a number");
        continue;
      }
      const double expected = doc->second.at(pointer).get<double>();
      const auto shown = thermorisk::detail::parse_double(attrs["data-value"]);
      if (!shown || *shown != expected) {
        problems.push_back(where + ": data-value " + attrs["data-value"] + " != " +
                           thermorisk::detail::format_9g(expected));
      }
      const std::string tag = (*it)[1];
      const std::string text = (*it)[4];
      if ((tag == "tspan" || tag == "text") && text != attrs["data-value"]) {
        problems.push_back(where + ": text '" + text + "' != data-value");
      }
    }
  }
  return problems;
}

}  // namespace testing
