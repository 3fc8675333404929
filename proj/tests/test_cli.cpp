#include <doctest.h>

#include <algorithm>
#include <cstdlib>

#include <sys/wait.h>
#include <json.hpp>

#include "support.hpp"
#include "thermorisk/cli.hpp"

namespace fs = std::filesystem;
using testing::run_cli;

namespace {

std::string project() { return testing::project_file().string(); }

fs::path write_project(const std::string& tag, const std::string& text) {
  const auto dir = testing::scratch_dir(tag);
  testing::write_file(dir / "project.ini", text);
  return dir / "project.ini";
}

std::string mutated(const std::string& from, const std::string& to) {
  auto text = testing::portable_project_text();
  text.replace(text.find(from), from.size(), to);
  return text;
}

std::size_t lines_starting(const std::string& text, const std::string& prefix) {
  std::size_t n = 0, pos = 0;
  while (pos < text.size()) {
    if (text.compare(pos, prefix.size(), prefix) == 0) ++n;
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return n;
}

}  // namespace

TEST_CASE("validate exit codes") {
  auto r = run_cli({"validate", project()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("ok:", 0) == 0);

  r = run_cli({"validate", write_project("shgc", mutated("glazing_shgc = 0.42", "glazing_shgc = 1.3")).string()});
  CHECK(r.code == 1);
  CHECK(lines_starting(r.out, "violation:") == 1);
  CHECK(r.out.find("shgc") != std::string::npos);

  r = run_cli({"validate", "/nonexistent/project.ini"});
  CHECK(r.code == 2);

  r = run_cli({"validate", write_project("syntax", mutated("[geometry]", "[geometry")).string()});
  CHECK(r.code == 1);

  r = run_cli({"validate",
               write_project("material", mutated("ExtWall-SIP", "Aerogel-X")).string()});
  CHECK(r.code == 1);
  CHECK(r.out.find("Aerogel-X") != std::string::npos);
}

TEST_CASE("climate path can be overridden from the environment") {
  ::setenv(thermorisk::cli::kClimateEnvVar, "/nonexistent/climate.csv", 1);
  const auto r = run_cli({"validate", project()});
  ::unsetenv(thermorisk::cli::kClimateEnvVar);
  CHECK(r.code == 2);
  CHECK(r.err.find("/nonexistent/climate.csv") != std::string::npos);
}

TEST_CASE("run writes every artifact and reruns byte-identically") {
  const auto a = testing::scratch_dir("run-a");
  const auto b = testing::scratch_dir("run-b");
  auto r = run_cli({"run", project(), "--samples", "500", "--seed", "7", "--out", a.string(), "-j", "1"});
  REQUIRE(r.code == 0);
  r = run_cli({"run", project(), "--samples", "500", "--seed", "7", "--out", b.string(), "-j", "4"});
  REQUIRE(r.code == 0);

  for (const char* f : {"samples.csv", "results.csv", "summary.json", "ranking.json",
                        "manifest.json", "samples_option_1.csv", "plots/boxplot.svg",
                        "plots/criteria.svg", "plots/histogram_option_4.svg"}) {
    CAPTURE(f);
    CHECK(fs::exists(a / f));
  }
  for (const char* f : {"samples.csv", "results.csv", "summary.json", "ranking.json",
                        "samples_option_2.csv", "plots/boxplot.svg", "plots/histogram_option_1.svg"}) {
    CAPTURE(f);
    CHECK(testing::read_file(a / f) == testing::read_file(b / f));
  }

  const auto results = testing::read_file(a / "results.csv");
  CHECK(std::count(results.begin(), results.end(), '\n') == 1 + 4 * 500);
  const auto samples = testing::read_file(a / "samples.csv");
  CHECK(samples.rfind("x_uncer_1,x_uncer_2,", 0) == 0);
  CHECK(std::count(samples.begin(), samples.end(), '\n') == 501);

  const auto manifest = nlohmann::json::parse(testing::read_file(a / "manifest.json"));
  CHECK(manifest.at("seed") == 7);
  CHECK(manifest.at("n_samples") == 500);
  CHECK(manifest.at("version") == thermorisk::cli::kToolVersion);
  CHECK(manifest.at("project_sha256").get<std::string>().size() == 64);

  const auto summary = nlohmann::json::parse(testing::read_file(a / "summary.json"));
  CHECK(summary.at("mode") == "monte_carlo");
  CHECK(summary.at("options").size() == 4);
  const auto ranking = nlohmann::json::parse(testing::read_file(a / "ranking.json"));
  CHECK(ranking.at("rankings").size() == 4);
  CHECK(ranking.at("divergence").size() == 6);
}

TEST_CASE("run usage errors and deterministic-only mode") {
  const auto out = testing::scratch_dir("det");
  auto r = run_cli({"run", project(), "--samples", "1", "--out", out.string()});
  CHECK(r.code == 1);
  r = run_cli({"run", project(), "--tail-probability", "0.7", "--out", out.string()});
  CHECK(r.code == 1);
  r = run_cli({"run", project(), "--bogus"});
  CHECK(r.code == 1);
  r = run_cli({});
  CHECK(r.code == 1);

  r = run_cli({"run", project(), "--deterministic-only", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "manifest.json"));
  CHECK_FALSE(fs::exists(out / "results.csv"));
  const auto summary = nlohmann::json::parse(testing::read_file(out / "summary.json"));
  CHECK(summary.at("mode") == "deterministic");
  CHECK(summary.at("options").size() == 4);

  r = run_cli({"report", out.string()});
  CHECK(r.code == 1);
}

TEST_CASE("run aborts with exit 3 when draws are misconfigured") {
  const auto text = mutated("target = wall_rsi\ndistribution = normal\n",
                            "target = wall_rsi\ndistribution = normal\ncv = 2.0\n");
  const auto r = run_cli({"run", write_project("abort", text).string(), "--out",
                          testing::scratch_dir("abort-out").string()});
  CHECK(r.code == 3);
}

TEST_CASE("report renders figures consistent with the run artifacts") {
  const auto dir = testing::scratch_dir("report");
  REQUIRE(run_cli({"run", project(), "--samples", "200", "--out", dir.string()}).code == 0);
  fs::remove_all(dir / "plots");
  const auto r = run_cli({"report", dir.string()});
  REQUIRE(r.code == 0);
  std::size_t svgs = 0;
  for (const auto& e : fs::directory_iterator(dir / "plots")) svgs += e.path().extension() == ".svg";
  CHECK(svgs == 6);
  CHECK(r.out.find("expected_value:") != std::string::npos);

  std::size_t checked = 0;
  const auto problems = testing::svg_annotation_mismatches(dir, checked);
  CHECK(checked > 50);
  for (const auto& p : problems) FAIL_CHECK(p);

  const auto svg = testing::read_file(dir / "plots" / "boxplot.svg");
  CHECK(svg.find("viewBox=\"0 0 960 540\"") != std::string::npos);
}

TEST_CASE("report errors") {
  const auto empty = testing::scratch_dir("empty");
  CHECK(run_cli({"report", empty.string()}).code == 2);

  const auto dir = testing::scratch_dir("corrupt");
  REQUIRE(run_cli({"run", project(), "--samples", "20", "--out", dir.string()}).code == 0);
  testing::write_file(dir / "summary.json", "{ not json");
  CHECK(run_cli({"report", dir.string()}).code == 1);

  const auto dir2 = testing::scratch_dir("corrupt-csv");
  REQUIRE(run_cli({"run", project(), "--samples", "20", "--out", dir2.string()}).code == 0);
  testing::write_file(dir2 / "results.csv", "option_id,sample_index,annual_load_kWh_m2\n1,0,abc\n");
  CHECK(run_cli({"report", dir2.string()}).code == 1);
}

TEST_CASE("the installed binary reports exit codes to the shell") {
  const std::string bin = THERMORISK_BINARY;
  CHECK(WEXITSTATUS(std::system((bin + " validate " + project() + " >/dev/null").c_str())) == 0);
  CHECK(WEXITSTATUS(std::system((bin + " validate /nonexistent.ini 2>/dev/null").c_str())) == 2);
  CHECK(WEXITSTATUS(std::system((bin + " --version >/dev/null").c_str())) == 0);
}
