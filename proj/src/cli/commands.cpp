#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <iostream>

#include "cli/artifacts.hpp"
#include "text_util.hpp"
#include "thermorisk/cli.hpp"
#include "thermorisk/decision.hpp"
#include "thermorisk/engine.hpp"
#include "thermorisk/model.hpp"
#include "thermorisk/orchestrator.hpp"
#include "thermorisk/stats.hpp"

namespace thermorisk::cli {

namespace fs = std::filesystem;
using detail::round9;
using nlohmann::json;

namespace {

/// Loaded inputs ready for the engine.
struct Inputs {
  ProjectConfig project;
  ClimateTable climate;
  fs::path climate_path;
  fs::path materials_path;
  std::string project_bytes;
};

/// Outcome of input loading: either inputs or an exit code with the
/// violations already printed.
struct LoadOutcome {
  std::optional<Inputs> inputs;
  int exit_code = kOk;
};

fs::path resolve_relative(const fs::path& project_file, const std::string& rel) {
  const fs::path p(rel);
  return p.is_absolute() ? p : project_file.parent_path() / p;
}

void print_report(const ValidationReport& report, std::ostream& out) {
  for (const auto& v : report) out << "violation: " << format_violation(v) << '\n';
}

LoadOutcome load_inputs(const fs::path& project_file, const std::optional<std::size_t>& samples,
                        const std::optional<std::uint64_t>& seed, std::ostream& out,
                        std::ostream& err) {
  LoadOutcome outcome;
  Inputs in;
  try {
    in.project_bytes = read_text_file(project_file);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    outcome.exit_code = kEnvironmentFailure;
    return outcome;
  }
  try {
    in.project = parse_project(in.project_bytes, project_file.string());
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    outcome.exit_code = kDomainFailure;
    return outcome;
  }
  if (samples) in.project.campaign.samples = *samples;
  if (seed) in.project.campaign.seed = *seed;

  auto report = validate(in.project, Resolution::AllowPending);
  if (!report.empty()) {
    print_report(report, out);
    outcome.exit_code = kDomainFailure;
    return outcome;
  }

  std::vector<MaterialRecord> db;
  if (!in.project.materials_file.empty()) {
    in.materials_path = resolve_relative(project_file, in.project.materials_file);
  }
  const char* climate_override = std::getenv(kClimateEnvVar);
  in.climate_path = climate_override != nullptr && *climate_override != '\0'
                        ? fs::path(climate_override)
                        : resolve_relative(project_file, in.project.climate_file);
  try {
    if (!in.materials_path.empty()) db = load_material_db(in.materials_path);
    in.climate = parse_climate(read_text_file(in.climate_path), in.climate_path.string());
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    outcome.exit_code = kEnvironmentFailure;
    return outcome;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    outcome.exit_code = kDomainFailure;
    return outcome;
  }

  try {
    in.project = merge_material_properties(std::move(in.project), db);
  } catch (const UnresolvedMaterialError& e) {
    for (const auto& name : e.names()) {
      report.push_back({"materials", "referenced material present in the database", name});
    }
  }
  if (report.empty()) report = validate(in.project, Resolution::Required);
  for (auto& v : validate_climate(in.climate)) report.push_back(std::move(v));
  if (report.empty()) {
    for (const auto& option : in.project.options) {
      try {
        (void)resolve_inputs(in.project, option);
      } catch (const ValidationError& e) {
        for (const auto& v : e.report()) {
          report.push_back({"options[" + std::to_string(option.id) + "]." + v.path, v.rule,
                            v.actual});
        }
      }
    }
  }
  if (!report.empty()) {
    print_report(report, out);
    outcome.exit_code = kDomainFailure;
    return outcome;
  }
  outcome.inputs = std::move(in);
  return outcome;
}

std::string iso_utc(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const std::string& option_name(const ProjectConfig& p, int id) {
  return p.find_option(id)->name;
}

json summary_stats_json(const SummaryStats& s) {
  return {{"n", s.n},
          {"mean", round9(s.mean)},
          {"std", round9(s.std)},
          {"variance", round9(s.variance)},
          {"min", round9(s.min)},
          {"q25", round9(s.q25)},
          {"q50", round9(s.q50)},
          {"q75", round9(s.q75)},
          {"max", round9(s.max)},
          {"median_ci_lower", round9(s.median_ci_lower)},
          {"median_ci_upper", round9(s.median_ci_upper)}};
}

json risk_json(const OptionRisk& r) {
  return {{"option_id", r.option_id},
          {"deterministic_kpi", round9(r.deterministic_kpi)},
          {"kri_mean", round9(r.mean)},
          {"kri_std", round9(r.std)},
          {"kri_variance", round9(r.variance)},
          {"min", round9(r.min)},
          {"max", round9(r.max)},
          {"best_case", round9(r.best_case)},
          {"worst_case", round9(r.worst_case)}};
}

class StageTimer {
 public:
  void mark(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    durations_[stage] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }
  json to_json() const { return durations_; }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  std::map<std::string, double> durations_;
};

int write_plots(const fs::path& run_dir, std::ostream& out) {
  const auto artifacts = detail::load_run_artifacts(run_dir);
  const auto plots = detail::render_plots(artifacts);
  fs::create_directories(run_dir / "plots");
  for (const auto& [name, svg] : plots) {
    detail::write_text_file(run_dir / "plots" / name, svg);
  }
  out << "wrote " << plots.size() << " figure(s) to " << (run_dir / "plots").string() << '\n';
  return kOk;
}

}  // namespace

int cmd_validate(const fs::path& project, std::ostream& out, std::ostream& err) {
  const auto loaded = load_inputs(project, std::nullopt, std::nullopt, out, err);
  if (!loaded.inputs) return loaded.exit_code;
  const auto& p = loaded.inputs->project;
  out << "ok: " << project.string() << " (" << p.options.size() << " design option(s), "
      << p.uncertain.size() << " uncertain input(s))\n";
  return kOk;
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.samples && *opts.samples < 2) {
    err << "usage error: --samples must be >= 2\n";
    return kDomainFailure;
  }
  if (opts.tail_probability && !(*opts.tail_probability > 0.0 && *opts.tail_probability < 0.5)) {
    err << "usage error: --tail-probability must lie in (0, 0.5)\n";
    return kDomainFailure;
  }
  const auto started = std::chrono::system_clock::now();
  StageTimer timer;
  auto loaded = load_inputs(opts.project, opts.samples, opts.seed, out, err);
  if (!loaded.inputs) return loaded.exit_code;
  const auto& in = *loaded.inputs;
  const auto& project = in.project;
  timer.mark("load");

  try {
    fs::create_directories(opts.out_dir);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kEnvironmentFailure;
  }

  json manifest = {{"tool", "thermorisk"},
                   {"version", kToolVersion},
                   {"project_file", opts.project.string()},
                   {"project_sha256", detail::sha256_hex(in.project_bytes)},
                   {"climate_file", in.climate_path.string()},
                   {"materials_file", in.materials_path.string()},
                   {"seed", project.campaign.seed},
                   {"n_samples", project.campaign.samples},
                   {"jobs", effective_workers(opts.jobs)},
                   {"deterministic_only", opts.deterministic_only},
                   {"started_at", iso_utc(started)}};

  try {
    const auto y_det = run_deterministic(project, in.climate);
    timer.mark("deterministic");

    if (opts.deterministic_only) {
      json summary = {{"schema", "thermorisk.summary/1"},
                      {"project", project.name},
                      {"mode", "deterministic"},
                      {"options", json::array()}};
      for (const auto& [id, y] : y_det) {
        summary["options"].push_back(
            {{"option_id", id}, {"name", option_name(project, id)}, {"deterministic_kpi", round9(y)}});
        out << "option " << id << ": deterministic KPI " << thermorisk::detail::format_9g(y)
            << " kWh/m2\n";
      }
      detail::write_text_file(opts.out_dir / "summary.json", dump(summary));
      timer.mark("write");
      manifest["finished_at"] = iso_utc(std::chrono::system_clock::now());
      manifest["durations_s"] = timer.to_json();
      detail::write_text_file(opts.out_dir / "manifest.json", dump(manifest));
      return kOk;
    }

    CampaignConfig campaign;
    campaign.n_samples = project.campaign.samples;
    campaign.seed = project.campaign.seed;
    campaign.workers = opts.jobs;
    ProgressFn progress;
    if (opts.progress) {
      progress = [&err](std::size_t done, std::size_t total) {
        err << "\rprogress: " << done << "/" << total << std::flush;
        if (done == total) err << '\n';
      };
    }
    const auto result = run_monte_carlo(project, in.climate, campaign, progress);
    timer.mark("monte_carlo");

    // Post-processing.
    json summary = {{"schema", "thermorisk.summary/1"},
                    {"project", project.name},
                    {"mode", "monte_carlo"},
                    {"n_samples", campaign.n_samples},
                    {"seed", campaign.seed},
                    {"alpha", kNormalityAlpha},
                    {"median_confidence", kMedianConfidence},
                    {"rejected_rows", result.rejected_rows},
                    {"options", json::array()}};
    for (const auto& d : result.distributions) {
      const auto s = summarize(d.samples);
      const auto sw = shapiro_wilk(d.samples);
      summary["options"].push_back(
          {{"option_id", d.option_id},
           {"name", option_name(project, d.option_id)},
           {"deterministic_kpi", round9(d.deterministic_kpi)},
           {"deterministic_quartile", quartile_index(s, d.deterministic_kpi)},
           {"summary", summary_stats_json(s)},
           {"normality",
            {{"W", round9(sw.w)},
             {"p_value", round9(sw.p_value)},
             {"n", sw.n},
             {"reject_normality", sw.rejects()}}}});
    }

    ExtremeSpec extremes;
    extremes.tail_probability = opts.tail_probability;
    const auto report = risk_report(result.distributions, extremes);
    std::vector<CriterionRanking> rankings;
    for (const auto c : kAllCriteria) rankings.push_back(rank(c, report));
    const auto divergence = ranking_comparison(rankings);

    json ranking = {{"schema", "thermorisk.ranking/1"},
                    {"extremes", opts.tail_probability
                                     ? json{{"tail_probability", *opts.tail_probability}}
                                     : json("sample")},
                    {"risk_report", json::array()},
                    {"rankings", json::array()},
                    {"divergence", json::array()}};
    for (const auto& r : report.options) ranking["risk_report"].push_back(risk_json(r));
    for (const auto& r : rankings) {
      json scores = json::array();
      for (const double s : r.scores) scores.push_back(round9(s));
      ranking["rankings"].push_back(
          {{"criterion", criterion_name(r.criterion)}, {"order", r.order}, {"scores", scores}});
    }
    for (const auto& d : divergence) {
      ranking["divergence"].push_back({{"first", criterion_name(d.first)},
                                       {"second", criterion_name(d.second)},
                                       {"kendall_tau_distance", d.kendall_tau_distance},
                                       {"differs", d.differs}});
    }
    timer.mark("post_processing");

    detail::write_text_file(
        opts.out_dir / "samples.csv",
        format_samples_csv(result.option_samples.begin()->second.names, result.design.probabilities));
    for (const auto& [id, m] : result.option_samples) {
      detail::write_text_file(opts.out_dir / ("samples_option_" + std::to_string(id) + ".csv"),
                              format_samples_csv(m.names, m.columns));
    }
    detail::write_text_file(opts.out_dir / "results.csv", format_results_csv(result.distributions));
    detail::write_text_file(opts.out_dir / "summary.json", dump(summary));
    detail::write_text_file(opts.out_dir / "ranking.json", dump(ranking));
    write_plots(opts.out_dir, out);
    timer.mark("write");

    for (const auto& o : summary["options"]) {
      out << "option " << o["option_id"] << ": mean " << o["summary"]["mean"] << ", std "
          << o["summary"]["std"] << ", deterministic " << o["deterministic_kpi"] << " kWh/m2\n";
    }
    for (const auto& r : rankings) {
      out << criterion_name(r.criterion) << ":";
      for (const int id : r.order) out << ' ' << id;
      out << '\n';
    }

    manifest["rejected_rows"] = result.rejected_rows;
    manifest["finished_at"] = iso_utc(std::chrono::system_clock::now());
    manifest["durations_s"] = timer.to_json();
    detail::write_text_file(opts.out_dir / "manifest.json", dump(manifest));
    return kOk;
  } catch (const CampaignAbortError& e) {
    err << "campaign aborted: " << e.what() << '\n';
    return kCampaignAbort;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kEnvironmentFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kEnvironmentFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainFailure;
  }
}

int cmd_report(const fs::path& run_dir, std::ostream& out, std::ostream& err) {
  try {
    const auto artifacts = detail::load_run_artifacts(run_dir);
    write_plots(run_dir, out);

    const auto& s = artifacts.summary;
    out << "project: " << s.value("project", std::string()) << "  (N = " << s.at("n_samples")
        << ", seed = " << s.at("seed") << ")\n";
    out << std::left << std::setw(8) << "option" << std::setw(14) << "deterministic"
        << std::setw(12) << "mean" << std::setw(12) << "std" << std::setw(12) << "min"
        << std::setw(12) << "max" << std::setw(12) << "W" << std::setw(12) << "p" << "quartile\n";
    for (const auto& o : s.at("options")) {
      const auto& st = o.at("summary");
      const auto& nm = o.at("normality");
      out << std::setw(8) << o.at("option_id").dump() << std::setw(14)
          << o.at("deterministic_kpi").dump() << std::setw(12) << st.at("mean").dump()
          << std::setw(12) << st.at("std").dump() << std::setw(12) << st.at("min").dump()
          << std::setw(12) << st.at("max").dump() << std::setw(12) << nm.at("W").dump()
          << std::setw(12) << nm.at("p_value").dump() << o.at("deterministic_quartile").dump()
          << (nm.at("reject_normality").get<bool>() ? "  (normality rejected)" : "") << '\n';
    }
    for (const auto& r : artifacts.ranking.at("rankings")) {
      out << r.at("criterion").get<std::string>() << ":";
      for (const auto& id : r.at("order")) out << ' ' << id.dump();
      out << '\n';
    }
    return kOk;
  } catch (const IoError& e) {
    err << "error: missing run artifact: " << e.what() << '\n';
    return kEnvironmentFailure;
  } catch (const ParseError& e) {
    err << "error: corrupt run artifact: " << e.what() << '\n';
    return kDomainFailure;
  } catch (const json::exception& e) {
    err << "error: corrupt run artifact: " << e.what() << '\n';
    return kDomainFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kEnvironmentFailure;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic building thermal-load analysis under input uncertainty",
               "thermorisk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  fs::path validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a project file and its inputs");
  validate_cmd->add_option("project", validate_path, "Project file")->required();

  RunOptions run;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double tail = 0.0;
  auto* run_cmd = app.add_subcommand("run", "Run the deterministic baseline and Monte Carlo campaign");
  run_cmd->add_option("project", run.project, "Project file")->required();
  auto* samples_opt = run_cmd->add_option("--samples,-n", samples, "Samples per design option");
  auto* seed_opt = run_cmd->add_option("--seed,-s", seed, "Campaign seed");
  run_cmd->add_option("--jobs,-j", run.jobs, "Worker threads (0: automatic)");
  run_cmd->add_option("--out,-o", run.out_dir, "Output directory");
  run_cmd->add_flag("--deterministic-only", run.deterministic_only,
                    "Only evaluate the deterministic baseline");
  auto* tail_opt = run_cmd->add_option(
      "--tail-probability", tail, "Use percentiles t / 1-t instead of sample extremes for maximax/maximin");
  run_cmd->add_flag("--progress", run.progress, "Report progress on stderr");

  fs::path report_dir;
  auto* report_cmd = app.add_subcommand("report", "Render figures and a text summary of a run");
  report_cmd->add_option("run_dir", report_dir, "Directory written by 'run'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kDomainFailure;
  }

  if (*validate_cmd) return cmd_validate(validate_path, out, err);
  if (*run_cmd) {
    if (*samples_opt) run.samples = samples;
    if (*seed_opt) run.seed = seed;
    if (*tail_opt) run.tail_probability = tail;
    return cmd_run(run, out, err);
  }
  return cmd_report(report_dir, out, err);
}

}  // namespace thermorisk::cli
