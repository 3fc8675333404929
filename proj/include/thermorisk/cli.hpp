#pragma once

// Command-line front end: validate, run and report. Each command returns a
// process exit code and writes human-readable text to the given streams.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace thermorisk::cli {

/// Stable exit codes.
enum ExitCode : int {
  kOk = 0,
  kDomainFailure = 1,       // validation, usage, domain errors
  kEnvironmentFailure = 2,  // missing files, I/O
  kCampaignAbort = 3,       // too many rejected draws
};

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kClimateEnvVar = "THERMORISK_CLIMATE";

struct RunOptions {
  std::filesystem::path project;
  std::optional<std::size_t> samples;  // overrides [campaign] samples
  std::optional<std::uint64_t> seed;   // overrides [campaign] seed
  std::size_t jobs = 0;                // 0: automatic
  std::filesystem::path out_dir = "thermorisk-out";
  bool deterministic_only = false;
  std::optional<double> tail_probability;  // percentile maximax/maximin
  bool progress = false;
};

int cmd_validate(const std::filesystem::path& project, std::ostream& out, std::ostream& err);
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_report(const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a command.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thermorisk::cli
