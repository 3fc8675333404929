#pragma once

// Deterministic baseline and Monte Carlo campaign over every design option.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "thermorisk/engine.hpp"
#include "thermorisk/model.hpp"
#include "thermorisk/sampling.hpp"

namespace thermorisk {

struct CampaignConfig {
  std::size_t n_samples = 500;
  std::uint64_t seed = 0;
  std::size_t workers = 0;  // 0: one per hardware thread
  std::uint32_t max_redraws = 64;
  double max_rejected_fraction = 0.01;
};

struct OutputDistribution {
  int option_id = 0;
  std::vector<double> samples;  // kWh/m2, indexed by sample row
  double deterministic_kpi = 0.0;

  bool operator==(const OutputDistribution&) const = default;
};

struct CampaignResult {
  /// The one stratified design shared by all options, after redraws.
  LhsDesign design;
  /// Sample values per option (option-scoped means map the same
  /// probabilities to different values).
  std::map<int, SampleMatrix> option_samples;
  /// Ascending option id.
  std::vector<OutputDistribution> distributions;
  std::size_t rejected_rows = 0;
};

/// Called after each completed batch of engine evaluations. Runs on worker
/// threads under a lock; it only observes progress.
using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// y_det per option: the engine at the mean of every uncertain input.
std::map<int, double> run_deterministic(const ProjectConfig& project, const ClimateTable& climate);

/// Runs N engine evaluations per option on one shared sample design. Rows
/// holding a draw that breaks a model invariant are redrawn inside the same
/// stratum; more than `max_rejected_fraction` of such rows aborts the
/// campaign with CampaignAbortError.
CampaignResult run_monte_carlo(const ProjectConfig& project, const ClimateTable& climate,
                               const CampaignConfig& campaign, const ProgressFn& progress = {});

/// Worker count actually used for `requested` (0 means automatic).
std::size_t effective_workers(std::size_t requested);

/// results.csv, rows sorted by (option_id, sample_index).
std::string format_results_csv(std::span<const OutputDistribution> distributions);

}  // namespace thermorisk
