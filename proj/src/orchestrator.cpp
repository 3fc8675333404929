#include "thermorisk/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "text_util.hpp"

namespace thermorisk {

namespace {

std::vector<const DesignOption*> options_by_id(const ProjectConfig& project) {
  std::vector<const DesignOption*> out;
  for (const auto& o : project.options) out.push_back(&o);
  std::sort(out.begin(), out.end(),
            [](const DesignOption* a, const DesignOption* b) { return a->id < b->id; });
  return out;
}

/// Redraws invalid cells of `design` in place; returns how many rows needed it.
std::size_t reject_and_redraw(LhsDesign& design, const ProjectConfig& project,
                              std::span<const DesignOption* const> options,
                              const std::vector<std::vector<UncertainInput>>& inputs,
                              const CampaignConfig& campaign) {
  const std::size_t k = design.probabilities.size();
  std::size_t rejected_rows = 0;
  std::vector<double> x(k);
  std::vector<std::uint32_t> attempts(k);
  for (std::size_t row = 0; row < design.n_samples; ++row) {
    std::fill(attempts.begin(), attempts.end(), 0U);
    bool rejected = false;
    for (std::size_t o = 0; o < options.size();) {
      for (std::size_t c = 0; c < k; ++c) {
        x[c] = sample_value(inputs[o][c], design.probabilities[c][row]);
      }
      try {
        (void)build_thermal_model(*options[o], project, x);
        ++o;
      } catch (const InvalidDrawError& e) {
        const auto c = e.variable_index();
        if (++attempts[c] > campaign.max_redraws) {
          throw CampaignAbortError("row " + std::to_string(row) + ": no valid draw for " +
                                   e.variable_name() + " after " +
                                   std::to_string(campaign.max_redraws) +
                                   " redraws; check its distribution");
        }
        design.probabilities[c][row] = stratum_point(design.seed, c, row, design.strata[c][row],
                                                     design.n_samples, attempts[c]);
        rejected = true;
        o = 0;  // the new value must hold for every option
      }
    }
    if (rejected) ++rejected_rows;
  }
  return rejected_rows;
}

}  // namespace

std::size_t effective_workers(std::size_t requested) {
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

std::map<int, double> run_deterministic(const ProjectConfig& project, const ClimateTable& climate) {
  std::map<int, double> out;
  for (const auto& option : project.options) {
    const auto x = deterministic_point(resolve_inputs(project, option));
    out[option.id] = annual_load(build_thermal_model(option, project, x), climate).annual_load_kWh_m2;
  }
  return out;
}

CampaignResult run_monte_carlo(const ProjectConfig& project, const ClimateTable& climate,
                               const CampaignConfig& campaign, const ProgressFn& progress) {
  if (campaign.n_samples < 2) throw std::invalid_argument("campaign: n_samples must be >= 2");
  if (project.uncertain.empty()) {
    throw std::invalid_argument("campaign: the project declares no uncertain inputs");
  }
  const auto options = options_by_id(project);
  const std::size_t n = campaign.n_samples;

  std::vector<std::vector<UncertainInput>> inputs;
  for (const auto* o : options) inputs.push_back(resolve_inputs(project, *o));

  CampaignResult result;
  result.design = lhs_design(project.uncertain.size(), n, campaign.seed);
  result.rejected_rows = reject_and_redraw(result.design, project, options, inputs, campaign);
  if (static_cast<double>(result.rejected_rows) >
      campaign.max_rejected_fraction * static_cast<double>(n)) {
    throw CampaignAbortError(std::to_string(result.rejected_rows) + " of " + std::to_string(n) +
                             " rows needed redraws (limit " +
                             detail::format_9g(campaign.max_rejected_fraction * 100.0) +
                             "%); the uncertain-input distributions are misconfigured");
  }

  const auto y_det = run_deterministic(project, climate);
  std::vector<const SampleMatrix*> matrices;
  for (std::size_t o = 0; o < options.size(); ++o) {
    auto [it, _] =
        result.option_samples.emplace(options[o]->id, materialize(result.design, inputs[o]));
    matrices.push_back(&it->second);
    OutputDistribution d;
    d.option_id = options[o]->id;
    d.samples.assign(n, 0.0);
    d.deterministic_kpi = y_det.at(options[o]->id);
    result.distributions.push_back(std::move(d));
  }

  // Each task writes one disjoint slot; scheduling cannot change any value.
  const std::size_t total = options.size() * n;
  constexpr std::size_t kBatch = 32;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    std::vector<double> x(project.uncertain.size());
    while (true) {
      const std::size_t begin = next.fetch_add(kBatch);
      if (begin >= total) break;
      const std::size_t end = std::min(total, begin + kBatch);
      try {
        for (std::size_t t = begin; t < end; ++t) {
          const std::size_t o = t / n;
          const std::size_t row = t % n;
          const auto& m = *matrices[o];
          for (std::size_t c = 0; c < x.size(); ++c) x[c] = m.columns[c][row];
          result.distributions[o].samples[row] =
              annual_load(build_thermal_model(*options[o], project, x), climate).annual_load_kWh_m2;
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        break;
      }
      const std::size_t finished = done.fetch_add(end - begin) + (end - begin);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(finished, total);
      }
    }
  };

  const std::size_t workers = std::min(effective_workers(campaign.workers), total);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

std::string format_results_csv(std::span<const OutputDistribution> distributions) {
  std::vector<const OutputDistribution*> sorted;
  for (const auto& d : distributions) sorted.push_back(&d);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->option_id < b->option_id;
  });
  std::ostringstream os;
  os << "option_id,sample_index,annual_load_kWh_m2\n";
  for (const auto* d : sorted) {
    for (std::size_t j = 0; j < d->samples.size(); ++j) {
      os << d->option_id << ',' << j << ',' << detail::format_9g(d->samples[j]) << '\n';
    }
  }
  return os.str();
}

}  // namespace thermorisk
