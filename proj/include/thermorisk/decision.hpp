#pragma once

// KPI/KRI extraction and design-option ranking. The KPI is a cost (annual
// load), so the payoff of an outcome is -load: maximax picks the smallest
// best case (sample minimum) and maximin the smallest worst case (sample
// maximum).

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "thermorisk/orchestrator.hpp"

namespace thermorisk {

enum class Criterion { Deterministic, ExpectedValue, Maximax, Maximin };

inline constexpr Criterion kAllCriteria[] = {Criterion::Deterministic, Criterion::ExpectedValue,
                                             Criterion::Maximax, Criterion::Maximin};

std::string_view criterion_name(Criterion c);

struct OptionRisk {
  int option_id = 0;
  double deterministic_kpi = 0.0;
  double mean = 0.0;
  double std = 0.0;
  double variance = 0.0;
  double min = 0.0;
  double max = 0.0;
  /// Scores used by maximax / maximin. Equal to min / max unless a
  /// percentile variant was requested.
  double best_case = 0.0;
  double worst_case = 0.0;

  bool operator==(const OptionRisk&) const = default;
};

struct RiskReport {
  std::vector<OptionRisk> options;  // ascending option id

  bool operator==(const RiskReport&) const = default;
};

/// Optional percentile replacement for the sample extremes, e.g. 0.01 uses
/// the 1st and 99th percentiles. Disabled by default.
struct ExtremeSpec {
  std::optional<double> tail_probability;
};

/// Risk figures built from published summary values (no samples).
OptionRisk option_risk_from_summary(int option_id, double deterministic_kpi, double mean,
                                    double std, double min, double max);

RiskReport risk_report(std::span<const OutputDistribution> distributions,
                       const ExtremeSpec& extremes = {});

struct CriterionRanking {
  Criterion criterion = Criterion::Deterministic;
  std::vector<int> order;      // best first
  std::vector<double> scores;  // aligned with order

  bool operator==(const CriterionRanking&) const = default;
};

struct ScoredOption {
  int option_id = 0;
  double score = 0.0;
};

/// Ascending score (lower load is better); ties by ascending option id.
/// Throws std::invalid_argument on an empty option set.
CriterionRanking rank(Criterion criterion, std::span<const ScoredOption> scores);
CriterionRanking rank(Criterion criterion, const RiskReport& report);

double criterion_score(Criterion criterion, const OptionRisk& risk);

struct RankingDivergence {
  Criterion first = Criterion::Deterministic;
  Criterion second = Criterion::Deterministic;
  std::size_t kendall_tau_distance = 0;  // discordant pairs
  bool differs = false;
};

/// Number of option pairs ordered differently by the two orderings. Throws
/// std::invalid_argument unless both are permutations of the same ids.
std::size_t kendall_tau_distance(std::span<const int> a, std::span<const int> b);

/// All pairwise divergences, in input order.
std::vector<RankingDivergence> ranking_comparison(std::span<const CriterionRanking> rankings);

}  // namespace thermorisk
