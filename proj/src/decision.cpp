#include "thermorisk/decision.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "thermorisk/stats.hpp"

namespace thermorisk {

std::string_view criterion_name(Criterion c) {
  switch (c) {
    case Criterion::Deterministic: return "deterministic";
    case Criterion::ExpectedValue: return "expected_value";
    case Criterion::Maximax: return "maximax";
    case Criterion::Maximin: return "maximin";
  }
  return "?";
}

OptionRisk option_risk_from_summary(int option_id, double deterministic_kpi, double mean,
                                    double std, double min, double max) {
  return {option_id, deterministic_kpi, mean, std, std * std, min, max, min, max};
}

RiskReport risk_report(std::span<const OutputDistribution> distributions,
                       const ExtremeSpec& extremes) {
  RiskReport report;
  for (const auto& d : distributions) {
    const auto s = summarize(d.samples);
    OptionRisk r{d.option_id, d.deterministic_kpi, s.mean, s.std, s.variance,
                 s.min,       s.max,               s.min,  s.max};
    if (extremes.tail_probability) {
      const double t = *extremes.tail_probability;
      if (!(t > 0.0 && t < 0.5)) throw std::invalid_argument("tail probability must be in (0, 0.5)");
      std::vector<double> sorted = d.samples;
      std::sort(sorted.begin(), sorted.end());
      r.best_case = quantile_sorted(sorted, t);
      r.worst_case = quantile_sorted(sorted, 1.0 - t);
    }
    report.options.push_back(r);
  }
  std::sort(report.options.begin(), report.options.end(),
            [](const OptionRisk& a, const OptionRisk& b) { return a.option_id < b.option_id; });
  return report;
}

double criterion_score(Criterion criterion, const OptionRisk& risk) {
  switch (criterion) {
    case Criterion::Deterministic: return risk.deterministic_kpi;
    case Criterion::ExpectedValue: return risk.mean;
    case Criterion::Maximax: return risk.best_case;
    case Criterion::Maximin: return risk.worst_case;
  }
  return risk.mean;
}

CriterionRanking rank(Criterion criterion, std::span<const ScoredOption> scores) {
  if (scores.empty()) throw std::invalid_argument("rank: no design options");
  std::vector<ScoredOption> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), [](const ScoredOption& a, const ScoredOption& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.option_id < b.option_id;
  });
  CriterionRanking r;
  r.criterion = criterion;
  for (const auto& s : sorted) {
    r.order.push_back(s.option_id);
    r.scores.push_back(s.score);
  }
  return r;
}

CriterionRanking rank(Criterion criterion, const RiskReport& report) {
  std::vector<ScoredOption> scores;
  for (const auto& o : report.options) scores.push_back({o.option_id, criterion_score(criterion, o)});
  return rank(criterion, scores);
}

std::size_t kendall_tau_distance(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size() || std::set<int>(a.begin(), a.end()) != std::set<int>(b.begin(), b.end()) ||
      std::set<int>(a.begin(), a.end()).size() != a.size()) {
    throw std::invalid_argument("kendall_tau_distance: orderings cover different option sets");
  }
  // Position of each id in b.
  std::vector<std::size_t> pos(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    pos[i] = static_cast<std::size_t>(std::find(b.begin(), b.end(), a[i]) - b.begin());
  }
  std::size_t discordant = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      if (pos[i] > pos[j]) ++discordant;
    }
  }
  return discordant;
}

std::vector<RankingDivergence> ranking_comparison(std::span<const CriterionRanking> rankings) {
  std::vector<RankingDivergence> out;
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    for (std::size_t j = i + 1; j < rankings.size(); ++j) {
      RankingDivergence d;
      d.first = rankings[i].criterion;
      d.second = rankings[j].criterion;
      d.kendall_tau_distance = kendall_tau_distance(rankings[i].order, rankings[j].order);
      d.differs = d.kendall_tau_distance > 0;
      out.push_back(d);
    }
  }
  return out;
}

}  // namespace thermorisk
