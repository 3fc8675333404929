#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "thermorisk/decision.hpp"

using namespace thermorisk;

namespace {

RiskReport published_report() {
  return {{option_risk_from_summary(1, 154.42, 140.16, 17.19, 94.19, 207.17),
           option_risk_from_summary(2, 168.19, 148.88, 16.96, 109.85, 199.93),
           option_risk_from_summary(3, 159.71, 140.29, 20.52, 89.48, 196.0),
           option_risk_from_summary(4, 154.76, 137.58, 17.4, 85.45, 189.22)}};
}

std::vector<int> order(Criterion c, const RiskReport& r) { return rank(c, r).order; }

std::vector<OutputDistribution> random_distributions(std::mt19937_64& rng, int options,
                                                     std::size_t n) {
  std::normal_distribution<double> z(150.0, 20.0);
  std::vector<OutputDistribution> out;
  for (int id = 1; id <= options; ++id) {
    OutputDistribution d{id, std::vector<double>(n), z(rng)};
    for (auto& y : d.samples) y = std::max(0.0, z(rng));
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

TEST_CASE("published summaries reproduce the published orderings") {
  const auto r = published_report();
  CHECK(order(Criterion::Deterministic, r) == std::vector<int>{1, 4, 3, 2});
  CHECK(order(Criterion::ExpectedValue, r) == std::vector<int>{4, 1, 3, 2});
  CHECK(order(Criterion::Maximax, r) == std::vector<int>{4, 3, 1, 2});
  CHECK(order(Criterion::Maximin, r) == std::vector<int>{4, 3, 2, 1});
  for (const auto& o : r.options) {
    CHECK(o.variance == doctest::Approx(o.std * o.std));
    CHECK(o.best_case == o.min);
    CHECK(o.worst_case == o.max);
  }
  const auto& o4 = r.options[3];
  CHECK(o4.mean == 137.58);
  CHECK(o4.std == 17.4);
  CHECK(o4.min == 85.45);
  CHECK(o4.max == 189.22);
}

TEST_CASE("rank over plain scores") {
  const std::vector<ScoredOption> means{{1, 140.16}, {2, 148.88}, {3, 140.29}, {4, 137.58}};
  const auto r = rank(Criterion::ExpectedValue, means);
  CHECK(r.order == std::vector<int>{4, 1, 3, 2});
  CHECK(r.scores == std::vector<double>{137.58, 140.16, 140.29, 148.88});
  const std::vector<ScoredOption> minima{{1, 94.19}, {2, 109.85}, {3, 89.48}, {4, 85.45}};
  CHECK(rank(Criterion::Maximax, minima).order == std::vector<int>{4, 3, 1, 2});
  const std::vector<ScoredOption> maxima{{1, 207.17}, {2, 199.93}, {3, 196.0}, {4, 189.22}};
  CHECK(rank(Criterion::Maximin, maxima).order == std::vector<int>{4, 3, 2, 1});
  const std::vector<ScoredOption> ydet{{1, 154.42}, {2, 168.19}, {3, 159.71}, {4, 154.76}};
  CHECK(rank(Criterion::Deterministic, ydet).order == std::vector<int>{1, 4, 3, 2});

  const std::vector<ScoredOption> ties{{3, 1.0}, {1, 1.0}, {2, 0.5}};
  CHECK(rank(Criterion::ExpectedValue, ties).order == std::vector<int>{2, 1, 3});
  CHECK_THROWS_AS(rank(Criterion::ExpectedValue, std::vector<ScoredOption>{}),
                  std::invalid_argument);
}

TEST_CASE("risk report from samples") {
  const std::vector<OutputDistribution> two{{1, {1.0, 3.0}, 2.5}};
  const auto r = risk_report(two);
  REQUIRE(r.options.size() == 1);
  CHECK(r.options[0].mean == 2.0);
  CHECK(r.options[0].std == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.options[0].min == 1.0);
  CHECK(r.options[0].max == 3.0);
  CHECK(r.options[0].deterministic_kpi == 2.5);

  const std::vector<OutputDistribution> flat{{7, {4.0, 4.0, 4.0}, 4.0}};
  const auto f = risk_report(flat).options[0];
  CHECK(f.std == 0.0);
  CHECK(f.min == f.mean);
  CHECK(f.max == f.mean);
}

TEST_CASE("percentile extremes are opt-in") {
  std::vector<double> s(101);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<double>(i);
  const std::vector<OutputDistribution> d{{1, s, 50.0}};
  const auto plain = risk_report(d).options[0];
  CHECK(plain.best_case == 0.0);
  CHECK(plain.worst_case == 100.0);
  const auto tail = risk_report(d, ExtremeSpec{0.01}).options[0];
  CHECK(tail.best_case == doctest::Approx(1.0));
  CHECK(tail.worst_case == doctest::Approx(99.0));
  CHECK(tail.min == 0.0);
  CHECK(tail.max == 100.0);
}

TEST_CASE("Kendall tau distance") {
  const std::vector<int> a{1, 2, 3, 4};
  CHECK(kendall_tau_distance(a, a) == 0);
  CHECK(kendall_tau_distance(a, std::vector<int>{2, 1, 3, 4}) == 1);
  CHECK(kendall_tau_distance(a, std::vector<int>{4, 3, 2, 1}) == 6);
  CHECK(kendall_tau_distance(std::vector<int>{1, 4, 3, 2}, std::vector<int>{4, 1, 3, 2}) == 1);
  CHECK_THROWS_AS(kendall_tau_distance(a, std::vector<int>{1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(kendall_tau_distance(a, std::vector<int>{1, 2, 3, 5}), std::invalid_argument);
}

TEST_CASE("ranking comparison") {
  const auto report = published_report();
  std::vector<CriterionRanking> rankings;
  for (const auto c : kAllCriteria) rankings.push_back(rank(c, report));
  const auto d = ranking_comparison(rankings);
  REQUIRE(d.size() == 6);
  CHECK(d[0].first == Criterion::Deterministic);
  CHECK(d[0].second == Criterion::ExpectedValue);
  CHECK(d[0].differs);
  CHECK(d[0].kendall_tau_distance == 1);

  const std::vector<CriterionRanking> same(3, rankings[1]);
  for (const auto& x : ranking_comparison(same)) {
    CHECK(x.kendall_tau_distance == 0);
    CHECK_FALSE(x.differs);
  }
}

TEST_CASE("ranking properties on random campaigns") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const int k = 2 + t % 6;
    auto dists = random_distributions(rng, k, 30);
    const auto report = risk_report(dists);

    std::vector<OutputDistribution> transformed = dists;
    for (auto& d : transformed) {
      for (auto& y : d.samples) y = std::exp(y / 50.0) + 3.0;
      d.deterministic_kpi = std::exp(d.deterministic_kpi / 50.0) + 3.0;
    }
    const auto treport = risk_report(transformed);
    std::vector<OutputDistribution> affine = dists;
    for (auto& d : affine) {
      for (auto& y : d.samples) y = 0.3 * y + 12.0;
      d.deterministic_kpi = 0.3 * d.deterministic_kpi + 12.0;
    }
    const auto areport = risk_report(affine);

    for (const auto c : kAllCriteria) {
      const auto r = rank(c, report);
      auto sorted = r.order;
      std::sort(sorted.begin(), sorted.end());
      std::vector<int> ids(static_cast<std::size_t>(k));
      std::iota(ids.begin(), ids.end(), 1);
      CHECK(sorted == ids);
      CHECK(std::is_sorted(r.scores.begin(), r.scores.end()));

      std::vector<ScoredOption> again;
      for (std::size_t i = 0; i < r.order.size(); ++i) again.push_back({r.order[i], r.scores[i]});
      CHECK(rank(c, again) == r);

      // The mean does not commute with nonlinear transforms, so expected
      // value is only checked under affine ones.
      if (c != Criterion::ExpectedValue) CHECK(rank(c, treport).order == r.order);
      CHECK(rank(c, areport).order == r.order);
    }
  }
}

TEST_CASE("a pointwise dominating option ranks first under every criterion") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    auto dists = random_distributions(rng, 3, 40);
    auto better = dists[2];
    better.option_id = 4;
    for (auto& y : better.samples) y -= 1.0;
    better.deterministic_kpi = dists[2].deterministic_kpi - 1.0;
    dists.push_back(better);
    const auto report = risk_report(dists);
    for (const auto c : kAllCriteria) {
      const auto o = rank(c, report).order;
      const auto pos = [&](int id) { return std::find(o.begin(), o.end(), id) - o.begin(); };
      CHECK(pos(4) < pos(3));
    }
  }
}

TEST_CASE("criterion names") {
  CHECK(criterion_name(Criterion::Deterministic) == "deterministic");
  CHECK(criterion_name(Criterion::ExpectedValue) == "expected_value");
  CHECK(criterion_name(Criterion::Maximax) == "maximax");
  CHECK(criterion_name(Criterion::Maximin) == "maximin");
}
