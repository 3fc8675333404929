#pragma once

// Descriptive statistics, quantiles, histograms, median confidence limits and
// the Shapiro-Wilk normality test.

#include <cstddef>
#include <span>
#include <vector>

namespace thermorisk {

inline constexpr double kNormalityAlpha = 0.05;
inline constexpr double kMedianConfidence = 0.95;

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // n - 1 denominator
  double variance = 0.0;
  double min = 0.0;
  double max = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  double median_ci_lower = 0.0;
  double median_ci_upper = 0.0;

  bool operator==(const SummaryStats&) const = default;
};

struct NormalityResult {
  double w = 0.0;
  double p_value = 0.0;
  std::size_t n = 0;

  /// Reject normality at `alpha` (strict: p == alpha is not rejected).
  bool rejects(double alpha = kNormalityAlpha) const { return p_value < alpha; }

  bool operator==(const NormalityResult&) const = default;
};

struct HistogramSpec {
  std::size_t bins = 0;
  std::vector<double> edges;  // bins + 1, strictly increasing
  std::vector<std::size_t> counts;
  std::vector<double> relative_frequency;

  bool operator==(const HistogramSpec&) const = default;
};

/// Quantile of already sorted data by linear interpolation of order statistics
/// at h = (n - 1) p + 1.
double quantile_sorted(std::span<const double> sorted, double p);

/// Distribution-free confidence interval for the median: order statistics
/// x_(l) and x_(n+1-l) with the largest l whose binomial coverage reaches
/// `confidence`. Falls back to (min, max) when no l achieves it.
std::pair<double, double> median_confidence_interval(std::span<const double> sorted,
                                                     double confidence = kMedianConfidence);

/// Throws std::invalid_argument for n < 2.
SummaryStats summarize(std::span<const double> samples);

/// Royston's approximation (Algorithm AS R94). Throws std::invalid_argument
/// for n < 3, n > 5000, or zero range.
NormalityResult shapiro_wilk(std::span<const double> samples);

/// Shapiro-Wilk coefficients a_1..a_{n/2} for the upper half of the order
/// statistics (a_i multiplies x_(n+1-i) - x_(i)).
std::vector<double> shapiro_wilk_coefficients(std::size_t n);

/// Equal-width bins over [min, max], right-closed last bin.
HistogramSpec histogram(std::span<const double> samples, std::size_t bins);

/// Quartile (1..4) that `value` falls in: 1 for value <= q25, 2 for <= q50,
/// 3 for <= q75, else 4.
int quartile_index(const SummaryStats& s, double value);

struct NormalityRow {
  int option_id = 0;
  NormalityResult result;
  bool reject = false;
};

struct LabeledSamples {
  int option_id = 0;
  std::span<const double> samples;
};

std::vector<NormalityRow> normality_screen(std::span<const LabeledSamples> distributions,
                                           double alpha = kNormalityAlpha);

/// Upper-tail standard normal probability.
double normal_sf(double z);

}  // namespace thermorisk
