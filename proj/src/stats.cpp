#include "thermorisk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "thermorisk/sampling.hpp"

namespace thermorisk {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  const std::size_t n = sorted.size();
  const double h = static_cast<double>(n - 1) * p + 1.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo >= n) return sorted[n - 1];
  if (lo < 1) return sorted[0];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo - 1] + frac * (sorted[lo] - sorted[lo - 1]);
}

std::pair<double, double> median_confidence_interval(std::span<const double> sorted,
                                                     double confidence) {
  const std::size_t n = sorted.size();
  if (n == 0) throw std::invalid_argument("median interval of an empty sample");
  // Coverage of [x_(l), x_(n+1-l)] is 1 - 2 P(B <= l - 1), B ~ Binomial(n, 1/2).
  const double log_norm = std::lgamma(static_cast<double>(n) + 1.0) - n * std::numbers::ln2;
  double tail = 0.0;  // P(B <= l - 1)
  std::size_t best = 0;
  for (std::size_t l = 1; 2 * l <= n; ++l) {
    const double i = static_cast<double>(l - 1);
    tail += std::exp(log_norm - std::lgamma(i + 1.0) - std::lgamma(static_cast<double>(n) - i + 1.0));
    if (1.0 - 2.0 * tail >= confidence) {
      best = l;
    } else {
      break;
    }
  }
  if (best == 0) return {sorted.front(), sorted.back()};
  return {sorted[best - 1], sorted[n - best]};
}

SummaryStats summarize(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("summarize needs n >= 2, got " + std::to_string(n));
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  SummaryStats s;
  s.n = n;
  double sum = 0.0;
  for (const double y : samples) sum += y;
  s.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const double y : samples) ss += (y - s.mean) * (y - s.mean);
  s.variance = ss / static_cast<double>(n - 1);
  s.std = std::sqrt(s.variance);
  s.min = sorted.front();
  s.max = sorted.back();
  // Rounding can push the mean of a near-constant sample just outside the range.
  s.mean = std::clamp(s.mean, s.min, s.max);
  s.q25 = quantile_sorted(sorted, 0.25);
  s.q50 = quantile_sorted(sorted, 0.50);
  s.q75 = quantile_sorted(sorted, 0.75);
  std::tie(s.median_ci_lower, s.median_ci_upper) = median_confidence_interval(sorted);
  return s;
}

// ---------------------------------------------------------------------------
// Shapiro-Wilk, after Royston (1995) Algorithm AS R94.

namespace {

double poly(std::span<const double> c, double x) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

}  // namespace

std::vector<double> shapiro_wilk_coefficients(std::size_t n) {
  if (n < 3) throw std::invalid_argument("Shapiro-Wilk needs n >= 3");
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
    return a;
  }
  static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};

  const double an = static_cast<double>(n);
  std::vector<double> m(half);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    m[i] = normal_inv_cdf((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
    summ2 += m[i] * m[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(c1, rsn) - m[0] / ssumm2;

  std::size_t first = 1;
  double fac = 0.0;
  if (n > 5) {
    first = 2;
    const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                    (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[1] = a2;
  } else {
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
  }
  a[0] = a1;
  for (std::size_t i = first; i < half; ++i) a[i] = -m[i] / fac;
  return a;
}

NormalityResult shapiro_wilk(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 3) throw std::invalid_argument("Shapiro-Wilk needs n >= 3, got " + std::to_string(n));
  if (n > 5000) {
    throw std::invalid_argument("Shapiro-Wilk supports n <= 5000, got " + std::to_string(n));
  }
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 0.0)) throw std::invalid_argument("Shapiro-Wilk: all values are equal");

  // Work on (x - x_(1)) / range so W is exactly location/scale free.
  const double origin = x.front();
  for (auto& v : x) v = (v - origin) / range;
  double mean = 0.0;
  for (const double v : x) mean += v;
  mean /= static_cast<double>(n);
  double ssq = 0.0;
  for (const double v : x) ssq += (v - mean) * (v - mean);

  const auto a = shapiro_wilk_coefficients(n);
  double num = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) num += a[i] * (x[n - 1 - i] - x[i]);
  double w = std::min(1.0, num * num / ssq);

  NormalityResult r;
  r.n = n;
  if (n == 3) {
    constexpr double pi6 = 6.0 / std::numbers::pi;
    const double stqr = std::asin(std::sqrt(0.75));
    w = std::max(w, 0.75);
    r.w = w;
    r.p_value = std::clamp(pi6 * (std::asin(std::sqrt(w)) - stqr), 0.0, 1.0);
    return r;
  }
  r.w = w;

  static constexpr double g[] = {-2.273, 0.459};
  static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};

  const double an = static_cast<double>(n);
  double y = std::log(1.0 - w);
  double mu = 0.0;
  double sigma = 0.0;
  if (n <= 11) {
    const double gamma = poly(g, an);
    if (y >= gamma) {
      r.p_value = 1e-99;
      return r;
    }
    y = -std::log(gamma - y);
    mu = poly(c3, an);
    sigma = std::exp(poly(c4, an));
  } else {
    const double log_n = std::log(an);
    mu = poly(c5, log_n);
    sigma = std::exp(poly(c6, log_n));
  }
  r.p_value = std::isfinite(y) ? normal_sf((y - mu) / sigma) : 1.0;
  return r;
}

// ---------------------------------------------------------------------------

HistogramSpec histogram(std::span<const double> samples, std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (samples.empty()) throw std::invalid_argument("histogram of an empty sample");
  const auto [min_it, max_it] = std::minmax_element(samples.begin(), samples.end());
  double lo = *min_it;
  double hi = *max_it;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);

  HistogramSpec h;
  h.bins = bins;
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i < bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges[bins] = hi;
  h.counts.assign(bins, 0);
  for (const double v : samples) {
    auto idx = static_cast<std::size_t>(std::floor((v - lo) / width));
    if (idx >= bins) idx = bins - 1;
    ++h.counts[idx];
  }
  h.relative_frequency.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    h.relative_frequency[i] = static_cast<double>(h.counts[i]) / static_cast<double>(samples.size());
  }
  return h;
}

int quartile_index(const SummaryStats& s, double value) {
  if (value <= s.q25) return 1;
  if (value <= s.q50) return 2;
  if (value <= s.q75) return 3;
  return 4;
}

std::vector<NormalityRow> normality_screen(std::span<const LabeledSamples> distributions,
                                           double alpha) {
  std::vector<NormalityRow> rows;
  rows.reserve(distributions.size());
  for (const auto& d : distributions) {
    NormalityRow row;
    row.option_id = d.option_id;
    row.result = shapiro_wilk(d.samples);
    row.reject = row.result.rejects(alpha);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace thermorisk
