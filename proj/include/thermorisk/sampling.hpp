#pragma once

// Distributions, inverse CDFs and Latin Hypercube sampling. Every random
// quantity is a pure function of (seed, column, purpose, index), so results do
// not depend on thread count or the order in which columns are produced.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace thermorisk {

/// Standard normal quantile (Wichura AS241). Throws std::domain_error unless
/// 0 < p < 1.
double normal_inv_cdf(double p);

/// Smallest k with P(X <= k) >= p for X ~ Poisson(lambda).
std::int64_t poisson_inv_cdf(double p, double lambda);

struct NormalDist {
  double sigma = 0.0;
  bool operator==(const NormalDist&) const = default;
};

/// q * Poisson(1 / cv^2) with quantum q = mean * cv^2: keeps the stated mean
/// and coefficient of variation while staying discrete and right-skewed.
struct PoissonScaledDist {
  double cv = 0.0;
  bool operator==(const PoissonScaledDist&) const = default;

  double lambda() const { return 1.0 / (cv * cv); }
};

using Distribution = std::variant<NormalDist, PoissonScaledDist>;

struct UncertainInput {
  std::size_t id = 0;  // 1-based declaration index
  std::string name;
  std::string target;
  double mean = 0.0;
  Distribution distribution;

  bool operator==(const UncertainInput&) const = default;
};

/// Quantum of a PoissonScaled input (mean * cv^2).
double poisson_quantum(const UncertainInput& input);

/// Maps a probability to a value in target units via the input's quantile.
double sample_value(const UncertainInput& input, double p);

/// Stratified probabilities before mapping through any distribution. Column c,
/// row r holds a probability inside stratum strata[c][r] (0-based), i.e. in
/// (s / n, (s + 1) / n).
struct LhsDesign {
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::uint32_t>> strata;
  std::vector<std::vector<double>> probabilities;

  bool operator==(const LhsDesign&) const = default;
};

LhsDesign lhs_design(std::size_t n_columns, std::size_t n_samples, std::uint64_t seed);

/// Fresh point inside the same stratum for a rejected draw. `attempt` starts
/// at 1; attempt 0 reproduces the original point.
double stratum_point(std::uint64_t seed, std::size_t column, std::size_t row,
                     std::uint32_t stratum, std::size_t n_samples, std::uint32_t attempt);

struct SampleMatrix {
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;        // target units
  std::vector<std::vector<double>> probabilities;  // underlying stratified draws

  std::vector<double> row(std::size_t j) const;

  bool operator==(const SampleMatrix&) const = default;
};

/// Values for `inputs` from an existing design (columns in declaration order).
SampleMatrix materialize(const LhsDesign& design, std::span<const UncertainInput> inputs);

/// Latin Hypercube sample: one independent stratum permutation per column.
/// Throws std::invalid_argument for n < 2 or empty inputs.
SampleMatrix lhs(std::span<const UncertainInput> inputs, std::size_t n, std::uint64_t seed);

/// The input means in declaration order.
std::vector<double> deterministic_point(std::span<const UncertainInput> inputs);

/// samples.csv: header of variable names, one row per sample, 9 significant
/// digits.
std::string format_samples_csv(const std::vector<std::string>& names,
                               const std::vector<std::vector<double>>& columns);

// Counter-based random stream used by the generators above.
namespace rng {

std::uint64_t mix64(std::uint64_t x);

/// 64 random bits addressed by (seed, stream, index).
std::uint64_t bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Uniform on the open interval (0, 1) with 32-bit resolution.
double open_unit(std::uint64_t bits);

/// Unbiased integer in [0, bound).
std::uint64_t bounded(std::uint64_t seed, std::uint64_t stream, std::uint64_t& counter,
                      std::uint64_t bound);

}  // namespace rng

}  // namespace thermorisk
