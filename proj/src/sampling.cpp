#include "thermorisk/sampling.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "text_util.hpp"

namespace thermorisk {

// ---------------------------------------------------------------------------
// Inverse CDFs

double normal_inv_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("normal_inv_cdf: p must lie in (0, 1), got " + std::to_string(p));
  }
  // Wichura (1988), Algorithm AS 241, PPND16.
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852854561 + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

std::int64_t poisson_inv_cdf(double p, double lambda) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("poisson_inv_cdf: p must lie in (0, 1), got " + std::to_string(p));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("poisson_inv_cdf: lambda must be positive, got " +
                            std::to_string(lambda));
  }

  std::int64_t k = 0;
  double pmf = 0.0;
  double cdf = 0.0;
  if (lambda < 50.0) {
    pmf = std::exp(-lambda);
    cdf = pmf;
  } else {
    // Cornish-Fisher start, then CDF(k) by summing the pmf downward from k.
    const double z = normal_inv_cdf(p);
    const double guess = lambda + std::sqrt(lambda) * z + (z * z - 1.0) / 6.0;
    k = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(guess)));
    const double kd = static_cast<double>(k);
    pmf = std::exp(kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0));
    double term = pmf;
    cdf = pmf;
    for (std::int64_t i = k; i > 0; --i) {
      term *= static_cast<double>(i) / lambda;
      cdf += term;
      if (static_cast<double>(i) < lambda && term < cdf * 1e-17) break;
    }
    while (k > 0 && cdf - pmf >= p) {
      cdf -= pmf;
      pmf *= static_cast<double>(k) / lambda;
      --k;
    }
  }
  while (cdf < p) {
    ++k;
    pmf *= lambda / static_cast<double>(k);
    if (static_cast<double>(k) > lambda && pmf < cdf * 1e-17) break;  // saturated below p
    cdf += pmf;
  }
  return k;
}

double poisson_quantum(const UncertainInput& input) {
  const auto& d = std::get<PoissonScaledDist>(input.distribution);
  return input.mean * d.cv * d.cv;
}

double sample_value(const UncertainInput& input, double p) {
  if (const auto* n = std::get_if<NormalDist>(&input.distribution)) {
    return input.mean + n->sigma * normal_inv_cdf(p);
  }
  const auto& d = std::get<PoissonScaledDist>(input.distribution);
  return poisson_quantum(input) * static_cast<double>(poisson_inv_cdf(p, d.lambda()));
}

// ---------------------------------------------------------------------------
// Counter-based stream

namespace rng {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  const std::uint64_t key = mix64(mix64(seed + kGolden) ^ (stream * 0xd1b54a32d192ed03ULL));
  return mix64(key + (index + 1) * kGolden);
}

double open_unit(std::uint64_t b) {
  return (static_cast<double>(b >> 32) + 0.5) * 0x1p-32;
}

__extension__ typedef unsigned __int128 u128;

std::uint64_t bounded(std::uint64_t seed, std::uint64_t stream, std::uint64_t& counter,
                      std::uint64_t bound) {
  // Lemire's multiply-and-reject.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const auto product =
        static_cast<u128>(bits(seed, stream, counter++)) * bound;
    if (static_cast<std::uint64_t>(product) >= threshold) {
      return static_cast<std::uint64_t>(product >> 64);
    }
  }
}

}  // namespace rng

// ---------------------------------------------------------------------------
// Latin Hypercube

namespace {

enum Purpose : std::uint64_t { kPermutation = 0, kJitter = 1, kRetry = 2 };

std::uint64_t stream_id(std::size_t column, Purpose purpose) {
  return static_cast<std::uint64_t>(column) * 8 + purpose;
}

}  // namespace

double stratum_point(std::uint64_t seed, std::size_t column, std::size_t row,
                     std::uint32_t stratum, std::size_t n_samples, std::uint32_t attempt) {
  const std::uint64_t b =
      attempt == 0
          ? rng::bits(seed, stream_id(column, kJitter), row)
          : rng::bits(seed, stream_id(column, kRetry),
                      (static_cast<std::uint64_t>(row) << 20) | attempt);
  return (static_cast<double>(stratum) + rng::open_unit(b)) / static_cast<double>(n_samples);
}

LhsDesign lhs_design(std::size_t n_columns, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("lhs: n must be >= 2");
  if (n_columns == 0) throw std::invalid_argument("lhs: at least one input is required");

  LhsDesign d;
  d.n_samples = n_samples;
  d.seed = seed;
  d.strata.resize(n_columns);
  d.probabilities.resize(n_columns);
  for (std::size_t c = 0; c < n_columns; ++c) {
    auto& perm = d.strata[c];
    perm.resize(n_samples);
    std::iota(perm.begin(), perm.end(), 0U);
    std::uint64_t counter = 0;
    for (std::size_t i = n_samples - 1; i > 0; --i) {
      const auto j = rng::bounded(seed, stream_id(c, kPermutation), counter, i + 1);
      std::swap(perm[i], perm[j]);
    }
    auto& probs = d.probabilities[c];
    probs.resize(n_samples);
    for (std::size_t r = 0; r < n_samples; ++r) {
      probs[r] = stratum_point(seed, c, r, perm[r], n_samples, 0);
    }
  }
  return d;
}

std::vector<double> SampleMatrix::row(std::size_t j) const {
  std::vector<double> x;
  x.reserve(columns.size());
  for (const auto& col : columns) x.push_back(col.at(j));
  return x;
}

SampleMatrix materialize(const LhsDesign& design, std::span<const UncertainInput> inputs) {
  if (inputs.size() != design.probabilities.size()) {
    throw std::invalid_argument("materialize: input count does not match design columns");
  }
  SampleMatrix m;
  m.n_samples = design.n_samples;
  m.seed = design.seed;
  m.probabilities = design.probabilities;
  m.columns.resize(inputs.size());
  for (std::size_t c = 0; c < inputs.size(); ++c) {
    m.names.push_back(inputs[c].name);
    auto& col = m.columns[c];
    col.reserve(design.n_samples);
    for (const double p : design.probabilities[c]) col.push_back(sample_value(inputs[c], p));
  }
  return m;
}

SampleMatrix lhs(std::span<const UncertainInput> inputs, std::size_t n, std::uint64_t seed) {
  if (inputs.empty()) throw std::invalid_argument("lhs: at least one input is required");
  return materialize(lhs_design(inputs.size(), n, seed), inputs);
}

std::vector<double> deterministic_point(std::span<const UncertainInput> inputs) {
  std::vector<double> x;
  x.reserve(inputs.size());
  for (const auto& in : inputs) x.push_back(in.mean);
  return x;
}

std::string format_samples_csv(const std::vector<std::string>& names,
                               const std::vector<std::vector<double>>& columns) {
  std::ostringstream os;
  for (std::size_t c = 0; c < names.size(); ++c) os << (c ? "," : "") << names[c];
  os << '\n';
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      os << (c ? "," : "") << detail::format_9g(columns[c][r]);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace thermorisk
