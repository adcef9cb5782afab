// Copyright 2026 The rdlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rdlab/ggm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rdlab::ggm {

namespace {

constexpr double kConvergeEps = 1e-12;
constexpr int kMaxIter = 500;

void validate_params(const GGMParams& p) {
  if (!(p.alpha > 0.0) || !(p.beta > 0.0)) {
    throw std::invalid_argument("ggm: alpha and beta must be positive");
  }
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be positive");
  // Lanczos, g = 5.2421875, 14 coefficients.
  static const double cof[14] = {
      57.1562356658629235,     -59.5979603554754912,
      14.1360979747417471,     -0.491913816097620199,
      0.339946499848118887e-4, 0.465236289270485756e-4,
      -0.983744753048795646e-4, 0.158088703224912494e-3,
      -0.210264441724104883e-3, 0.217439618115212643e-3,
      -0.164318106536763890e-3, 0.844182239838527433e-4,
      -0.261908384015814087e-4, 0.368991826595316234e-5};
  double y = x;
  double tmp = x + 5.24218750000000000;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (int j = 0; j < 14; ++j) ser += cof[j] / ++y;
  return tmp + std::log(2.5066282746310005 * ser / x);
}

double reg_lower_incomplete_gamma(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("incomplete gamma: a must be > 0");
  if (x < 0.0) throw std::domain_error("incomplete gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;

  const double log_prefactor = -x + a * std::log(x) - log_gamma(a);
  const double prefactor = std::exp(log_prefactor);

  if (x < a + 1.0) {
    // Series: P(a,x) = x^a e^-x / Gamma(a) * sum_n x^n / (a (a+1) ... (a+n)).
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < kMaxIter; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * kConvergeEps) break;
    }
    return sum * prefactor;
  }

  // Modified Lentz continued fraction for Q(a,x).
  const double fpmin = std::numeric_limits<double>::min() /
                       std::numeric_limits<double>::epsilon();
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kConvergeEps) break;
  }
  const double q = prefactor * h;
  return 1.0 - q;
}

double ggm_cdf(const GGMParams& params, double x) {
  validate_params(params);
  const double z = (x - params.mu) / params.alpha;
  if (z == 0.0) return 0.5;
  const double t = std::pow(std::fabs(z), params.beta);
  const double p = reg_lower_incomplete_gamma(1.0 / params.beta, t);
  return z > 0.0 ? 0.5 + 0.5 * p : 0.5 - 0.5 * p;
}

double ggm_pmf_integer_raw(const GGMParams& params, std::int32_t k) {
  const double hi = ggm_cdf(params, static_cast<double>(k) + 0.5);
  const double lo = ggm_cdf(params, static_cast<double>(k) - 0.5);
  return std::max(hi - lo, 0.0);
}

double ggm_pmf_integer(const GGMParams& params, std::int32_t k) {
  return std::max(ggm_pmf_integer_raw(params, k), kProbFloor);
}

DiscretePMF make_discrete_pmf(const GGMParams& params, std::int32_t min_symbol,
                              std::int32_t max_symbol) {
  validate_params(params);
  if (min_symbol > max_symbol) {
    throw std::invalid_argument("make_discrete_pmf: empty symbol range");
  }
  const std::size_t n =
      static_cast<std::size_t>(max_symbol) - min_symbol + 1;
  const double floor_mass = static_cast<double>(n) * kProbFloor;
  if (floor_mass >= 1.0) {
    throw std::invalid_argument("make_discrete_pmf: range too wide for floor");
  }

  DiscretePMF pmf;
  pmf.min_symbol = min_symbol;
  pmf.probs.resize(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t k = min_symbol + static_cast<std::int32_t>(i);
    double p;
    if (n == 1) {
      p = 1.0;
    } else if (k == min_symbol) {
      // Fold the whole lower tail into the first bin.
      p = ggm_cdf(params, static_cast<double>(k) + 0.5);
    } else if (k == max_symbol) {
      p = 1.0 - ggm_cdf(params, static_cast<double>(k) - 0.5);
    } else {
      p = ggm_pmf_integer_raw(params, k);
    }
    p = std::max(p, 0.0);
    pmf.probs[i] = p;
    sum += p;
  }
  // Mix with the uniform floor so every entry is >= kProbFloor and the
  // entries sum to exactly 1.
  const double scale = sum > 0.0 ? (1.0 - floor_mass) / sum : 0.0;
  double extra = sum > 0.0 ? 0.0 : (1.0 - floor_mass) / static_cast<double>(n);
  for (double& p : pmf.probs) p = kProbFloor + p * scale + extra;
  return pmf;
}

CdfTable quantize_pmf(const DiscretePMF& pmf, int total_bits) {
  if (total_bits < 8 || total_bits > 16) {
    throw std::invalid_argument("quantize_pmf: total_bits must be in [8,16]");
  }
  const std::uint32_t total = 1u << total_bits;
  const std::size_t n = pmf.probs.size();
  if (n == 0) throw std::invalid_argument("quantize_pmf: empty pmf");
  if (n > total) {
    throw std::invalid_argument(
        "quantize_pmf: more symbols than table precision allows");
  }

  std::vector<std::uint32_t> freq(n);
  std::vector<double> remainder(n);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double scaled = pmf.probs[i] * static_cast<double>(total);
    const double fl = std::floor(scaled);
    freq[i] = static_cast<std::uint32_t>(fl);
    remainder[i] = scaled - fl;
    assigned += freq[i];
  }

  // Hand out the counts lost to flooring, largest remainder first.
  if (assigned < total) {
    std::uint64_t leftover = total - assigned;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return remainder[a] > remainder[b];
                     });
    for (std::size_t i = 0; i < n && leftover > 0; ++i, --leftover) {
      ++freq[order[i]];
    }
    // More leftover than symbols can only happen through fp underflow of the
    // probabilities; dump the rest on the most probable bin.
    if (leftover > 0) {
      const std::size_t top = static_cast<std::size_t>(
          std::max_element(freq.begin(), freq.end()) - freq.begin());
      freq[top] += static_cast<std::uint32_t>(leftover);
    }
  }

  // Enforce the minimum of one count per bin, then settle the balance by
  // shaving the largest bins one count at a time.
  std::uint64_t debt = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (freq[i] == 0) {
      freq[i] = 1;
      ++debt;
    }
  }
  std::uint64_t surplus = assigned > total ? assigned - total : 0;
  debt += surplus;
  while (debt > 0) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return freq[a] > freq[b];
                     });
    bool progressed = false;
    for (std::size_t i = 0; i < n && debt > 0; ++i) {
      if (freq[order[i]] > 1) {
        --freq[order[i]];
        --debt;
        progressed = true;
      }
    }
    if (!progressed) {
      throw std::invalid_argument("quantize_pmf: cannot satisfy table total");
    }
  }

  CdfTable table;
  table.min_symbol = pmf.min_symbol;
  table.total = total;
  table.cum_freqs.resize(n + 1);
  table.cum_freqs[0] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    table.cum_freqs[i + 1] = table.cum_freqs[i] + freq[i];
  }
  return table;
}

CdfTable build_cdf_table(const GGMParams& params, std::int32_t min_symbol,
                         std::int32_t max_symbol, int total_bits) {
  if (min_symbol > max_symbol) {
    throw std::invalid_argument("build_cdf_table: empty symbol range");
  }
  if (total_bits < 8 || total_bits > 16) {
    throw std::invalid_argument("build_cdf_table: total_bits must be in [8,16]");
  }
  const std::uint64_t n = static_cast<std::uint64_t>(
      static_cast<std::int64_t>(max_symbol) - min_symbol + 1);
  if (n > (1ull << total_bits)) {
    throw std::invalid_argument(
        "build_cdf_table: range too wide for table precision");
  }
  return quantize_pmf(make_discrete_pmf(params, min_symbol, max_symbol),
                      total_bits);
}

CdfTable build_uniform_cdf_table(std::int32_t min_symbol,
                                 std::uint32_t n_symbols, int total_bits) {
  if (n_symbols == 0) {
    throw std::invalid_argument("build_uniform_cdf_table: empty alphabet");
  }
  if (total_bits < 8 || total_bits > 16) {
    throw std::invalid_argument(
        "build_uniform_cdf_table: total_bits must be in [8,16]");
  }
  const std::uint32_t total = 1u << total_bits;
  if (n_symbols > total) {
    throw std::invalid_argument(
        "build_uniform_cdf_table: range too wide for table precision");
  }
  const std::uint32_t base = total / n_symbols;
  const std::uint32_t rem = total % n_symbols;
  CdfTable table;
  table.min_symbol = min_symbol;
  table.total = total;
  table.cum_freqs.resize(n_symbols + 1);
  table.cum_freqs[0] = 0;
  for (std::uint32_t i = 0; i < n_symbols; ++i) {
    table.cum_freqs[i + 1] = table.cum_freqs[i] + base + (i < rem ? 1 : 0);
  }
  return table;
}

double rate_bits(std::span<const GGMParams> params_seq,
                 std::span<const std::int32_t> symbols) {
  if (params_seq.size() != symbols.size()) {
    throw std::invalid_argument("rate_bits: length mismatch");
  }
  double bits = 0.0;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    bits -= std::log2(ggm_pmf_integer(params_seq[i], symbols[i]));
  }
  return std::max(bits, 0.0);
}

double rate_bits(const GGMParams& params,
                 std::span<const std::int32_t> symbols) {
  double bits = 0.0;
  for (const std::int32_t s : symbols) {
    bits -= std::log2(ggm_pmf_integer(params, s));
  }
  return std::max(bits, 0.0);
}

GGMParams ggm_fit_moment(std::span<const double> samples, double beta,
                         std::optional<double> fixed_mu) {
  if (samples.empty()) {
    throw std::invalid_argument("ggm_fit_moment: need at least one sample");
  }
  if (!(beta > 0.0)) {
    throw std::invalid_argument("ggm_fit_moment: beta must be positive");
  }
  double mu;
  if (fixed_mu.has_value()) {
    mu = *fixed_mu;
  } else {
    mu = std::accumulate(samples.begin(), samples.end(), 0.0) /
         static_cast<double>(samples.size());
  }
  double mean_abs = 0.0;
  for (const double s : samples) mean_abs += std::fabs(s - mu);
  mean_abs /= static_cast<double>(samples.size());

  // E|X - mu| = alpha * Gamma(2/beta) / Gamma(1/beta)
  const double ratio = std::exp(log_gamma(1.0 / beta) - log_gamma(2.0 / beta));
  double alpha = mean_abs * ratio;
  alpha = std::clamp(alpha, kAlphaMin, kAlphaMax);
  return GGMParams{mu, alpha, beta};
}

}  // namespace rdlab::ggm
