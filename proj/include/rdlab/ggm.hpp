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

#ifndef RDLAB_GGM_HPP_
#define RDLAB_GGM_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rdlab::ggm {

// Probability floor applied per integer bin. Guarantees every symbol in a
// coding range stays decodable and bounds the worst-case code length to
// 16 bits per symbol.
inline constexpr double kProbFloor = 1.0 / 65536.0;  // 2^-16

// Scale clamp for moment fitting; keeps degenerate (all-zero) sources coded
// with a near-delta model instead of a zero-width one.
inline constexpr double kAlphaMin = 0.01;
inline constexpr double kAlphaMax = 4096.0;

inline constexpr double kDefaultBeta = 1.5;

// Location / scale / shape of a generalized Gaussian:
//   f(x) ~ exp(-(|x - mu| / alpha)^beta)
// beta = 1 is Laplace, beta = 2 is Gaussian with sigma = alpha / sqrt(2).
struct GGMParams {
  double mu = 0.0;
  double alpha = 1.0;
  double beta = kDefaultBeta;
};

// Floored, renormalized probabilities for the integer symbols
// min_symbol .. min_symbol + probs.size() - 1. Every entry >= kProbFloor and
// the entries sum to 1. Tail mass outside the range is folded into the two
// boundary bins.
struct DiscretePMF {
  std::int32_t min_symbol = 0;
  std::vector<double> probs;
};

// Fixed-point cumulative frequency table for the range coder.
// cum_freqs.size() = symbol count + 1, cum_freqs[0] = 0, strictly increasing,
// cum_freqs.back() = total = 2^total_bits. Every symbol has frequency >= 1.
struct CdfTable {
  std::int32_t min_symbol = 0;
  std::uint32_t total = 0;
  std::vector<std::uint32_t> cum_freqs;

  std::size_t symbol_count() const { return cum_freqs.size() - 1; }
  std::int32_t max_symbol() const {
    return min_symbol + static_cast<std::int32_t>(symbol_count()) - 1;
  }
  bool contains(std::int32_t symbol) const {
    return symbol >= min_symbol && symbol <= max_symbol();
  }
  std::uint32_t freq(std::size_t index) const {
    return cum_freqs[index + 1] - cum_freqs[index];
  }
};

// ln Gamma(x) for x > 0 (Lanczos approximation). Throws std::domain_error
// for x <= 0.
double log_gamma(double x);

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
// Series expansion for x < a + 1, Lentz continued fraction otherwise;
// 1e-12 relative convergence threshold, at most 500 iterations.
// Throws std::domain_error for a <= 0 or x < 0.
double reg_lower_incomplete_gamma(double a, double x);

// CDF of the generalized Gaussian:
//   c((x - mu)/alpha) = 1/2 + sign(x - mu)/2 * P(1/beta, (|x - mu|/alpha)^beta)
double ggm_cdf(const GGMParams& params, double x);

// Bin probability of integer symbol k without the floor:
//   c(k - mu + 0.5) - c(k - mu - 0.5) scaled by alpha.
double ggm_pmf_integer_raw(const GGMParams& params, std::int32_t k);

// Floored bin probability max(raw, kProbFloor). This is the probability the
// rate accounting charges per coded symbol.
double ggm_pmf_integer(const GGMParams& params, std::int32_t k);

// Floored, renormalized PMF over [min_symbol, max_symbol] with tail folding:
// p_i = kProbFloor + (1 - n*kProbFloor) * folded_i / sum(folded).
// Requires n * kProbFloor < 1, i.e. fewer than 65536 symbols.
DiscretePMF make_discrete_pmf(const GGMParams& params, std::int32_t min_symbol,
                              std::int32_t max_symbol);

// Quantizes a DiscretePMF onto integer frequencies summing to 2^total_bits
// exactly, every frequency >= 1 (largest-remainder allocation).
CdfTable quantize_pmf(const DiscretePMF& pmf, int total_bits);

// make_discrete_pmf + quantize_pmf. Requires min_symbol <= max_symbol and
// 8 <= total_bits <= 16; throws std::invalid_argument when the range holds
// more symbols than 2^total_bits.
CdfTable build_cdf_table(const GGMParams& params, std::int32_t min_symbol,
                         std::int32_t max_symbol, int total_bits);

// Near-uniform table over n_symbols starting at min_symbol.
CdfTable build_uniform_cdf_table(std::int32_t min_symbol,
                                 std::uint32_t n_symbols, int total_bits);

// Ideal code length sum_i -log2(pmf_i(symbol_i)) in bits, using the floored
// per-symbol probabilities. params_seq and symbols must have equal lengths.
double rate_bits(std::span<const GGMParams> params_seq,
                 std::span<const std::int32_t> symbols);

// Same with one shared parameter set.
double rate_bits(const GGMParams& params, std::span<const std::int32_t> symbols);

// Moment-matching fit with fixed shape: alpha = mean|x - mu| *
// Gamma(1/beta) / Gamma(2/beta), clamped to [kAlphaMin, kAlphaMax].
// mu is fixed_mu when given, otherwise the sample mean.
GGMParams ggm_fit_moment(std::span<const double> samples, double beta,
                         std::optional<double> fixed_mu = 0.0);

}  // namespace rdlab::ggm

#endif  // RDLAB_GGM_HPP_
