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

#include "rdlab/range_coder.hpp"

#include <algorithm>
#include <stdexcept>

namespace rdlab::rc {

namespace {

constexpr std::uint32_t kTop = 1u << 24;

// cum index of the symbol within its table.
std::size_t symbol_index(std::int32_t symbol, const ggm::CdfTable& table) {
  if (!table.contains(symbol)) {
    throw std::invalid_argument("range coder: symbol out of table range");
  }
  return static_cast<std::size_t>(symbol - table.min_symbol);
}

}  // namespace

void RangeEncoder::put(std::int32_t symbol, const ggm::CdfTable& table) {
  const std::size_t idx = symbol_index(symbol, table);
  const std::uint32_t cum = table.cum_freqs[idx];
  const std::uint32_t freq = table.cum_freqs[idx + 1] - cum;

  const std::uint32_t r = range_ / table.total;
  low_ += static_cast<std::uint64_t>(cum) * r;
  range_ = freq * r;
  while (range_ < kTop) {
    shift_low();
    range_ <<= 8;
  }
}

void RangeEncoder::shift_low() {
  // Emit once the top byte can no longer change: either the carry already
  // arrived (bit 32) or low is safely below 0xFF......
  if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const std::uint8_t carry = static_cast<std::uint8_t>(low_ >> 32);
    std::uint8_t byte = cache_;
    do {
      out_.push_back(static_cast<std::uint8_t>(byte + carry));
      byte = 0xFF;
    } while (--pending_ != 0);
    cache_ = static_cast<std::uint8_t>(low_ >> 24);
  }
  ++pending_;
  low_ = (low_ & 0x00FFFFFFull) << 8;
}

std::vector<std::uint8_t> RangeEncoder::finish() {
  for (int i = 0; i < 5; ++i) shift_low();
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> stream)
    : stream_(stream) {
  next_byte();  // zero carry anchor
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() {
  // Past-the-end reads yield zeros: truncated input decodes best-effort.
  return pos_ < stream_.size() ? stream_[pos_++] : 0u;
}

std::int32_t RangeDecoder::get(const ggm::CdfTable& table) {
  const std::uint32_t r = range_ / table.total;
  const std::uint32_t value = std::min(code_ / r, table.total - 1);

  // First cum strictly above value, minus one, is the symbol slot.
  const auto it = std::upper_bound(table.cum_freqs.begin() + 1,
                                   table.cum_freqs.end(), value);
  const std::size_t idx =
      static_cast<std::size_t>(it - table.cum_freqs.begin()) - 1;

  const std::uint32_t cum = table.cum_freqs[idx];
  const std::uint32_t freq = table.cum_freqs[idx + 1] - cum;
  code_ -= cum * r;
  range_ = freq * r;
  while (range_ < kTop) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
  return table.min_symbol + static_cast<std::int32_t>(idx);
}

std::vector<std::uint8_t> rc_encode(std::span<const std::int32_t> symbols,
                                    std::span<const ggm::CdfTable* const> tables) {
  if (symbols.size() != tables.size()) {
    throw std::invalid_argument("rc_encode: length mismatch");
  }
  RangeEncoder enc;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    enc.put(symbols[i], *tables[i]);
  }
  return enc.finish();
}

std::vector<std::uint8_t> rc_encode(std::span<const std::int32_t> symbols,
                                    const ggm::CdfTable& table) {
  RangeEncoder enc;
  for (const std::int32_t s : symbols) enc.put(s, table);
  return enc.finish();
}

std::vector<std::int32_t> rc_decode(std::span<const std::uint8_t> stream,
                                    std::span<const ggm::CdfTable* const> tables) {
  RangeDecoder dec(stream);
  std::vector<std::int32_t> symbols;
  symbols.reserve(tables.size());
  for (const ggm::CdfTable* table : tables) symbols.push_back(dec.get(*table));
  return symbols;
}

std::vector<std::int32_t> rc_decode(std::span<const std::uint8_t> stream,
                                    const ggm::CdfTable& table, std::size_t n) {
  RangeDecoder dec(stream);
  std::vector<std::int32_t> symbols;
  symbols.reserve(n);
  for (std::size_t i = 0; i < n; ++i) symbols.push_back(dec.get(table));
  return symbols;
}

}  // namespace rdlab::rc
