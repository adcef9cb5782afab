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

#ifndef RDLAB_RANGE_CODER_HPP_
#define RDLAB_RANGE_CODER_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "rdlab/ggm.hpp"

namespace rdlab::rc {

// Carry-propagating range coder: 32-bit range, byte-wise renormalization at
// 2^24, most significant byte first. Stream format, so that independent
// implementations interoperate:
//
//   encoder state: low = 0 (33-bit accumulator), range = 0xFFFFFFFF,
//                  cache byte + pending-0xFF counter for carry resolution
//   encode:        r = range / total; low += cum * r; range = freq * r
//   renormalize:   while (range < 2^24): emit one byte of (low >> 24) with
//                  carry propagation into already-buffered bytes,
//                  low = (low mod 2^24) << 8, range <<= 8
//   flush:         five renormalization steps
//
// The first stream byte is always the zero carry anchor; the decoder skips
// it and preloads the next four bytes into its code word. Keeping
// range >= 2^24 bounds the per-symbol truncation loss of the r = range /
// total division by log2(1 + 2^-8), which realizes table probabilities
// within the codec's 0.1% rate-consistency budget.
//
// Frequencies come from CdfTable (total <= 2^16). Reads past the end of a
// truncated stream yield zero bytes (best-effort decode, no checksum at this
// layer; integrity lives in the codec container CRC).
class RangeEncoder {
 public:
  // Encodes one symbol under a table. Throws std::invalid_argument when the
  // symbol is outside the table range.
  void put(std::int32_t symbol, const ggm::CdfTable& table);

  // Flushes the state and returns the stream. The encoder is spent after
  // this call.
  std::vector<std::uint8_t> finish();

  std::size_t bytes_written() const { return out_.size(); }

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t pending_ = 1;  // counts cache_ plus buffered 0xFF bytes
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> stream);

  // Decodes one symbol under the same table sequence used for encoding.
  std::int32_t get(const ggm::CdfTable& table);

 private:
  std::uint8_t next_byte();

  std::span<const std::uint8_t> stream_;
  std::size_t pos_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t code_ = 0;
};

// Encodes symbols[i] under tables[i]. Lengths must match.
std::vector<std::uint8_t> rc_encode(std::span<const std::int32_t> symbols,
                                    std::span<const ggm::CdfTable* const> tables);

// One shared table for every symbol.
std::vector<std::uint8_t> rc_encode(std::span<const std::int32_t> symbols,
                                    const ggm::CdfTable& table);

// Decodes n symbols under the given per-symbol tables.
std::vector<std::int32_t> rc_decode(std::span<const std::uint8_t> stream,
                                    std::span<const ggm::CdfTable* const> tables);

std::vector<std::int32_t> rc_decode(std::span<const std::uint8_t> stream,
                                    const ggm::CdfTable& table, std::size_t n);

}  // namespace rdlab::rc

#endif  // RDLAB_RANGE_CODER_HPP_
