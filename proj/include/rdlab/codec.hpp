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

#ifndef RDLAB_CODEC_HPP_
#define RDLAB_CODEC_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "rdlab/image.hpp"
#include "rdlab/rd_point.hpp"

namespace rdlab::codec {

// Base quantizer steps below this leave the coder's symbol alphabet.
inline constexpr double kDeltaMin = 0.25;

struct CodecConfig {
  double delta = 1.0;           // base quantizer step, >= kDeltaMin
  double beta = 1.5;            // generalized Gaussian shape
  bool color_transform = true;  // BT.601 full-range YCbCr (3-channel input)
  bool context_enabled = false; // checkerboard refinement stage
  double context_rho = 0.0;     // neighbor-prediction weight in [0, 1]
};

// Parsed bitstream container. serialize() lays it out byte-exactly as:
//   magic "GGLC" | version u8 | width u32be | height u32be | channels u8 |
//   flags u8 (bit0 color transform, bit1 context) | delta f32be |
//   beta f32be | context_rho f32be | payload CRC32 u32be |
//   side length u32be + bytes | per channel: length u32be + bytes
// The CRC covers every byte after the CRC field.
struct EncodedImage {
  std::uint8_t version = 1;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint8_t channels = 1;
  bool color_transform = false;
  bool context_enabled = false;
  float delta = 1.0f;
  float beta = 1.5f;
  float context_rho = 0.0f;
  std::vector<std::uint8_t> side_stream;
  std::vector<std::vector<std::uint8_t>> coeff_streams;  // one per channel

  std::size_t payload_bytes() const;
};

std::vector<std::uint8_t> serialize(const EncodedImage& enc);

// Parses and validates a bitstream (magic, version, CRC, stream lengths).
// Throws FormatError on any mismatch.
EncodedImage parse_encoded(std::span<const std::uint8_t> bytes);

// Ideal vs realized size of one coded stream.
struct StreamStats {
  double estimated_bits = 0.0;  // sum of -log2 p over the coded symbols
  std::size_t actual_bits = 0;  // 8 * stream bytes
};

struct EncodeResult {
  EncodedImage encoded;
  RDPoint rd;
  StreamStats side_stats;
  std::vector<StreamStats> coeff_stats;  // per channel
};

// Full pipeline: optional YCbCr, pad to multiples of 8 by edge replication,
// per-channel 8x8 DCT, DC DPCM, uniform quantization, per-subband
// generalized-Gaussian fit with coded scale side information, range coding.
// rd reports bpp over side + coefficient stream bytes and PSNR against the
// decoded image.
EncodeResult encode_image(const img::ImageBuffer& image,
                          const CodecConfig& cfg);

img::ImageBuffer decode_image(const EncodedImage& enc);

// L = bpp + lambda * MSE (0-255 sample scale). lambda must be positive.
double rd_loss(const RDPoint& point, double lambda);

// Per-delta averages over the image set: mean bpp, PSNR from mean MSE.
// Points come back sorted by bpp ascending. Requires >= 1 image and
// >= 2 deltas. The plain version encodes the (image, delta) grid under
// OpenMP with a fixed reduction order; the serial version is the reference.
std::vector<RDPoint> rd_sweep(std::span<const img::ImageBuffer> images,
                              std::span<const double> deltas,
                              const CodecConfig& cfg);
std::vector<RDPoint> rd_sweep_serial(std::span<const img::ImageBuffer> images,
                                     std::span<const double> deltas,
                                     const CodecConfig& cfg);

}  // namespace rdlab::codec

#endif  // RDLAB_CODEC_HPP_
