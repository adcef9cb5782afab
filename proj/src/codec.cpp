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

#include "rdlab/codec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "rdlab/dct.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/ggm.hpp"
#include "rdlab/parallel.hpp"
#include "rdlab/range_coder.hpp"

namespace rdlab::codec {

namespace {

constexpr int kSubbands = dct::kBlockSize;  // 64 zigzag subbands per channel
constexpr int kAlphaLevels = 64;
constexpr std::int32_t kBoundMin = -8192;
constexpr std::int32_t kBoundMax = 8192;
constexpr int kTableBits = 16;

// ---------------------------------------------------------------------------
// CRC32 (IEEE 802.3, reflected, poly 0xEDB88320)

std::uint32_t crc32(std::span<const std::uint8_t> data) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) {
        c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      }
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (const std::uint8_t b : data) {
    crc = table[(crc ^ b) & 0xFFu] ^ (crc >> 8);
  }
  return crc ^ 0xFFFFFFFFu;
}

// ---------------------------------------------------------------------------
// Big-endian serialization helpers

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u32(out, bits);
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  std::vector<std::uint8_t> bytes(std::size_t n) {
    need(n);
    std::vector<std::uint8_t> out(data_.begin() + pos_,
                                  data_.begin() + pos_ + n);
    pos_ += n;
    return out;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw FormatError("bitstream: truncated");
  }
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Zigzag scan order: zigzag_pos[z] is the row-major block position of
// subband z.

std::array<int, kSubbands> make_zigzag() {
  std::array<int, kSubbands> zz{};
  int x = 0, y = 0;
  for (int i = 0; i < kSubbands; ++i) {
    zz[i] = y * dct::kBlockDim + x;
    if ((x + y) % 2 == 0) {
      if (x == dct::kBlockDim - 1) {
        ++y;
      } else if (y == 0) {
        ++x;
      } else {
        ++x;
        --y;
      }
    } else {
      if (y == dct::kBlockDim - 1) {
        ++x;
      } else if (x == 0) {
        ++y;
      } else {
        --x;
        ++y;
      }
    }
  }
  return zz;
}

const std::array<int, kSubbands>& zigzag() {
  static const std::array<int, kSubbands> zz = make_zigzag();
  return zz;
}

// ---------------------------------------------------------------------------
// Scale grid: 64 geometric levels spanning [kAlphaMin, kAlphaMax].

double alpha_from_index(int idx) {
  return ggm::kAlphaMin *
         std::pow(ggm::kAlphaMax / ggm::kAlphaMin,
                  static_cast<double>(idx) / (kAlphaLevels - 1));
}

int alpha_index(double alpha) {
  const double t = std::log(alpha / ggm::kAlphaMin) /
                   std::log(ggm::kAlphaMax / ggm::kAlphaMin);
  const long idx = std::lround(t * (kAlphaLevels - 1));
  return static_cast<int>(std::clamp(idx, 0l, long{kAlphaLevels - 1}));
}

// ---------------------------------------------------------------------------
// Color transform: BT.601 full-range (JPEG) YCbCr.

void rgb_to_ycbcr(double r, double g, double b, double* y, double* cb,
                  double* cr) {
  *y = 0.299 * r + 0.587 * g + 0.114 * b;
  *cb = -0.1687358916 * r - 0.3312641084 * g + 0.5 * b + 128.0;
  *cr = 0.5 * r - 0.4186875892 * g - 0.0813124108 * b + 128.0;
}

void ycbcr_to_rgb(double y, double cb, double cr, double* r, double* g,
                  double* b) {
  *r = y + 1.402 * (cr - 128.0);
  *g = y - 0.3441362862 * (cb - 128.0) - 0.7141362862 * (cr - 128.0);
  *b = y + 1.772 * (cb - 128.0);
}

// ---------------------------------------------------------------------------
// Geometry of the padded block grid.

struct Grid {
  int width, height;          // unpadded pixels
  int padded_w, padded_h;     // multiples of 8
  int bw, bh;                 // blocks per row / column
  int nblocks;
};

Grid make_grid(int width, int height) {
  Grid g;
  g.width = width;
  g.height = height;
  g.padded_w = (width + dct::kBlockDim - 1) / dct::kBlockDim * dct::kBlockDim;
  g.padded_h = (height + dct::kBlockDim - 1) / dct::kBlockDim * dct::kBlockDim;
  g.bw = g.padded_w / dct::kBlockDim;
  g.bh = g.padded_h / dct::kBlockDim;
  g.nblocks = g.bw * g.bh;
  return g;
}

// Centered planes (sample - 128), one per coded channel.
std::vector<std::vector<double>> make_planes(const img::ImageBuffer& image,
                                             bool color_transform) {
  const std::size_t pixels =
      static_cast<std::size_t>(image.width) * image.height;
  std::vector<std::vector<double>> planes(
      image.channels, std::vector<double>(pixels));
  if (color_transform && image.channels == 3) {
    for (std::size_t i = 0; i < pixels; ++i) {
      double y, cb, cr;
      rgb_to_ycbcr(image.samples[3 * i], image.samples[3 * i + 1],
                   image.samples[3 * i + 2], &y, &cb, &cr);
      planes[0][i] = y - 128.0;
      planes[1][i] = cb - 128.0;
      planes[2][i] = cr - 128.0;
    }
  } else {
    for (int c = 0; c < image.channels; ++c) {
      for (std::size_t i = 0; i < pixels; ++i) {
        planes[c][i] =
            static_cast<double>(image.samples[i * image.channels + c]) - 128.0;
      }
    }
  }
  return planes;
}

// Pad by edge replication and gather into contiguous 8x8 blocks,
// raster block order, row-major within a block.
std::vector<double> gather_blocks(const std::vector<double>& plane,
                                  const Grid& g) {
  std::vector<double> blocks(static_cast<std::size_t>(g.nblocks) *
                             dct::kBlockSize);
  for (int by = 0; by < g.bh; ++by) {
    for (int bx = 0; bx < g.bw; ++bx) {
      double* dst =
          blocks.data() + static_cast<std::size_t>(by * g.bw + bx) *
                              dct::kBlockSize;
      for (int y = 0; y < dct::kBlockDim; ++y) {
        const int sy = std::min(by * dct::kBlockDim + y, g.height - 1);
        for (int x = 0; x < dct::kBlockDim; ++x) {
          const int sx = std::min(bx * dct::kBlockDim + x, g.width - 1);
          dst[y * dct::kBlockDim + x] =
              plane[static_cast<std::size_t>(sy) * g.width + sx];
        }
      }
    }
  }
  return blocks;
}

std::vector<double> scatter_blocks(const std::vector<double>& blocks,
                                   const Grid& g) {
  std::vector<double> plane(static_cast<std::size_t>(g.width) * g.height);
  for (int by = 0; by < g.bh; ++by) {
    for (int bx = 0; bx < g.bw; ++bx) {
      const double* src =
          blocks.data() + static_cast<std::size_t>(by * g.bw + bx) *
                              dct::kBlockSize;
      for (int y = 0; y < dct::kBlockDim; ++y) {
        const int sy = by * dct::kBlockDim + y;
        if (sy >= g.height) continue;
        for (int x = 0; x < dct::kBlockDim; ++x) {
          const int sx = bx * dct::kBlockDim + x;
          if (sx >= g.width) continue;
          plane[static_cast<std::size_t>(sy) * g.width + sx] =
              src[y * dct::kBlockDim + x];
        }
      }
    }
  }
  return plane;
}

// ---------------------------------------------------------------------------
// Per-subband coding plan, shared between encoder and decoder. The side
// stream carries, per (channel, subband): an all-zero flag; when the subband
// is live, the scale index plus the symbol bounds the tables are built over,
// and pass-2 residual bounds when the context stage predicts (rho != 0).

struct SubbandPlan {
  bool empty = true;
  int alpha_idx = 0;
  std::int32_t lo = 0, hi = 0;
  std::int32_t lo2 = 0, hi2 = 0;
};

struct SideTables {
  ggm::CdfTable flag = ggm::build_uniform_cdf_table(0, 2, kTableBits);
  ggm::CdfTable alpha =
      ggm::build_uniform_cdf_table(0, kAlphaLevels, kTableBits);
  ggm::CdfTable bound = ggm::build_uniform_cdf_table(
      kBoundMin, static_cast<std::uint32_t>(kBoundMax - kBoundMin + 1),
      kTableBits);
};

const SideTables& side_tables() {
  static const SideTables tables;
  return tables;
}

double table_bits(const ggm::CdfTable& t, std::int32_t symbol) {
  const std::size_t idx = static_cast<std::size_t>(symbol - t.min_symbol);
  const double p = static_cast<double>(t.freq(idx)) / t.total;
  return -std::log2(p);
}

bool wants_pass2_bounds(const EncodedImage& header_like, int subband) {
  return header_like.context_enabled && header_like.context_rho != 0.0f &&
         subband > 0;
}

// Checkerboard split: pass 1 = even (bx + by), pass 2 = odd. Pass-2 symbols
// are coded as residuals against mu_hat.
bool is_pass2(int bx, int by) { return (bx + by) % 2 != 0; }

std::int32_t predict_mu(const std::vector<std::int32_t>& seq, int bx, int by,
                        const Grid& g, double rho) {
  long sum = 0;
  int cnt = 0;
  if (bx > 0) {
    sum += seq[by * g.bw + bx - 1];
    ++cnt;
  }
  if (bx + 1 < g.bw) {
    sum += seq[by * g.bw + bx + 1];
    ++cnt;
  }
  if (by > 0) {
    sum += seq[(by - 1) * g.bw + bx];
    ++cnt;
  }
  if (by + 1 < g.bh) {
    sum += seq[(by + 1) * g.bw + bx];
    ++cnt;
  }
  if (cnt == 0) return 0;
  return static_cast<std::int32_t>(
      std::lround(rho * static_cast<double>(sum) / cnt));
}

ggm::CdfTable make_subband_table(double alpha, double beta, std::int32_t lo,
                                 std::int32_t hi) {
  return ggm::build_cdf_table(ggm::GGMParams{0.0, alpha, beta}, lo, hi,
                              kTableBits);
}

void validate_config(const CodecConfig& cfg) {
  if (!(cfg.delta >= kDeltaMin) || !std::isfinite(cfg.delta)) {
    throw std::invalid_argument("codec: delta must be >= 0.25");
  }
  if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta)) {
    throw std::invalid_argument("codec: beta must be positive");
  }
  if (!(cfg.context_rho >= 0.0 && cfg.context_rho <= 1.0)) {
    throw std::invalid_argument("codec: context_rho must be in [0, 1]");
  }
}

// The header stores the quantizer parameters as binary32; coding must use
// exactly the values the decoder will read back.
CodecConfig normalized_through_header(const CodecConfig& cfg) {
  CodecConfig out = cfg;
  out.delta = static_cast<double>(static_cast<float>(cfg.delta));
  out.beta = static_cast<double>(static_cast<float>(cfg.beta));
  out.context_rho = static_cast<double>(static_cast<float>(cfg.context_rho));
  return out;
}

// ---------------------------------------------------------------------------
// Symbol reconstruction -> pixels, shared by decode_image.

img::ImageBuffer reconstruct(const EncodedImage& enc,
                             const std::vector<std::vector<std::int32_t>>& symbols) {
  const Grid g = make_grid(static_cast<int>(enc.width),
                           static_cast<int>(enc.height));
  const double delta = static_cast<double>(enc.delta);
  const auto& zz = zigzag();

  img::ImageBuffer out;
  out.width = g.width;
  out.height = g.height;
  out.channels = enc.channels;
  out.samples.resize(static_cast<std::size_t>(g.width) * g.height *
                     enc.channels);

  std::vector<std::vector<double>> planes(enc.channels);
  for (int c = 0; c < enc.channels; ++c) {
    std::vector<double> coeffs(static_cast<std::size_t>(g.nblocks) *
                               dct::kBlockSize);
    for (int z = 0; z < kSubbands; ++z) {
      const int pos = zz[z];
      const std::vector<std::int32_t>& seq = symbols[c];
      for (int b = 0; b < g.nblocks; ++b) {
        coeffs[static_cast<std::size_t>(b) * dct::kBlockSize + pos] =
            static_cast<double>(seq[static_cast<std::size_t>(z) * g.nblocks +
                                    b]) *
            delta;
      }
    }
    std::vector<double> blocks(coeffs.size());
    dct::inverse_blocks(coeffs, blocks);
    planes[c] = scatter_blocks(blocks, g);
  }

  const bool use_color = enc.color_transform && enc.channels == 3;
  const std::size_t pixels = static_cast<std::size_t>(g.width) * g.height;
  for (std::size_t i = 0; i < pixels; ++i) {
    if (use_color) {
      double r, gg, b;
      ycbcr_to_rgb(planes[0][i] + 128.0, planes[1][i] + 128.0,
                   planes[2][i] + 128.0, &r, &gg, &b);
      const double rgb[3] = {r, gg, b};
      for (int c = 0; c < 3; ++c) {
        out.samples[3 * i + c] = static_cast<std::uint8_t>(
            std::clamp<long>(std::lround(rgb[c]), 0, 255));
      }
    } else {
      for (int c = 0; c < enc.channels; ++c) {
        out.samples[i * enc.channels + c] = static_cast<std::uint8_t>(
            std::clamp<long>(std::lround(planes[c][i] + 128.0), 0, 255));
      }
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Container

std::size_t EncodedImage::payload_bytes() const {
  std::size_t n = 4 + side_stream.size();
  for (const auto& s : coeff_streams) n += 4 + s.size();
  return n;
}

std::vector<std::uint8_t> serialize(const EncodedImage& enc) {
  std::vector<std::uint8_t> payload;
  payload.reserve(enc.payload_bytes());
  put_u32(payload, static_cast<std::uint32_t>(enc.side_stream.size()));
  payload.insert(payload.end(), enc.side_stream.begin(),
                 enc.side_stream.end());
  for (const auto& s : enc.coeff_streams) {
    put_u32(payload, static_cast<std::uint32_t>(s.size()));
    payload.insert(payload.end(), s.begin(), s.end());
  }

  std::vector<std::uint8_t> out;
  out.reserve(31 + payload.size());
  out.push_back('G');
  out.push_back('G');
  out.push_back('L');
  out.push_back('C');
  out.push_back(enc.version);
  put_u32(out, enc.width);
  put_u32(out, enc.height);
  out.push_back(enc.channels);
  std::uint8_t flags = 0;
  if (enc.color_transform) flags |= 1u;
  if (enc.context_enabled) flags |= 2u;
  out.push_back(flags);
  put_f32(out, enc.delta);
  put_f32(out, enc.beta);
  put_f32(out, enc.context_rho);
  put_u32(out, crc32(payload));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

EncodedImage parse_encoded(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u8() != 'G' || r.u8() != 'G' || r.u8() != 'L' || r.u8() != 'C') {
    throw FormatError("bitstream: bad magic");
  }
  EncodedImage enc;
  enc.version = r.u8();
  if (enc.version != 1) throw FormatError("bitstream: unsupported version");
  enc.width = r.u32();
  enc.height = r.u32();
  enc.channels = r.u8();
  if (enc.width == 0 || enc.height == 0 || enc.width > (1u << 16) ||
      enc.height > (1u << 16) ||
      (enc.channels != 1 && enc.channels != 3)) {
    throw FormatError("bitstream: bad dimensions");
  }
  const std::uint8_t flags = r.u8();
  if ((flags & ~3u) != 0) throw FormatError("bitstream: unknown flags");
  enc.color_transform = (flags & 1u) != 0;
  enc.context_enabled = (flags & 2u) != 0;
  enc.delta = r.f32();
  enc.beta = r.f32();
  enc.context_rho = r.f32();
  const std::uint32_t stored_crc = r.u32();

  const std::size_t payload_len = r.remaining();
  std::vector<std::uint8_t> payload = r.bytes(payload_len);
  if (crc32(payload) != stored_crc) {
    throw FormatError("bitstream: payload CRC mismatch");
  }

  ByteReader pr(payload);
  enc.side_stream = pr.bytes(pr.u32());
  enc.coeff_streams.resize(enc.channels);
  for (int c = 0; c < enc.channels; ++c) {
    enc.coeff_streams[c] = pr.bytes(pr.u32());
  }
  if (pr.remaining() != 0) throw FormatError("bitstream: trailing bytes");
  if (!(static_cast<double>(enc.delta) >= kDeltaMin) ||
      !(enc.beta > 0.0f)) {
    throw FormatError("bitstream: config out of range");
  }
  return enc;
}

// ---------------------------------------------------------------------------
// Encoder

EncodeResult encode_image(const img::ImageBuffer& image,
                          const CodecConfig& cfg_in) {
  validate_config(cfg_in);
  if (image.channels != 1 && image.channels != 3) {
    throw std::invalid_argument("codec: channels must be 1 or 3");
  }
  if (image.width <= 0 || image.height <= 0 ||
      image.samples.size() != static_cast<std::size_t>(image.width) *
                                  image.height * image.channels) {
    throw std::invalid_argument("codec: bad image buffer");
  }
  const CodecConfig cfg = normalized_through_header(cfg_in);
  const Grid g = make_grid(image.width, image.height);
  const auto& zz = zigzag();
  const double rho = cfg.context_enabled ? cfg.context_rho : 0.0;

  EncodedImage enc;
  enc.width = static_cast<std::uint32_t>(image.width);
  enc.height = static_cast<std::uint32_t>(image.height);
  enc.channels = static_cast<std::uint8_t>(image.channels);
  enc.color_transform = cfg.color_transform;
  enc.context_enabled = cfg.context_enabled;
  enc.delta = static_cast<float>(cfg.delta);
  enc.beta = static_cast<float>(cfg.beta);
  enc.context_rho = static_cast<float>(cfg.context_rho);

  const auto planes = make_planes(image, cfg.color_transform);

  // Transform + quantize every channel, then split into subband sequences.
  // sequences[c][z * nblocks + b] holds the coded symbol of block b in
  // subband z: DC DPCM residuals for z = 0, plain quantized symbols above.
  std::vector<std::vector<std::int32_t>> sequences(image.channels);
  const int threads = rdlab::thread_count();
  for (int c = 0; c < image.channels; ++c) {
    const std::vector<double> blocks = gather_blocks(planes[c], g);
    std::vector<double> coeffs(blocks.size());
    dct::forward_blocks(blocks, coeffs);

    std::vector<std::int32_t>& seq = sequences[c];
    seq.assign(static_cast<std::size_t>(kSubbands) * g.nblocks, 0);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int b = 0; b < g.nblocks; ++b) {
      const double* cb = coeffs.data() +
                         static_cast<std::size_t>(b) * dct::kBlockSize;
      for (int z = 0; z < kSubbands; ++z) {
        seq[static_cast<std::size_t>(z) * g.nblocks + b] =
            static_cast<std::int32_t>(std::lround(cb[zz[z]] / cfg.delta));
      }
    }
    // DC DPCM: previous-block predictor, raster order.
    std::int32_t prev_dc = 0;
    for (int b = 0; b < g.nblocks; ++b) {
      const std::int32_t dc = seq[b];
      seq[b] = dc - prev_dc;
      prev_dc = dc;
    }
  }

  // Per-subband plans: all-zero flag, moment-fitted scale on the coded
  // residuals (mu = 0), snug symbol bounds.
  std::vector<std::vector<SubbandPlan>> plans(
      image.channels, std::vector<SubbandPlan>(kSubbands));
  for (int c = 0; c < image.channels; ++c) {
#pragma omp parallel for schedule(static) num_threads(threads)
    for (int z = 0; z < kSubbands; ++z) {
      const std::int32_t* seq =
          sequences[c].data() + static_cast<std::size_t>(z) * g.nblocks;
      SubbandPlan& plan = plans[c][z];
      std::int32_t lo = seq[0], hi = seq[0];
      bool all_zero = true;
      std::vector<double> values(g.nblocks);
      for (int b = 0; b < g.nblocks; ++b) {
        lo = std::min(lo, seq[b]);
        hi = std::max(hi, seq[b]);
        all_zero = all_zero && seq[b] == 0;
        values[b] = static_cast<double>(seq[b]);
      }
      plan.empty = all_zero;
      if (all_zero) continue;
      const ggm::GGMParams fit = ggm::ggm_fit_moment(values, cfg.beta, 0.0);
      plan.alpha_idx = alpha_index(fit.alpha);
      plan.lo = lo;
      plan.hi = hi;
      if (wants_pass2_bounds(enc, z)) {
        std::int32_t lo2 = 0, hi2 = 0;
        bool first = true;
        std::vector<std::int32_t> full(seq, seq + g.nblocks);
        for (int by = 0; by < g.bh; ++by) {
          for (int bx = 0; bx < g.bw; ++bx) {
            if (!is_pass2(bx, by)) continue;
            const std::int32_t r =
                full[by * g.bw + bx] - predict_mu(full, bx, by, g, rho);
            if (first) {
              lo2 = hi2 = r;
              first = false;
            } else {
              lo2 = std::min(lo2, r);
              hi2 = std::max(hi2, r);
            }
          }
        }
        plan.lo2 = lo2;
        plan.hi2 = hi2;
      }
    }
  }

  EncodeResult result;

  // Side stream: R(z-hat). flag, then scale index and bounds per live band.
  {
    const SideTables& st = side_tables();
    rc::RangeEncoder side;
    double est = 0.0;
    for (int c = 0; c < image.channels; ++c) {
      for (int z = 0; z < kSubbands; ++z) {
        const SubbandPlan& plan = plans[c][z];
        side.put(plan.empty ? 1 : 0, st.flag);
        est += table_bits(st.flag, plan.empty ? 1 : 0);
        if (plan.empty) continue;
        side.put(plan.alpha_idx, st.alpha);
        side.put(plan.lo, st.bound);
        side.put(plan.hi, st.bound);
        est += table_bits(st.alpha, plan.alpha_idx) +
               table_bits(st.bound, plan.lo) + table_bits(st.bound, plan.hi);
        if (wants_pass2_bounds(enc, z)) {
          side.put(plan.lo2, st.bound);
          side.put(plan.hi2, st.bound);
          est += table_bits(st.bound, plan.lo2) +
                 table_bits(st.bound, plan.hi2);
        }
      }
    }
    enc.side_stream = side.finish();
    result.side_stats.estimated_bits = est;
    result.side_stats.actual_bits = enc.side_stream.size() * 8;
  }

  // Coefficient streams: R(y-hat), one per channel.
  enc.coeff_streams.resize(image.channels);
  result.coeff_stats.resize(image.channels);
  for (int c = 0; c < image.channels; ++c) {
    rc::RangeEncoder coder;
    double est = 0.0;
    for (int z = 0; z < kSubbands; ++z) {
      const SubbandPlan& plan = plans[c][z];
      if (plan.empty) continue;
      const double alpha = alpha_from_index(plan.alpha_idx);
      const ggm::GGMParams params{0.0, alpha, cfg.beta};
      const ggm::CdfTable table =
          make_subband_table(alpha, cfg.beta, plan.lo, plan.hi);
      const std::int32_t* seq =
          sequences[c].data() + static_cast<std::size_t>(z) * g.nblocks;

      if (!cfg.context_enabled || z == 0) {
        for (int b = 0; b < g.nblocks; ++b) coder.put(seq[b], table);
        est += ggm::rate_bits(params,
                              std::span(seq, static_cast<std::size_t>(g.nblocks)));
        continue;
      }

      // Checkerboard: anchors first, then the predicted pass.
      const std::vector<std::int32_t> full(seq, seq + g.nblocks);
      std::vector<std::int32_t> pass2_residuals;
      for (int by = 0; by < g.bh; ++by) {
        for (int bx = 0; bx < g.bw; ++bx) {
          if (is_pass2(bx, by)) continue;
          coder.put(full[by * g.bw + bx], table);
          est += -std::log2(ggm::ggm_pmf_integer(params, full[by * g.bw + bx]));
        }
      }
      const bool predicted = wants_pass2_bounds(enc, z);
      const ggm::CdfTable table2 =
          predicted ? make_subband_table(alpha, cfg.beta, plan.lo2, plan.hi2)
                    : table;
      for (int by = 0; by < g.bh; ++by) {
        for (int bx = 0; bx < g.bw; ++bx) {
          if (!is_pass2(bx, by)) continue;
          std::int32_t value = full[by * g.bw + bx];
          if (predicted) value -= predict_mu(full, bx, by, g, rho);
          coder.put(value, table2);
          est += -std::log2(ggm::ggm_pmf_integer(params, value));
        }
      }
    }
    enc.coeff_streams[c] = coder.finish();
    result.coeff_stats[c].estimated_bits = est;
    result.coeff_stats[c].actual_bits = enc.coeff_streams[c].size() * 8;
  }

  result.encoded = std::move(enc);

  // Reconstruction runs the real decoder so the reported distortion is
  // bit-identical to what decode_image produces.
  const img::ImageBuffer decoded = decode_image(result.encoded);
  result.rd.mse = img::mse(image, decoded);
  result.rd.psnr = img::psnr_from_mse(result.rd.mse);
  std::size_t stream_bytes = result.encoded.side_stream.size();
  for (const auto& s : result.encoded.coeff_streams) stream_bytes += s.size();
  result.rd.bpp = static_cast<double>(stream_bytes) * 8.0 /
                  (static_cast<double>(image.width) * image.height);
  return result;
}

// ---------------------------------------------------------------------------
// Decoder

img::ImageBuffer decode_image(const EncodedImage& enc) {
  if (enc.version != 1) throw FormatError("decode: unsupported version");
  if (enc.channels != 1 && enc.channels != 3) {
    throw FormatError("decode: bad channel count");
  }
  if (enc.coeff_streams.size() != enc.channels) {
    throw FormatError("decode: stream count mismatch");
  }
  const Grid g = make_grid(static_cast<int>(enc.width),
                           static_cast<int>(enc.height));
  const double beta = static_cast<double>(enc.beta);
  const double rho =
      enc.context_enabled ? static_cast<double>(enc.context_rho) : 0.0;

  // Side info first.
  std::vector<std::vector<SubbandPlan>> plans(
      enc.channels, std::vector<SubbandPlan>(kSubbands));
  {
    const SideTables& st = side_tables();
    rc::RangeDecoder side(enc.side_stream);
    for (int c = 0; c < enc.channels; ++c) {
      for (int z = 0; z < kSubbands; ++z) {
        SubbandPlan& plan = plans[c][z];
        plan.empty = side.get(st.flag) != 0;
        if (plan.empty) continue;
        plan.alpha_idx = side.get(st.alpha);
        plan.lo = side.get(st.bound);
        plan.hi = side.get(st.bound);
        if (plan.lo > plan.hi) throw FormatError("decode: bad symbol bounds");
        if (wants_pass2_bounds(enc, z)) {
          plan.lo2 = side.get(st.bound);
          plan.hi2 = side.get(st.bound);
          if (plan.lo2 > plan.hi2) {
            throw FormatError("decode: bad residual bounds");
          }
        }
      }
    }
  }

  std::vector<std::vector<std::int32_t>> symbols(enc.channels);
  for (int c = 0; c < enc.channels; ++c) {
    symbols[c].assign(static_cast<std::size_t>(kSubbands) * g.nblocks, 0);
    rc::RangeDecoder coder(enc.coeff_streams[c]);
    for (int z = 0; z < kSubbands; ++z) {
      const SubbandPlan& plan = plans[c][z];
      if (plan.empty) continue;
      const double alpha = alpha_from_index(plan.alpha_idx);
      const ggm::CdfTable table =
          make_subband_table(alpha, beta, plan.lo, plan.hi);
      std::int32_t* seq =
          symbols[c].data() + static_cast<std::size_t>(z) * g.nblocks;

      if (!enc.context_enabled || z == 0) {
        for (int b = 0; b < g.nblocks; ++b) seq[b] = coder.get(table);
        continue;
      }

      std::vector<std::int32_t> full(g.nblocks, 0);
      for (int by = 0; by < g.bh; ++by) {
        for (int bx = 0; bx < g.bw; ++bx) {
          if (is_pass2(bx, by)) continue;
          full[by * g.bw + bx] = coder.get(table);
        }
      }
      const bool predicted = wants_pass2_bounds(enc, z);
      const ggm::CdfTable table2 =
          predicted ? make_subband_table(alpha, beta, plan.lo2, plan.hi2)
                    : table;
      for (int by = 0; by < g.bh; ++by) {
        for (int bx = 0; bx < g.bw; ++bx) {
          if (!is_pass2(bx, by)) continue;
          std::int32_t value = coder.get(table2);
          if (predicted) value += predict_mu(full, bx, by, g, rho);
          full[by * g.bw + bx] = value;
        }
      }
      std::copy(full.begin(), full.end(), seq);
    }

    // Undo the DC DPCM.
    std::int32_t dc = 0;
    for (int b = 0; b < g.nblocks; ++b) {
      dc += symbols[c][b];
      symbols[c][b] = dc;
    }
  }

  return reconstruct(enc, symbols);
}

double rd_loss(const RDPoint& point, double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("rd_loss: lambda must be positive");
  }
  return point.bpp + lambda * point.mse;
}

// ---------------------------------------------------------------------------
// RD sweep

namespace {

std::vector<RDPoint> sweep_reduce(
    std::span<const img::ImageBuffer> images, std::span<const double> deltas,
    const std::vector<RDPoint>& grid) {
  std::vector<RDPoint> points(deltas.size());
  const std::size_t n = images.size();
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    double bpp = 0.0, mse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      bpp += grid[d * n + i].bpp;
      mse += grid[d * n + i].mse;
    }
    points[d].bpp = bpp / static_cast<double>(n);
    points[d].mse = mse / static_cast<double>(n);
    points[d].psnr = img::psnr_from_mse(points[d].mse);
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const RDPoint& a, const RDPoint& b) {
                     return a.bpp < b.bpp;
                   });
  return points;
}

void validate_sweep(std::span<const img::ImageBuffer> images,
                    std::span<const double> deltas) {
  if (images.empty()) throw std::invalid_argument("rd_sweep: need >= 1 image");
  if (deltas.size() < 2) throw std::invalid_argument("rd_sweep: need >= 2 deltas");
}

}  // namespace

std::vector<RDPoint> rd_sweep(std::span<const img::ImageBuffer> images,
                              std::span<const double> deltas,
                              const CodecConfig& cfg) {
  validate_sweep(images, deltas);
  const std::ptrdiff_t total =
      static_cast<std::ptrdiff_t>(images.size() * deltas.size());
  std::vector<RDPoint> grid(total);
  const int threads = rdlab::thread_count();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t t = 0; t < total; ++t) {
    const std::size_t d = static_cast<std::size_t>(t) / images.size();
    const std::size_t i = static_cast<std::size_t>(t) % images.size();
    CodecConfig c = cfg;
    c.delta = deltas[d];
    grid[t] = encode_image(images[i], c).rd;
  }
  return sweep_reduce(images, deltas, grid);
}

std::vector<RDPoint> rd_sweep_serial(std::span<const img::ImageBuffer> images,
                                     std::span<const double> deltas,
                                     const CodecConfig& cfg) {
  validate_sweep(images, deltas);
  std::vector<RDPoint> grid(images.size() * deltas.size());
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    for (std::size_t i = 0; i < images.size(); ++i) {
      CodecConfig c = cfg;
      c.delta = deltas[d];
      grid[d * images.size() + i] = encode_image(images[i], c).rd;
    }
  }
  return sweep_reduce(images, deltas, grid);
}

}  // namespace rdlab::codec
