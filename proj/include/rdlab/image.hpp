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

#ifndef RDLAB_IMAGE_HPP_
#define RDLAB_IMAGE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace rdlab::img {

// 8-bit image, interleaved row-major samples (PPM order).
struct ImageBuffer {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 (gray) or 3 (RGB)
  std::vector<std::uint8_t> samples;

  std::size_t sample_count() const { return samples.size(); }
  std::uint8_t at(int x, int y, int c) const {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t& at(int x, int y, int c) {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

// Reads a binary PPM (P6, 3 channels) or PGM (P5, 1 channel) with
// maxval 255. Throws IoError when the file cannot be opened and FormatError
// for malformed headers, truncated payloads, or unsupported bit depths.
ImageBuffer load_image(const std::string& path);

// Writes P5 for 1-channel and P6 for 3-channel buffers. save then load is
// the identity.
void save_image(const ImageBuffer& image, const std::string& path);

// Sentinel returned by psnr() for identical images (MSE = 0).
double infinite_psnr();

// Mean squared error over all samples (0-255 scale). Dimensions must match.
double mse(const ImageBuffer& a, const ImageBuffer& b);

// 10 * log10(255^2 / MSE); infinite_psnr() when MSE is zero.
double psnr(const ImageBuffer& a, const ImageBuffer& b);

double psnr_from_mse(double mse_value);

}  // namespace rdlab::img

#endif  // RDLAB_IMAGE_HPP_
