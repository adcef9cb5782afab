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
//
// Benchmarks the OpenMP kernels against their serial references:
// block DCT batches, the floor-fit grid search, and an RD sweep grid.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "rdlab/codec.hpp"
#include "rdlab/dct.hpp"
#include "rdlab/image.hpp"
#include "rdlab/parallel.hpp"
#include "rdlab/scaling.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double time_ms(Fn&& fn, int repeats) {
  const auto t0 = Clock::now();
  for (int i = 0; i < repeats; ++i) fn();
  const auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / repeats;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

rdlab::img::ImageBuffer noise_image(unsigned seed, int w, int h, int ch) {
  rdlab::img::ImageBuffer image;
  image.width = w;
  image.height = h;
  image.channels = ch;
  image.samples.resize(static_cast<std::size_t>(w) * h * ch);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> d(0, 255);
  int x = 0;
  for (auto& s : image.samples) {
    // Smooth-ish ramp plus noise keeps the entropy realistic.
    s = static_cast<std::uint8_t>((d(rng) + x++ / 64) % 256);
  }
  return image;
}

}  // namespace

int main() {
  std::printf("threads: %d\n\n", rdlab::thread_count());

  {
    const std::size_t n_blocks = 100000;
    std::vector<double> in(n_blocks * rdlab::dct::kBlockSize);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> d(-128.0, 127.0);
    for (auto& v : in) v = d(rng);
    std::vector<double> out(in.size());
    const double serial = time_ms(
        [&] { rdlab::dct::forward_blocks_serial(in, out); }, 3);
    const double parallel =
        time_ms([&] { rdlab::dct::forward_blocks(in, out); }, 3);
    report("dct forward, 100k blocks", serial, parallel);
  }

  {
    std::vector<rdlab::scaling::ScalePoint> pts;
    std::mt19937 rng(2);
    std::lognormal_distribution<double> noise(0.0, 0.02);
    for (int i = 0; i < 64; ++i) {
      const double x = std::pow(1.35, i);
      pts.push_back(rdlab::scaling::ScalePoint{
          x, (0.4 + 1.2 * std::pow(x, -0.21)) * noise(rng)});
    }
    const double serial = time_ms(
        [&] { (void)rdlab::scaling::fit_power_law_floor_serial(pts); }, 20);
    const double parallel = time_ms(
        [&] { (void)rdlab::scaling::fit_power_law_floor(pts); }, 20);
    report("floor fit, 64-point grid", serial, parallel);
  }

  {
    std::vector<rdlab::img::ImageBuffer> images;
    for (unsigned s = 0; s < 4; ++s) {
      images.push_back(noise_image(s, 256, 256, 3));
    }
    const std::vector<double> deltas{1.0, 2.0, 4.0, 8.0};
    rdlab::codec::CodecConfig cfg;
    const double serial = time_ms(
        [&] { (void)rdlab::codec::rd_sweep_serial(images, deltas, cfg); }, 1);
    const double parallel = time_ms(
        [&] { (void)rdlab::codec::rd_sweep(images, deltas, cfg); }, 1);
    report("rd sweep, 4 images x 4", serial, parallel);
  }

  return 0;
}
