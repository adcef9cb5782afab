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

#include "rdlab/dct.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace rdlab::dct;

TEST_CASE("constant block transforms to a pure DC term") {
  std::vector<double> block(kBlockSize, 3.25);
  std::vector<double> coeffs(kBlockSize);
  dct8_forward(block.data(), coeffs.data());
  CHECK(coeffs[0] == doctest::Approx(8.0 * 3.25).epsilon(1e-12));
  for (int i = 1; i < kBlockSize; ++i) {
    CHECK(std::fabs(coeffs[i]) < 1e-10);
  }
}

TEST_CASE("inverse(forward()) is identity and Parseval holds") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-128.0, 127.0);
  std::vector<double> block(kBlockSize), coeffs(kBlockSize),
      back(kBlockSize);
  for (int trial = 0; trial < 100; ++trial) {
    double energy_in = 0.0;
    for (double& v : block) {
      v = d(rng);
      energy_in += v * v;
    }
    dct8_forward(block.data(), coeffs.data());
    dct8_inverse(coeffs.data(), back.data());
    double energy_out = 0.0;
    for (int i = 0; i < kBlockSize; ++i) {
      CHECK(std::fabs(back[i] - block[i]) < 1e-10);
      energy_out += coeffs[i] * coeffs[i];
    }
    CHECK(std::fabs(energy_out - energy_in) < 1e-8);
  }
}

TEST_CASE("parallel separable kernel matches the serial direct reference") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> d(-128.0, 127.0);
  const std::size_t n_blocks = 257;
  std::vector<double> in(n_blocks * kBlockSize);
  for (double& v : in) v = d(rng);

  std::vector<double> fast(in.size()), ref(in.size());
  forward_blocks(in, fast);
  forward_blocks_serial(in, ref);
  for (std::size_t i = 0; i < in.size(); ++i) {
    CHECK(std::fabs(fast[i] - ref[i]) < 1e-10);
  }

  std::vector<double> fast_inv(in.size()), ref_inv(in.size());
  inverse_blocks(fast, fast_inv);
  inverse_blocks_serial(ref, ref_inv);
  for (std::size_t i = 0; i < in.size(); ++i) {
    CHECK(std::fabs(fast_inv[i] - ref_inv[i]) < 1e-10);
    CHECK(std::fabs(fast_inv[i] - in[i]) < 1e-9);
  }
}

TEST_CASE("batch kernels reject ragged buffers") {
  std::vector<double> in(65), out(65);
  CHECK_THROWS_AS(forward_blocks(in, out), std::invalid_argument);
}
