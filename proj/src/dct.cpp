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
#include <stdexcept>

#include "rdlab/parallel.hpp"

namespace rdlab::dct {

namespace {

struct Basis {
  // basis[k][n] = c_k * cos((2n+1) k pi / 16), c_0 = sqrt(1/8), c_k = 1/2.
  double b[kBlockDim][kBlockDim];
  Basis() {
    const double pi = std::acos(-1.0);
    for (int k = 0; k < kBlockDim; ++k) {
      const double ck = k == 0 ? std::sqrt(1.0 / kBlockDim)
                               : std::sqrt(2.0 / kBlockDim);
      for (int n = 0; n < kBlockDim; ++n) {
        b[k][n] = ck * std::cos((2.0 * n + 1.0) * k * pi /
                                (2.0 * kBlockDim));
      }
    }
  }
};

const Basis& basis() {
  static const Basis basis_table;
  return basis_table;
}

void check_blocks(std::span<const double> in, std::span<double> out) {
  if (in.size() != out.size() || in.size() % kBlockSize != 0) {
    throw std::invalid_argument("dct: buffer size must be a multiple of 64");
  }
}

}  // namespace

void dct8_forward(const double* block, double* coeffs) {
  const auto& B = basis().b;
  double rows[kBlockSize];
  // Rows, then columns.
  for (int y = 0; y < kBlockDim; ++y) {
    for (int k = 0; k < kBlockDim; ++k) {
      double acc = 0.0;
      for (int x = 0; x < kBlockDim; ++x) acc += B[k][x] * block[y * kBlockDim + x];
      rows[y * kBlockDim + k] = acc;
    }
  }
  for (int k = 0; k < kBlockDim; ++k) {
    for (int l = 0; l < kBlockDim; ++l) {
      double acc = 0.0;
      for (int y = 0; y < kBlockDim; ++y) acc += B[l][y] * rows[y * kBlockDim + k];
      coeffs[l * kBlockDim + k] = acc;
    }
  }
}

void dct8_inverse(const double* coeffs, double* block) {
  const auto& B = basis().b;
  double cols[kBlockSize];
  for (int k = 0; k < kBlockDim; ++k) {
    for (int y = 0; y < kBlockDim; ++y) {
      double acc = 0.0;
      for (int l = 0; l < kBlockDim; ++l) acc += B[l][y] * coeffs[l * kBlockDim + k];
      cols[y * kBlockDim + k] = acc;
    }
  }
  for (int y = 0; y < kBlockDim; ++y) {
    for (int x = 0; x < kBlockDim; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kBlockDim; ++k) acc += B[k][x] * cols[y * kBlockDim + k];
      block[y * kBlockDim + x] = acc;
    }
  }
}

void forward_blocks(std::span<const double> in, std::span<double> out) {
  check_blocks(in, out);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size() / kBlockSize);
  const int threads = rdlab::thread_count();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    dct8_forward(in.data() + i * kBlockSize, out.data() + i * kBlockSize);
  }
}

void inverse_blocks(std::span<const double> in, std::span<double> out) {
  check_blocks(in, out);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(in.size() / kBlockSize);
  const int threads = rdlab::thread_count();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    dct8_inverse(in.data() + i * kBlockSize, out.data() + i * kBlockSize);
  }
}

void forward_blocks_serial(std::span<const double> in, std::span<double> out) {
  check_blocks(in, out);
  const auto& B = basis().b;
  const std::size_t n = in.size() / kBlockSize;
  for (std::size_t i = 0; i < n; ++i) {
    const double* block = in.data() + i * kBlockSize;
    double* coeffs = out.data() + i * kBlockSize;
    // Direct 2D definition, no separable shortcut.
    for (int l = 0; l < kBlockDim; ++l) {
      for (int k = 0; k < kBlockDim; ++k) {
        double acc = 0.0;
        for (int y = 0; y < kBlockDim; ++y) {
          for (int x = 0; x < kBlockDim; ++x) {
            acc += B[l][y] * B[k][x] * block[y * kBlockDim + x];
          }
        }
        coeffs[l * kBlockDim + k] = acc;
      }
    }
  }
}

void inverse_blocks_serial(std::span<const double> in, std::span<double> out) {
  check_blocks(in, out);
  const auto& B = basis().b;
  const std::size_t n = in.size() / kBlockSize;
  for (std::size_t i = 0; i < n; ++i) {
    const double* coeffs = in.data() + i * kBlockSize;
    double* block = out.data() + i * kBlockSize;
    for (int y = 0; y < kBlockDim; ++y) {
      for (int x = 0; x < kBlockDim; ++x) {
        double acc = 0.0;
        for (int l = 0; l < kBlockDim; ++l) {
          for (int k = 0; k < kBlockDim; ++k) {
            acc += B[l][y] * B[k][x] * coeffs[l * kBlockDim + k];
          }
        }
        block[y * kBlockDim + x] = acc;
      }
    }
  }
}

}  // namespace rdlab::dct
