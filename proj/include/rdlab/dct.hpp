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

#ifndef RDLAB_DCT_HPP_
#define RDLAB_DCT_HPP_

#include <cstddef>
#include <span>

namespace rdlab::dct {

inline constexpr int kBlockDim = 8;
inline constexpr int kBlockSize = kBlockDim * kBlockDim;

// Orthonormal 8x8 DCT-II of one block (row-major 64 values). The inverse is
// the exact transpose pair; inverse(forward(x)) == x within 1e-10.
void dct8_forward(const double* block, double* coeffs);
void dct8_inverse(const double* coeffs, double* block);

// Batch kernels over n consecutive blocks of 64 values. in and out may not
// alias. The plain versions run the separable transform under OpenMP; the
// *_serial versions are the direct O(64^2) reference summation kept for
// testing and benchmarking.
void forward_blocks(std::span<const double> in, std::span<double> out);
void inverse_blocks(std::span<const double> in, std::span<double> out);
void forward_blocks_serial(std::span<const double> in, std::span<double> out);
void inverse_blocks_serial(std::span<const double> in, std::span<double> out);

}  // namespace rdlab::dct

#endif  // RDLAB_DCT_HPP_
