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

#ifndef RDLAB_METRICS_HPP_
#define RDLAB_METRICS_HPP_

#include <span>
#include <string>
#include <vector>

#include "rdlab/rd_point.hpp"

namespace rdlab::metrics {

// Rate-distortion curve: >= 2 points, bpp and psnr strictly increasing.
struct RDCurve {
  std::vector<RDPoint> points;
  std::string label;
};

// Validates and sorts points into a curve. Throws std::invalid_argument for
// fewer than 2 points or non-monotone data.
RDCurve make_curve(std::vector<RDPoint> points, std::string label = {});

enum class BdFit {
  kCubic,  // classic least-squares cubic polynomial
  kPchip,  // monotone piecewise cubic Hermite
};

// Bjontegaard delta rate in percent: fits log10(bpp) as a function of PSNR
// per curve, integrates the difference analytically over the overlapping
// PSNR interval. Negative = test saves rate relative to the anchor.
// Requires >= 4 points per curve and a non-empty PSNR overlap.
double bd_rate(const RDCurve& anchor, const RDCurve& test,
               BdFit fit = BdFit::kCubic);

// Dual construction: average PSNR difference in dB over the overlapping
// log10(bpp) interval.
double bd_psnr(const RDCurve& anchor, const RDCurve& test,
               BdFit fit = BdFit::kCubic);

// Sample Pearson correlation. Requires equal lengths >= 2 and nonzero
// variance on both sides.
double pearson(std::span<const double> xs, std::span<const double> ys);

}  // namespace rdlab::metrics

#endif  // RDLAB_METRICS_HPP_
