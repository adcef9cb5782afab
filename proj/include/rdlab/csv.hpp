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

#ifndef RDLAB_CSV_HPP_
#define RDLAB_CSV_HPP_

#include <string>
#include <vector>

#include "rdlab/rd_point.hpp"
#include "rdlab/scaling.hpp"

namespace rdlab::csv {

// RD curve file: header "bpp,psnr", one point per line. Points may arrive
// unsorted; callers sort via metrics::make_curve.
std::vector<RDPoint> read_rd_curve(const std::string& path);
std::string format_rd_curve(const std::vector<RDPoint>& points);

// Training log: "model_id,n_params_billions,compute_pflops,loss", one sample
// per line. Samples are grouped by model id (first-appearance order) and
// sorted by compute within each curve; duplicate compute values within one
// curve are rejected.
std::vector<scaling::TrainingCurve> read_training_log(const std::string& path);

std::string format_frontier(const std::vector<scaling::ScalePoint>& frontier);

}  // namespace rdlab::csv

#endif  // RDLAB_CSV_HPP_
