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

#ifndef RDLAB_REFERENCE_HPP_
#define RDLAB_REFERENCE_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdlab/scaling.hpp"

namespace rdlab::reference {

// One row of the published complexity/BD-rate comparison.
struct BenchmarkRow {
  std::string model;
  std::optional<double> enc_ms;
  std::optional<double> dec_ms;
  double kmacs_per_pixel = 0.0;
  double params_millions = 0.0;
  double bd_rate_kodak = 0.0;
  double bd_rate_clic = 0.0;
  double bd_rate_tecnick = 0.0;
};

// Contents of data/hpcm_reference.json: published model configurations,
// benchmark rows, fitted scaling-law constants and forecasts.
struct ReferenceData {
  std::string source;
  std::vector<scaling::ModelScaleRecord> model_scales;
  std::vector<BenchmarkRow> benchmark;
  scaling::PowerLawFit model_size_law;
  scaling::PowerLawFit compute_law;
  std::vector<std::pair<double, double>> forecasts;  // (N billions, loss)
  std::vector<double> lambda_grid;
};

// Throws IoError when the file cannot be read, FormatError on bad JSON or
// missing fields.
ReferenceData load_reference(const std::string& path);

}  // namespace rdlab::reference

#endif  // RDLAB_REFERENCE_HPP_
