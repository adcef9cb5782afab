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

#include "rdlab/reference.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "rdlab/errors.hpp"

namespace rdlab::reference {

namespace {

using nlohmann::json;

std::optional<double> opt_double(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

scaling::PowerLawFit parse_law(const json& j) {
  scaling::PowerLawFit fit;
  fit.gamma = j.at("gamma").get<double>();
  fit.alpha_exp = j.at("alpha_exp").get<double>();
  fit.pearson_r = opt_double(j, "pearson_r").value_or(0.0);
  return fit;
}

}  // namespace

ReferenceData load_reference(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reference file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("reference: bad JSON in " + path + ": " + e.what());
  }

  ReferenceData data;
  try {
    data.source = j.at("source").get<std::string>();
    for (const auto& row : j.at("model_scales")) {
      scaling::ModelScaleRecord rec;
      rec.name = row.at("name").get<std::string>();
      rec.depths = row.at("transform_depths").get<std::vector<int>>();
      const auto hyper = row.at("hyper_depths").get<std::vector<int>>();
      rec.depths.insert(rec.depths.end(), hyper.begin(), hyper.end());
      rec.channels = row.at("transform_channels").get<std::vector<int>>();
      const auto hc = row.at("hyper_channels").get<std::vector<int>>();
      rec.channels.insert(rec.channels.end(), hc.begin(), hc.end());
      rec.entropy_blocks =
          row.at("entropy_blocks_stage12").get<std::vector<int>>();
      const auto s3 = row.at("entropy_blocks_stage3").get<std::vector<int>>();
      rec.entropy_blocks.insert(rec.entropy_blocks.end(), s3.begin(),
                                s3.end());
      rec.params_millions = row.at("params_millions").get<double>();
      if (!(rec.params_millions > 0.0)) {
        throw FormatError("reference: params_millions must be positive");
      }
      data.model_scales.push_back(std::move(rec));
    }
    for (const auto& row : j.at("benchmark")) {
      BenchmarkRow rec;
      rec.model = row.at("model").get<std::string>();
      rec.enc_ms = opt_double(row, "enc_ms");
      rec.dec_ms = opt_double(row, "dec_ms");
      rec.kmacs_per_pixel = row.at("kmacs_per_pixel").get<double>();
      rec.params_millions = row.at("params_millions").get<double>();
      rec.bd_rate_kodak = row.at("bd_rate_kodak").get<double>();
      rec.bd_rate_clic = row.at("bd_rate_clic").get<double>();
      rec.bd_rate_tecnick = row.at("bd_rate_tecnick").get<double>();
      data.benchmark.push_back(std::move(rec));
    }
    data.model_size_law = parse_law(j.at("scaling_fits").at("model_size_law"));
    data.compute_law = parse_law(j.at("scaling_fits").at("compute_law"));
    for (const auto& [key, value] : j.at("forecasts").items()) {
      data.forecasts.emplace_back(std::stod(key), value.get<double>());
    }
    std::sort(data.forecasts.begin(), data.forecasts.end());
    data.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw FormatError("reference: missing or mistyped field in " + path +
                      ": " + e.what());
  }
  return data;
}

}  // namespace rdlab::reference
