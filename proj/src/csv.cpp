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

#include "rdlab/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rdlab/errors.hpp"
#include "rdlab/image.hpp"

namespace rdlab::csv {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& path) {
  const std::string t = strip(field);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (...) {
    throw FormatError("csv: bad number '" + field + "' in " + path);
  }
  if (pos != t.size()) {
    throw FormatError("csv: bad number '" + field + "' in " + path);
  }
  return v;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open csv file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = strip(line);
    if (!t.empty()) lines.push_back(t);
  }
  return lines;
}

}  // namespace

std::vector<RDPoint> read_rd_curve(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw FormatError("csv: empty rd curve file: " + path);
  std::size_t start = 0;
  if (strip(lines[0]) == "bpp,psnr") start = 1;
  std::vector<RDPoint> points;
  for (std::size_t i = start; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != 2) {
      throw FormatError("csv: rd curve rows need 2 fields: " + path);
    }
    RDPoint p;
    p.bpp = parse_double(fields[0], path);
    p.psnr = parse_double(fields[1], path);
    p.mse = 255.0 * 255.0 / std::pow(10.0, p.psnr / 10.0);
    points.push_back(p);
  }
  return points;
}

std::string format_rd_curve(const std::vector<RDPoint>& points) {
  std::string out = "bpp,psnr\n";
  char buf[80];
  for (const RDPoint& p : points) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", p.bpp, p.psnr);
    out += buf;
  }
  return out;
}

std::vector<scaling::TrainingCurve> read_training_log(
    const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw FormatError("csv: empty training log: " + path);
  std::size_t start = 0;
  if (lines[0] == "model_id,n_params_billions,compute_pflops,loss") start = 1;

  std::vector<scaling::TrainingCurve> curves;
  for (std::size_t i = start; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != 4) {
      throw FormatError("csv: training log rows need 4 fields: " + path);
    }
    const std::string id = strip(fields[0]);
    const double n_params = parse_double(fields[1], path);
    const double compute = parse_double(fields[2], path);
    const double loss = parse_double(fields[3], path);
    auto it = std::find_if(curves.begin(), curves.end(),
                           [&](const scaling::TrainingCurve& c) {
                             return c.model_id == id;
                           });
    if (it == curves.end()) {
      curves.push_back(scaling::TrainingCurve{id, n_params, {}});
      it = curves.end() - 1;
    }
    it->samples.emplace_back(compute, loss);
  }
  for (auto& curve : curves) {
    std::stable_sort(curve.samples.begin(), curve.samples.end(),
                     [](const auto& a, const auto& b) {
                       return a.first < b.first;
                     });
    for (std::size_t i = 1; i < curve.samples.size(); ++i) {
      if (!(curve.samples[i].first > curve.samples[i - 1].first)) {
        throw FormatError("csv: duplicate compute value for model '" +
                          curve.model_id + "' in " + path);
      }
    }
  }
  return curves;
}

std::string format_frontier(const std::vector<scaling::ScalePoint>& frontier) {
  std::string out = "compute_pflops,loss\n";
  char buf[80];
  for (const auto& p : frontier) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", p.x, p.loss);
    out += buf;
  }
  return out;
}

}  // namespace rdlab::csv
