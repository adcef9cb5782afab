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

#ifndef RDLAB_SVG_HPP_
#define RDLAB_SVG_HPP_

#include <string>
#include <utility>
#include <vector>

namespace rdlab::svg {

// One plotted series. Coordinates are data-space (x, y) pairs.
struct Series {
  std::vector<std::pair<double, double>> points;
  std::string color = "#1f6fb2";
  bool draw_line = true;
  bool draw_markers = false;
  double stroke_width = 1.5;
  std::string label;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  bool log_y = true;
  std::vector<Series> series;
};

// Deterministic standalone SVG document (fixed canvas, fixed number
// formatting): identical input produces byte-identical output.
std::string render_plot(const PlotSpec& spec);

}  // namespace rdlab::svg

#endif  // RDLAB_SVG_HPP_
