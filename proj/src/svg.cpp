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

#include "rdlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rdlab::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c, d);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct AxisScale {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double to_unit(double v) const {
    const double a = log ? std::log10(v) : v;
    const double l = log ? std::log10(lo) : lo;
    const double h = log ? std::log10(hi) : hi;
    return (a - l) / (h - l);
  }
};

std::string tick_label(double v) {
  char buf[64];
  if (v != 0.0 && (std::fabs(v) >= 1e4 || std::fabs(v) < 1e-3)) {
    std::snprintf(buf, sizeof(buf), "%.0e", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%g", v);
  }
  return buf;
}

std::vector<double> make_ticks(const AxisScale& s) {
  std::vector<double> ticks;
  if (s.log) {
    const int lo = static_cast<int>(std::floor(std::log10(s.lo)));
    const int hi = static_cast<int>(std::ceil(std::log10(s.hi)));
    for (int e = lo; e <= hi; ++e) {
      const double v = std::pow(10.0, e);
      if (v >= s.lo * 0.999 && v <= s.hi * 1.001) ticks.push_back(v);
    }
    if (ticks.size() < 2) {
      ticks = {s.lo, std::sqrt(s.lo * s.hi), s.hi};
    }
  } else {
    const double span = s.hi - s.lo;
    const double step = std::pow(10.0, std::floor(std::log10(span / 4.0)));
    const double start = std::ceil(s.lo / step) * step;
    for (double v = start; v <= s.hi + step * 1e-9; v += step) {
      ticks.push_back(v);
    }
    while (ticks.size() > 10) {
      std::vector<double> thin;
      for (std::size_t i = 0; i < ticks.size(); i += 2) thin.push_back(ticks[i]);
      ticks = thin;
    }
  }
  return ticks;
}

}  // namespace

std::string render_plot(const PlotSpec& spec) {
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  bool first = true;
  for (const Series& s : spec.series) {
    for (const auto& [x, y] : s.points) {
      if ((spec.log_x && !(x > 0.0)) || (spec.log_y && !(y > 0.0))) {
        throw std::invalid_argument("svg: log axis needs positive data");
      }
      if (first) {
        min_x = max_x = x;
        min_y = max_y = y;
        first = false;
      } else {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
      }
    }
  }
  if (first) throw std::invalid_argument("svg: nothing to plot");
  // Pad degenerate ranges so the scale stays invertible.
  if (min_x == max_x) {
    min_x *= 0.9;
    max_x = max_x == 0.0 ? 1.0 : max_x * 1.1;
  }
  if (min_y == max_y) {
    min_y *= 0.9;
    max_y = max_y == 0.0 ? 1.0 : max_y * 1.1;
  }

  const AxisScale xs{min_x, max_x, spec.log_x};
  const AxisScale ys{min_y, max_y, spec.log_y};
  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double v) { return kMarginLeft + xs.to_unit(v) * plot_w; };
  const auto py = [&](double v) {
    return kHeight - kMarginBottom - ys.to_unit(v) * plot_h;
  };

  std::string out;
  out += fmt(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
      "height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
      kWidth, kHeight, kWidth, kHeight);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += fmt(
      "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
      "fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
      kMarginLeft, kMarginTop, plot_w, plot_h);

  for (const double t : make_ticks(xs)) {
    const double x = px(t);
    out += fmt(
        "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
        "stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
        x, kMarginTop, x, kHeight - kMarginBottom);
    out += fmt("<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" "
               "text-anchor=\"middle\" font-family=\"monospace\">",
               x, kHeight - kMarginBottom + 16.0);
    out += escape(tick_label(t)) + "</text>\n";
  }
  for (const double t : make_ticks(ys)) {
    const double y = py(t);
    out += fmt(
        "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
        "stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
        kMarginLeft, y, kWidth - kMarginRight, y);
    out += fmt("<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" "
               "text-anchor=\"end\" font-family=\"monospace\">",
               kMarginLeft - 6.0, y + 4.0);
    out += escape(tick_label(t)) + "</text>\n";
  }

  for (const Series& s : spec.series) {
    if (s.draw_line && s.points.size() > 1) {
      std::string path = "<polyline fill=\"none\" stroke=\"" + s.color + "\"";
      path += fmt(" stroke-width=\"%.2f\" points=\"", s.stroke_width);
      for (const auto& [x, y] : s.points) {
        path += fmt("%.3f,%.3f ", px(x), py(y));
      }
      path += "\"/>\n";
      out += path;
    }
    if (s.draw_markers) {
      for (const auto& [x, y] : s.points) {
        out += fmt(
            "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"", px(x), py(y));
        out += s.color + "\"/>\n";
      }
    }
  }

  // Legend, title, axis labels.
  double legend_y = kMarginTop + 16.0;
  for (const Series& s : spec.series) {
    if (s.label.empty()) continue;
    out += fmt(
        "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"",
        kMarginLeft + 10.0, legend_y - 4.0, kMarginLeft + 34.0, legend_y - 4.0);
    out += s.color + fmt("\" stroke-width=\"%.2f\"/>\n", s.stroke_width);
    out += fmt("<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" "
               "font-family=\"monospace\">",
               kMarginLeft + 40.0, legend_y);
    out += escape(s.label) + "</text>\n";
    legend_y += 16.0;
  }
  out += fmt("<text x=\"%.2f\" y=\"%.2f\" font-size=\"14\" "
             "text-anchor=\"middle\" font-family=\"monospace\">",
             kWidth / 2.0, 24.0);
  out += escape(spec.title) + "</text>\n";
  out += fmt("<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" "
             "text-anchor=\"middle\" font-family=\"monospace\">",
             kMarginLeft + plot_w / 2.0, kHeight - 12.0);
  out += escape(spec.x_label) + "</text>\n";
  out += fmt("<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" "
             "text-anchor=\"middle\" font-family=\"monospace\" "
             "transform=\"rotate(-90 %.2f %.2f)\">",
             18.0, kMarginTop + plot_h / 2.0, 18.0, kMarginTop + plot_h / 2.0);
  out += escape(spec.y_label) + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace rdlab::svg
