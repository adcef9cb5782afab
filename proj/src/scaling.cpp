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

#include "rdlab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rdlab/parallel.hpp"

namespace rdlab::scaling {

namespace {

constexpr int kFloorGridSize = 512;

void validate_points(std::span<const ScalePoint> points, std::size_t min_n,
                     const char* who) {
  if (points.size() < min_n) {
    throw std::invalid_argument(std::string(who) + ": too few points");
  }
  for (const ScalePoint& p : points) {
    if (!(p.x > 0.0) || !(p.loss > 0.0)) {
      throw std::invalid_argument(std::string(who) +
                                  ": coordinates must be positive");
    }
  }
}

struct OlsResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r = 0.0;       // pearson of the pairs; 0 when y has no variance
  bool x_varies = false;
};

// OLS of y on x with centered sums.
OlsResult ols(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  OlsResult out;
  out.x_varies = sxx > 0.0;
  if (!out.x_varies) return out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  return out;
}

PowerLawFit fit_log_log(std::span<const ScalePoint> points,
                        double floor_value, bool with_floor) {
  std::vector<double> lx(points.size()), ly(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    lx[i] = std::log(points[i].x);
    ly[i] = std::log(points[i].loss - floor_value);
  }
  const OlsResult r = ols(lx, ly);
  if (!r.x_varies) {
    throw std::invalid_argument("fit_power_law: all x values equal");
  }
  PowerLawFit fit;
  fit.gamma = std::exp(r.intercept);
  fit.alpha_exp = -r.slope;
  fit.pearson_r = r.r;
  fit.n_points = static_cast<int>(points.size());
  if (with_floor) fit.floor = floor_value;
  return fit;
}

// Log-domain R^2 of the single-term fit after subtracting a floor candidate.
double floor_r2(std::span<const ScalePoint> points, double floor_value) {
  std::vector<double> lx(points.size()), ly(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    lx[i] = std::log(points[i].x);
    ly[i] = std::log(points[i].loss - floor_value);
  }
  const OlsResult r = ols(lx, ly);
  return r.r * r.r;
}

PowerLawFit fit_floor_impl(std::span<const ScalePoint> points, bool parallel) {
  validate_points(points, 4, "fit_power_law_floor");
  double min_loss = std::numeric_limits<double>::infinity();
  double max_loss = 0.0;
  for (const ScalePoint& p : points) {
    min_loss = std::min(min_loss, p.loss);
    max_loss = std::max(max_loss, p.loss);
  }
  if (!(max_loss > min_loss)) {
    throw std::invalid_argument("fit_power_law_floor: degenerate data");
  }

  const double upper = (1.0 - 1e-3) * min_loss;
  const double cell = upper / (kFloorGridSize - 1);

  const auto grid_best = [&](double start, double step, int count) {
    std::vector<double> r2(count);
    if (parallel) {
      const int threads = rdlab::thread_count();
#pragma omp parallel for schedule(static) num_threads(threads)
      for (int i = 0; i < count; ++i) {
        r2[i] = floor_r2(points, start + step * i);
      }
    } else {
      for (int i = 0; i < count; ++i) {
        r2[i] = floor_r2(points, start + step * i);
      }
    }
    // Deterministic argmax; ties pick the lower floor (lower index).
    int best = 0;
    for (int i = 1; i < count; ++i) {
      if (r2[i] > r2[best]) best = i;
    }
    return best;
  };

  const int coarse = grid_best(0.0, cell, kFloorGridSize);
  const double coarse_floor = cell * coarse;

  // Refinement at 10x resolution around the best cell.
  const double fine_step = cell / 10.0;
  const double fine_start = std::max(0.0, coarse_floor - cell);
  const int fine_count =
      static_cast<int>(std::floor((std::min(upper, coarse_floor + cell) -
                                   fine_start) /
                                  fine_step)) +
      1;
  const int fine = grid_best(fine_start, fine_step, fine_count);
  const double best_floor = fine_start + fine_step * fine;
  return fit_log_log(points, best_floor, true);
}

}  // namespace

PowerLawFit fit_power_law(std::span<const ScalePoint> points) {
  validate_points(points, 2, "fit_power_law");
  return fit_log_log(points, 0.0, false);
}

PowerLawFit fit_power_law_floor(std::span<const ScalePoint> points) {
  return fit_floor_impl(points, true);
}

PowerLawFit fit_power_law_floor_serial(std::span<const ScalePoint> points) {
  return fit_floor_impl(points, false);
}

double evaluate_fit(const PowerLawFit& fit, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("evaluate_fit: x must be > 0");
  return fit.floor.value_or(0.0) + fit.gamma * std::pow(x, -fit.alpha_exp);
}

std::vector<ScalePoint> pareto_frontier(
    std::span<const TrainingCurve> curves) {
  if (curves.empty()) {
    throw std::invalid_argument("pareto_frontier: no curves");
  }
  std::vector<ScalePoint> merged;
  for (const TrainingCurve& curve : curves) {
    if (curve.samples.empty()) {
      throw std::invalid_argument("pareto_frontier: empty curve");
    }
    // Running-minimum smoothing removes training-noise bumps.
    double running = std::numeric_limits<double>::infinity();
    double prev_compute = 0.0;
    for (const auto& [compute, loss] : curve.samples) {
      if (!(compute > 0.0) || !(loss > 0.0)) {
        throw std::invalid_argument("pareto_frontier: nonpositive sample");
      }
      if (!(compute > prev_compute)) {
        throw std::invalid_argument(
            "pareto_frontier: curve samples must be strictly increasing in "
            "compute");
      }
      prev_compute = compute;
      running = std::min(running, loss);
      merged.push_back(ScalePoint{compute, running});
    }
  }
  std::stable_sort(merged.begin(), merged.end(),
                   [](const ScalePoint& a, const ScalePoint& b) {
                     if (a.x != b.x) return a.x < b.x;
                     return a.loss < b.loss;
                   });
  std::vector<ScalePoint> frontier;
  double best = std::numeric_limits<double>::infinity();
  for (const ScalePoint& p : merged) {
    if (p.loss < best) {
      frontier.push_back(p);
      best = p.loss;
    }
  }
  return frontier;
}

double compute_pflops(double macs_per_pixel_k, long long pixels_per_sample,
                      long long batch, long long steps,
                      double backward_factor) {
  if (!(macs_per_pixel_k > 0.0) || pixels_per_sample <= 0 || batch <= 0 ||
      !(backward_factor > 0.0) || steps < 0) {
    throw std::invalid_argument("compute_pflops: nonpositive input");
  }
  return static_cast<double>(steps) * static_cast<double>(batch) *
         static_cast<double>(pixels_per_sample) * (macs_per_pixel_k * 1e3) *
         2.0 * backward_factor / 1e15;
}

ForecastReport forecast_report(std::span<const ScalePoint> model_points,
                               std::span<const TrainingCurve> curves,
                               std::span<const double> targets) {
  ForecastReport report;
  report.model_points.assign(model_points.begin(), model_points.end());
  report.n_law = fit_power_law(model_points);
  if (!curves.empty()) {
    report.frontier = pareto_frontier(curves);
    if (report.frontier.size() >= 2) {
      report.cmin_law = fit_power_law(report.frontier);
    }
  }
  for (const double t : targets) {
    report.forecasts.emplace_back(t, evaluate_fit(report.n_law, t));
  }
  return report;
}

}  // namespace rdlab::scaling
