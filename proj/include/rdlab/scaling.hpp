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

#ifndef RDLAB_SCALING_HPP_
#define RDLAB_SCALING_HPP_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rdlab::scaling {

// One (resource, loss) sample. x is model size in billions of parameters or
// training compute in PFLOPs; both coordinates must be strictly positive so
// they are log-transformable.
struct ScalePoint {
  double x = 0.0;
  double loss = 0.0;
};

// L(x) = floor + gamma * x^(-alpha_exp); floor absent for single-term fits.
// pearson_r is the correlation of the fitted log-log pairs.
struct PowerLawFit {
  double gamma = 0.0;
  double alpha_exp = 0.0;
  std::optional<double> floor;
  double pearson_r = 0.0;
  int n_points = 0;
};

// Loss trajectory of one model size; samples sorted by compute, strictly
// increasing.
struct TrainingCurve {
  std::string model_id;
  double n_params_billions = 0.0;
  std::vector<std::pair<double, double>> samples;  // (compute PFLOPs, loss)
};

// One row of the published model-scale table.
struct ModelScaleRecord {
  std::string name;
  std::vector<int> depths;          // L1..L6 (0 = 1x1 conv stub)
  std::vector<int> channels;        // C1..C6
  std::vector<int> entropy_blocks;  // N1..N3 per stage, flattened
  double params_millions = 0.0;
};

// Single-term power law L = gamma * x^(-alpha_exp) by ordinary least squares
// on (log x, log loss). Requires >= 2 points, positive coordinates, and at
// least two distinct x values. The result is invariant to the log base.
PowerLawFit fit_power_law(std::span<const ScalePoint> points);

// Two-term law L = floor + A * x^(-alpha_exp): grid search of 512 floor
// candidates in [0, (1 - 1e-3) * min loss] maximizing log-domain R^2 of the
// inner OLS, one refinement pass at 10x resolution around the best cell
// (ties pick the lower floor). Requires >= 4 points. The grid is evaluated
// under OpenMP; the *_serial variant is the reference implementation.
PowerLawFit fit_power_law_floor(std::span<const ScalePoint> points);
PowerLawFit fit_power_law_floor_serial(std::span<const ScalePoint> points);

// floor + gamma * x^(-alpha_exp); floor = 0 when absent. Requires x > 0.
double evaluate_fit(const PowerLawFit& fit, double x);

// Pareto frontier of loss vs compute: per-curve running-minimum smoothing,
// merge sorted by compute (ties keep lower loss), emit strict improvements
// of the running minimum. These are the (C_min, L) pairs.
std::vector<ScalePoint> pareto_frontier(std::span<const TrainingCurve> curves);

// Training compute of `steps` optimizer steps in PFLOPs:
//   steps * batch * pixels * (macs_per_pixel_k * 1e3) * 2 * backward_factor
//   / 1e15
// backward_factor 3 = forward + 2x backward. steps may be zero; every other
// argument must be positive.
double compute_pflops(double macs_per_pixel_k, long long pixels_per_sample,
                      long long batch, long long steps,
                      double backward_factor);

struct ForecastReport {
  PowerLawFit n_law;                      // loss vs model size
  std::optional<PowerLawFit> cmin_law;    // loss vs optimal compute
  std::vector<ScalePoint> model_points;
  std::vector<ScalePoint> frontier;
  std::vector<std::pair<double, double>> forecasts;  // (target N, loss)
};

// Fits the model-size law, extracts the frontier and fits the compute law
// when curves provide >= 2 frontier points, then evaluates the N-law at the
// targets.
ForecastReport forecast_report(std::span<const ScalePoint> model_points,
                               std::span<const TrainingCurve> curves,
                               std::span<const double> targets);

}  // namespace rdlab::scaling

#endif  // RDLAB_SCALING_HPP_
