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

#include "rdlab/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace rdlab::metrics {

namespace {

// ---------------------------------------------------------------------------
// Least-squares cubic through (x, y), solved by normal equations on a
// shifted x axis (the caller centers x at the overlap midpoint to keep the
// system well conditioned at 30-45 dB magnitudes).

struct Cubic {
  std::array<double, 4> c{};  // c0 + c1 x + c2 x^2 + c3 x^3

  double eval(double x) const {
    return ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
  }
  // Antiderivative, constant 0.
  double integral(double x) const {
    return (((c[3] / 4.0 * x + c[2] / 3.0) * x + c[1] / 2.0) * x + c[0]) * x;
  }
};

Cubic fit_cubic(std::span<const double> xs, std::span<const double> ys,
                double shift) {
  const std::size_t n = xs.size();
  // Normal equations A^T A c = A^T y with A_{i,j} = x_i^j.
  double sx[7] = {0, 0, 0, 0, 0, 0, 0};
  double sy[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xs[i] - shift;
    double p = 1.0;
    for (int j = 0; j < 7; ++j) {
      sx[j] += p;
      if (j < 4) sy[j] += p * ys[i];
      p *= x;
    }
  }
  double m[4][5];
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m[r][c] = sx[r + c];
    m[r][4] = sy[r];
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    }
    if (std::fabs(m[pivot][col]) < 1e-30) {
      throw std::invalid_argument("bd metric: degenerate polynomial fit");
    }
    if (pivot != col) {
      for (int c = 0; c < 5; ++c) std::swap(m[col][c], m[pivot][c]);
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 5; ++c) m[r][c] -= f * m[col][c];
    }
  }
  Cubic out;
  for (int r = 0; r < 4; ++r) out.c[r] = m[r][4] / m[r][r];
  return out;
}

// ---------------------------------------------------------------------------
// Monotone piecewise cubic Hermite (Fritsch-Carlson slopes).

struct Pchip {
  std::vector<double> x, y, d;

  double integral_upto(double xq) const;
};

Pchip fit_pchip(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  Pchip p;
  p.x.assign(xs.begin(), xs.end());
  p.y.assign(ys.begin(), ys.end());
  p.d.assign(n, 0.0);

  std::vector<double> slope(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    slope[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
  }
  if (n == 2) {
    p.d[0] = p.d[1] = slope[0];
    return p;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (slope[i - 1] * slope[i] <= 0.0) {
      p.d[i] = 0.0;
    } else {
      const double h0 = xs[i] - xs[i - 1];
      const double h1 = xs[i + 1] - xs[i];
      const double w1 = 2.0 * h1 + h0;
      const double w2 = h1 + 2.0 * h0;
      p.d[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
    }
  }
  // One-sided endpoint slopes, clipped to keep monotonicity.
  auto endpoint = [](double h0, double h1, double s0, double s1) {
    double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d * s0 <= 0.0) {
      d = 0.0;
    } else if (s0 * s1 <= 0.0 && std::fabs(d) > 3.0 * std::fabs(s0)) {
      d = 3.0 * s0;
    }
    return d;
  };
  p.d[0] = endpoint(xs[1] - xs[0], xs[2] - xs[1], slope[0], slope[1]);
  p.d[n - 1] = endpoint(xs[n - 1] - xs[n - 2], xs[n - 2] - xs[n - 3],
                        slope[n - 2], slope[n - 3]);
  return p;
}

// Integral of the Hermite segment on [x0, x0+h] from 0 to t (t in [0, h]).
double hermite_integral(double y0, double y1, double d0, double d1, double h,
                        double t) {
  const double s = t / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
  // Antiderivatives of the cubic Hermite basis over the unit interval,
  // scaled back by h.
  const double H00 = s - s3 + s4 / 2.0;            // int of 2s^3-3s^2+1
  const double H10 = s2 / 2.0 - 2.0 * s3 / 3.0 + s4 / 4.0;
  const double H01 = s3 - s4 / 2.0;                // int of -2s^3+3s^2
  const double H11 = s4 / 4.0 - s3 / 3.0;
  return h * (y0 * H00 + y1 * H01) + h * h * (d0 * H10 + d1 * H11);
}

double Pchip::integral_upto(double xq) const {
  // Definite integral from x[0] to xq; xq must lie within [x.front, x.back].
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    if (xq >= x[i + 1]) {
      acc += hermite_integral(y[i], y[i + 1], d[i], d[i + 1], h, h);
    } else {
      const double t = xq - x[i];
      if (t > 0.0) acc += hermite_integral(y[i], y[i + 1], d[i], d[i + 1], h, t);
      break;
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------

struct Axis {
  std::vector<double> x;  // integration variable
  std::vector<double> y;  // fitted quantity
};

void validate_curve(const RDCurve& curve) {
  if (curve.points.size() < 4) {
    throw std::invalid_argument("bd metric: need >= 4 points per curve");
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (!(curve.points[i].bpp > curve.points[i - 1].bpp) ||
        !(curve.points[i].psnr > curve.points[i - 1].psnr)) {
      throw std::invalid_argument("bd metric: curve must be monotone");
    }
  }
}

// Average of (fit_test - fit_anchor) over the shared x interval.
double average_fit_difference(const Axis& anchor, const Axis& test,
                              BdFit fit) {
  const double lo = std::max(anchor.x.front(), test.x.front());
  const double hi = std::min(anchor.x.back(), test.x.back());
  if (!(lo < hi)) {
    throw std::invalid_argument("bd metric: curves do not overlap");
  }
  if (fit == BdFit::kCubic) {
    const double shift = (lo + hi) / 2.0;
    const Cubic ca = fit_cubic(anchor.x, anchor.y, shift);
    const Cubic ct = fit_cubic(test.x, test.y, shift);
    const double ia = ca.integral(hi - shift) - ca.integral(lo - shift);
    const double it = ct.integral(hi - shift) - ct.integral(lo - shift);
    return (it - ia) / (hi - lo);
  }
  const Pchip pa = fit_pchip(anchor.x, anchor.y);
  const Pchip pt = fit_pchip(test.x, test.y);
  const double ia = pa.integral_upto(hi) - pa.integral_upto(lo);
  const double it = pt.integral_upto(hi) - pt.integral_upto(lo);
  return (it - ia) / (hi - lo);
}

Axis rate_vs_psnr(const RDCurve& curve) {
  Axis a;
  for (const RDPoint& p : curve.points) {
    a.x.push_back(p.psnr);
    a.y.push_back(std::log10(p.bpp));
  }
  return a;
}

Axis psnr_vs_rate(const RDCurve& curve) {
  Axis a;
  for (const RDPoint& p : curve.points) {
    a.x.push_back(std::log10(p.bpp));
    a.y.push_back(p.psnr);
  }
  return a;
}

}  // namespace

RDCurve make_curve(std::vector<RDPoint> points, std::string label) {
  if (points.size() < 2) {
    throw std::invalid_argument("rd curve: need >= 2 points");
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const RDPoint& a, const RDPoint& b) {
                     return a.bpp < b.bpp;
                   });
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].bpp > points[i - 1].bpp)) {
      throw std::invalid_argument("rd curve: bpp must be strictly increasing");
    }
    if (!(points[i].psnr > points[i - 1].psnr)) {
      throw std::invalid_argument("rd curve: psnr must be strictly increasing");
    }
    if (!(points[i].bpp > 0.0) || !std::isfinite(points[i].psnr)) {
      throw std::invalid_argument("rd curve: invalid point");
    }
  }
  if (!(points[0].bpp > 0.0) || !std::isfinite(points[0].psnr)) {
    throw std::invalid_argument("rd curve: invalid point");
  }
  return RDCurve{std::move(points), std::move(label)};
}

double bd_rate(const RDCurve& anchor, const RDCurve& test, BdFit fit) {
  validate_curve(anchor);
  validate_curve(test);
  const double avg_log_diff =
      average_fit_difference(rate_vs_psnr(anchor), rate_vs_psnr(test), fit);
  return (std::pow(10.0, avg_log_diff) - 1.0) * 100.0 + 0.0;
}

double bd_psnr(const RDCurve& anchor, const RDCurve& test, BdFit fit) {
  validate_curve(anchor);
  validate_curve(test);
  return average_fit_difference(psnr_vs_rate(anchor), psnr_vs_rate(test), fit) +
         0.0;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("pearson: length mismatch");
  }
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("pearson: need >= 2 samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument("pearson: zero variance");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace rdlab::metrics
