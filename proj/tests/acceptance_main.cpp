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
//
// Acceptance suite: end-to-end checks with pinned tolerances, one pass/fail
// line per criterion. Exit status is nonzero when any criterion fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cli_harness.hpp"
#include "fuzz_tables.hpp"
#include "oracles.hpp"
#include "rdlab/codec.hpp"
#include "rdlab/csv.hpp"
#include "rdlab/ggm.hpp"
#include "rdlab/image.hpp"
#include "rdlab/metrics.hpp"
#include "rdlab/range_coder.hpp"
#include "rdlab/scaling.hpp"
#include "test_corpus.hpp"

namespace fs = std::filesystem;
using namespace rdlab;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass,
            const std::string& detail = {}) {
  std::printf("%s  %d. %s%s%s\n", pass ? "PASS" : "FAIL", index, name,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

// --------------------------------------------------------------------------
// 1. Forecast reproduction: published constants at N = 2 and N = 10.

void criterion_forecast() {
  const scaling::PowerLawFit law{0.7172, 0.0147, std::nullopt, -0.9816, 5};
  const double at2 = scaling::evaluate_fit(law, 2.0);
  const double at10 = scaling::evaluate_fit(law, 10.0);
  const bool pass =
      std::fabs(at2 - 0.7099) <= 5e-4 && std::fabs(at10 - 0.6933) <= 5e-4;
  char detail[128];
  std::snprintf(detail, sizeof(detail), "L(2)=%.6f L(10)=%.6f", at2, at10);
  report(1, "forecast reproduction (published constants)", pass, detail);
}

// --------------------------------------------------------------------------
// 2. Fit recovery on exact and floored synthetic data.

void criterion_fit_recovery() {
  bool pass = true;

  std::vector<scaling::ScalePoint> exact;
  for (const double x : {1.0, 2.0, 4.0, 8.0}) {
    exact.push_back({x, 2.0 * std::pow(x, -0.5)});
  }
  const auto fit = scaling::fit_power_law(exact);
  pass = pass && std::fabs(fit.gamma - 2.0) <= 1e-9 &&
         std::fabs(fit.alpha_exp - 0.5) <= 1e-9 &&
         std::fabs(fit.pearson_r + 1.0) <= 1e-9;

  std::mt19937 rng(1001);
  std::uniform_real_distribution<double> origin(0.25, 4.0);
  std::uniform_int_distribution<int> count(8, 16);
  for (int trial = 0; trial < 20 && pass; ++trial) {
    const double x0 = origin(rng);
    const int n = count(rng);
    std::vector<scaling::ScalePoint> pts;
    for (int i = 0; i < n; ++i) {
      const double x = x0 * std::pow(64.0, static_cast<double>(i) / (n - 1));
      pts.push_back({x, 0.5 + 1.0 * std::pow(x, -0.3)});
    }
    const auto floored = scaling::fit_power_law_floor(pts);
    pass = pass && floored.floor.has_value() &&
           std::fabs(*floored.floor - 0.5) <= 0.01 &&
           std::fabs(floored.alpha_exp - 0.3) <= 0.01;
  }
  report(2, "fit recovery (exact log-linear data + floored designs)", pass);
}

// --------------------------------------------------------------------------
// 3. Pareto frontier equals the O(n^2) brute force exactly.

void criterion_pareto() {
  std::mt19937 rng(2002);
  std::uniform_int_distribution<int> n_curves_d(1, 8);
  std::uniform_real_distribution<double> compute_d(0.05, 500.0);
  std::uniform_real_distribution<double> loss_d(0.2, 2.0);
  bool pass = true;
  for (int trial = 0; trial < 100 && pass; ++trial) {
    const int n_curves = n_curves_d(rng);
    std::uniform_int_distribution<int> n_samples_d(1, 200 / n_curves);
    std::vector<scaling::TrainingCurve> curves(n_curves);
    for (auto& curve : curves) {
      curve.model_id = "m";
      curve.n_params_billions = 1.0;
      std::vector<double> computes(n_samples_d(rng));
      for (auto& c : computes) c = compute_d(rng);
      std::sort(computes.begin(), computes.end());
      computes.erase(std::unique(computes.begin(), computes.end()),
                     computes.end());
      for (const double c : computes) {
        curve.samples.emplace_back(c, loss_d(rng));
      }
    }
    const auto lib = scaling::pareto_frontier(curves);
    const auto oracle = oracles::brute_force_frontier(curves);
    pass = pass && lib.size() == oracle.size();
    for (std::size_t i = 0; pass && i < lib.size(); ++i) {
      pass = lib[i].x == oracle[i].x && lib[i].loss == oracle[i].loss;
    }
  }
  report(3, "pareto frontier matches brute force on 100 random sets", pass);
}

// --------------------------------------------------------------------------
// 4. GGM correctness against closed forms.

void criterion_ggm() {
  bool pass = true;

  for (int i = 0; i < 1000 && pass; ++i) {
    const double x = -12.0 + 24.0 * i / 999.0;
    pass = std::fabs(ggm::ggm_cdf(ggm::GGMParams{0.0, 1.3, 1.0}, x) -
                     oracles::laplace_cdf(0.0, 1.3, x)) <= 1e-9;
  }
  for (int i = 0; i < 1000 && pass; ++i) {
    // The series erf oracle is accurate for |x/alpha| up to ~4.
    const double x = -6.0 + 12.0 * i / 999.0;
    pass = std::fabs(ggm::ggm_cdf(ggm::GGMParams{0.0, 1.6, 2.0}, x) -
                     oracles::gaussian_cdf_alpha(0.0, 1.6, x)) <= 1e-9;
  }

  double sum = 0.0;
  for (int k = -64; k <= 64; ++k) {
    sum += ggm::ggm_pmf_integer_raw(ggm::GGMParams{0.0, 2.0, 1.5}, k);
  }
  pass = pass && std::fabs(sum - 1.0) <= 1e-6;

  pass = pass && std::fabs(ggm::reg_lower_incomplete_gamma(0.5, 1.0) -
                           0.8427007929) <= 1e-10;
  report(4, "GGM cdf/pmf against Laplace, Gaussian and erf oracles", pass);
}

// --------------------------------------------------------------------------
// 5. Coder losslessness and tightness.

void criterion_coder() {
  std::mt19937 rng(3003);
  bool lossless = true;
  std::uniform_int_distribution<int> len_d(0, 40);
  for (int trial = 0; trial < 10000 && lossless; ++trial) {
    const int len = len_d(rng);
    std::vector<ggm::CdfTable> tables(len);
    std::vector<const ggm::CdfTable*> ptrs(len);
    std::vector<std::int32_t> symbols(len);
    for (int i = 0; i < len; ++i) {
      tables[i] = fuzz_tables::random_table(rng);
      ptrs[i] = &tables[i];
      symbols[i] = fuzz_tables::random_symbol(tables[i], rng);
    }
    lossless = rc::rc_decode(rc::rc_encode(symbols, ptrs), ptrs) == symbols;
  }

  const ggm::GGMParams source{0.0, 1.0, 1.5};
  const auto table = ggm::build_cdf_table(source, -24, 24, 16);
  std::vector<std::int32_t> symbols(1000000);
  for (auto& s : symbols) {
    const double v = oracles::sample_ggm(0.0, 1.0, 1.5, rng);
    s = std::clamp(static_cast<std::int32_t>(std::lround(v)), -24, 24);
  }
  const double ideal = ggm::rate_bits(source, symbols);
  const auto stream = rc::rc_encode(symbols, table);
  const double actual = static_cast<double>(stream.size()) * 8.0;
  const bool tight = actual <= ideal + 64.0 + 0.001 * ideal;
  const bool decoded_ok =
      rc::rc_decode(stream, table, symbols.size()) == symbols;

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "ideal=%.0f bits actual=%.0f bits (%+.4f%%)", ideal, actual,
                (actual - ideal) / ideal * 100.0);
  report(5, "coder losslessness (1e4 fuzz) + tightness on 1e6 symbols",
         lossless && tight && decoded_ok, detail);
}

// --------------------------------------------------------------------------
// 6. Codec pipeline on the synthetic corpus.

void criterion_codec() {
  const auto corpus = test_corpus::make_corpus();
  const std::vector<double> deltas{0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  bool bit_match = true;
  bool rate_ok = true;
  bool monotone = true;

  for (const auto& image : corpus) {
    double prev_bpp = 1e300, prev_psnr = 1e300;
    for (const double delta : deltas) {
      codec::CodecConfig cfg;
      cfg.delta = delta;
      const auto result = codec::encode_image(image, cfg);

      const auto decoded = codec::decode_image(result.encoded);
      bit_match = bit_match && img::mse(image, decoded) == result.rd.mse;
      const auto reparsed =
          codec::parse_encoded(codec::serialize(result.encoded));
      bit_match = bit_match &&
                  codec::decode_image(reparsed).samples == decoded.samples;

      for (const auto& stats : result.coeff_stats) {
        rate_ok = rate_ok &&
                  static_cast<double>(stats.actual_bits) <=
                      stats.estimated_bits * 1.001 + 64.0;
      }
      monotone = monotone && result.rd.bpp < prev_bpp &&
                 result.rd.psnr <= prev_psnr;
      prev_bpp = result.rd.bpp;
      prev_psnr = result.rd.psnr;
    }
  }

  // Context parity at rho = 0 on a larger image so renormalization crumbs
  // sit far inside the 0.1% budget.
  bool parity = true;
  {
    const auto image = test_corpus::make_image(99, 256, 256, 3);
    codec::CodecConfig plain;
    plain.delta = 1.0;
    codec::CodecConfig ctx = plain;
    ctx.context_enabled = true;
    ctx.context_rho = 0.0;
    const auto a = codec::encode_image(image, plain);
    const auto b = codec::encode_image(image, ctx);
    for (std::size_t c = 0; c < a.coeff_stats.size(); ++c) {
      const double bits_a = static_cast<double>(a.coeff_stats[c].actual_bits);
      const double bits_b = static_cast<double>(b.coeff_stats[c].actual_bits);
      parity = parity && std::fabs(bits_a - bits_b) <= 0.001 * bits_a;
    }
  }

  report(6, "codec pipeline (bit-match, rate accounting, monotonicity, "
            "context parity)",
         bit_match && rate_ok && monotone && parity);
}

// --------------------------------------------------------------------------
// 7. BD-rate analytic cases and the quadrature oracle.

metrics::RDCurve curve_of(const std::vector<std::pair<double, double>>& pts) {
  std::vector<RDPoint> points;
  for (const auto& [bpp, psnr] : pts) points.push_back({bpp, psnr, 0.0});
  return metrics::make_curve(std::move(points));
}

// Independent fit + fine-grid integration (10^5 panels).
double bd_oracle(const metrics::RDCurve& anchor, const metrics::RDCurve& test) {
  auto cubic = [](const metrics::RDCurve& c) {
    std::vector<double> xs, ys;
    for (const auto& p : c.points) {
      xs.push_back(p.psnr);
      ys.push_back(std::log10(p.bpp));
    }
    // 4-point exact interpolation by Lagrange basis.
    return [xs, ys](double x) {
      double acc = 0.0;
      for (int i = 0; i < 4; ++i) {
        double term = ys[i];
        for (int j = 0; j < 4; ++j) {
          if (i != j) term *= (x - xs[j]) / (xs[i] - xs[j]);
        }
        acc += term;
      }
      return acc;
    };
  };
  const auto fa = cubic(anchor);
  const auto ft = cubic(test);
  const double lo = std::max(anchor.points.front().psnr,
                             test.points.front().psnr);
  const double hi =
      std::min(anchor.points.back().psnr, test.points.back().psnr);
  const double avg = oracles::trapezoid(
      [&](double p) { return ft(p) - fa(p); }, lo, hi, 100000) / (hi - lo);
  return (std::pow(10.0, avg) - 1.0) * 100.0;
}

void criterion_bdrate() {
  const auto anchor = curve_of(
      {{0.25, 30.1}, {0.5, 33.4}, {1.0, 36.8}, {2.0, 40.3}});
  bool pass = std::fabs(metrics::bd_rate(anchor, anchor)) <= 1e-9;

  auto scaled = anchor;
  {
    std::vector<RDPoint> pts = anchor.points;
    for (auto& p : pts) p.bpp *= 1.10;
    scaled = metrics::make_curve(std::move(pts));
  }
  pass = pass && std::fabs(metrics::bd_rate(anchor, scaled) - 10.0) <= 1e-9;

  std::mt19937 rng(4004);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  for (int trial = 0; trial < 50 && pass; ++trial) {
    std::vector<std::pair<double, double>> a, t;
    double bpp = 0.2, psnr = 29.0;
    for (int i = 0; i < 4; ++i) {
      a.emplace_back(bpp, psnr + jitter(rng));
      bpp *= 1.9 + 0.1 * jitter(rng);
      psnr += 3.0 + jitter(rng);
    }
    bpp = 0.17;
    psnr = 29.4;
    for (int i = 0; i < 4; ++i) {
      t.emplace_back(bpp, psnr + jitter(rng));
      bpp *= 1.85 + 0.1 * jitter(rng);
      psnr += 3.2 + jitter(rng);
    }
    const auto ca = curve_of(a), ct = curve_of(t);
    pass = std::fabs(metrics::bd_rate(ca, ct) - bd_oracle(ca, ct)) <= 1e-6;
  }
  report(7, "BD-rate analytic cases + 1e5-panel quadrature oracle", pass);
}

// --------------------------------------------------------------------------
// 8. Compute accounting on the published complexity row.

void criterion_compute() {
  const double pflops = scaling::compute_pflops(9625.24, 256 * 256, 32, 1, 3.0);
  const bool pass = std::fabs(pflops - 0.12113) <= 1e-4;
  char detail[64];
  std::snprintf(detail, sizeof(detail), "%.6f PFLOPs/step", pflops);
  report(8, "compute accounting (HPCM-1B complexity row)", pass, detail);
}

// --------------------------------------------------------------------------
// 9. CLI determinism and exit codes.

void criterion_cli() {
  using cli_harness::run;
  using cli_harness::slurp;
  using cli_harness::spit;

  const fs::path dir = fs::temp_directory_path() / "rdlab_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir / "imgs");
  const auto p = [&](const std::string& name) {
    return (dir / name).string();
  };
  img::save_image(test_corpus::make_image(7001, 96, 72, 3), p("imgs/a.ppm"));
  img::save_image(test_corpus::make_image(7002, 80, 56, 1), p("imgs/b.pgm"));
  spit(p("anchor.csv"), "bpp,psnr\n0.25,30.1\n0.5,33.4\n1.0,36.8\n2.0,40.3\n");
  spit(p("scaled.csv"), "bpp,psnr\n0.275,30.1\n0.55,33.4\n1.1,36.8\n2.2,40.3\n");
  spit(p("three.csv"), "bpp,psnr\n0.25,30\n0.5,33\n1.0,36\n");
  spit(p("curves.csv"),
       "model_id,n_params_billions,compute_pflops,loss\n"
       "a,0.1,1,0.9\na,0.1,2,0.7\na,0.1,4,0.6\n"
       "b,0.2,1.5,0.95\nb,0.2,3,0.65\nb,0.2,6,0.5\n");

  bool pass = true;
  const auto deterministic = [&](const std::string& args,
                                 const std::vector<std::string>& outputs) {
    const auto r1 = run(args);
    std::vector<std::string> first;
    for (const auto& o : outputs) first.push_back(slurp(o));
    const auto r2 = run(args);
    if (r1.exit_code != 0 || r2.exit_code != 0) return false;
    if (r1.stdout_text != r2.stdout_text) return false;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      if (slurp(outputs[i]) != first[i] || first[i].empty()) return false;
    }
    return true;
  };

  pass = pass && deterministic("encode " + p("imgs/a.ppm") + " " +
                                   p("a.gglc") + " --delta 2",
                               {p("a.gglc")});
  pass = pass &&
         deterministic("decode " + p("a.gglc") + " " + p("a.out.ppm"),
                       {p("a.out.ppm")});
  pass = pass && deterministic("rd-sweep " + p("imgs") +
                                   " --deltas 1,2,4,8 --out " + p("curve.csv"),
                               {p("curve.csv")});
  pass = pass && deterministic("bdrate " + p("anchor.csv") + " " +
                                   p("scaled.csv"),
                               {});
  pass = pass && deterministic("scaling frontier " + p("curves.csv") +
                                   " --out " + p("frontier.svg"),
                               {p("frontier.svg")});

  // Documented exit codes.
  pass = pass && run("encode " + p("missing.ppm") + " " + p("x.gglc"))
                         .exit_code == 1;
  pass = pass && run("encode " + p("imgs/a.ppm") + " " + p("x.gglc") +
                     " --delta 0.1")
                         .exit_code == 2;
  pass = pass && run("bdrate " + p("three.csv") + " " + p("anchor.csv"))
                         .exit_code == 2;
  {
    const std::string good = slurp(p("a.gglc"));
    std::string bad = good;
    bad[0] = 'X';
    spit(p("magic.gglc"), bad);
    pass = pass && run("decode " + p("magic.gglc") + " " + p("y.ppm"))
                           .exit_code == 3;
    spit(p("trunc.gglc"), good.substr(0, good.size() / 2));
    pass = pass && run("decode " + p("trunc.gglc") + " " + p("y.ppm"))
                           .exit_code == 3;
  }
  fs::create_directories(dir / "empty");
  pass = pass && run("rd-sweep " + p("empty") + " --deltas 1,2 --out " +
                     p("z.csv"))
                         .exit_code == 2;

  report(9, "CLI determinism (byte-identical reruns) and exit codes", pass);
  fs::remove_all(dir);
}

}  // namespace

int main() {
  std::printf("rdlab acceptance suite\n");
  criterion_forecast();
  criterion_fit_recovery();
  criterion_pareto();
  criterion_ggm();
  criterion_coder();
  criterion_codec();
  criterion_bdrate();
  criterion_compute();
  criterion_cli();
  std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ALL PASS" : "FAILED",
              g_failures, g_failures == 1 ? "" : "s");
  return g_failures == 0 ? 0 : 1;
}
