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
// rdlab command line: codec runs, RD sweeps, BD-rate evaluation, scaling
// fits and report emission.
//
// Exit codes: 0 success, 1 I/O failure, 2 bad arguments or invalid input
// values, 3 malformed data (bad bitstream, CRC failure, bad CSV).

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rdlab/codec.hpp"
#include "rdlab/csv.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/image.hpp"
#include "rdlab/metrics.hpp"
#include "rdlab/reference.hpp"
#include "rdlab/scaling.hpp"
#include "rdlab/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rdlab;

namespace {

constexpr const char* kToolVersion = "rdlab 1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitArgs = 2;
constexpr int kExitData = 3;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// UTC timestamp; honors SOURCE_DATE_EPOCH so archived runs reproduce.
std::string timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      t = static_cast<std::time_t>(std::stoll(env));
    } catch (...) {
    }
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Write-to-temp, rename-on-success: failed commands leave no partial output.
void atomic_write(const fs::path& path, const std::string& data) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("failed writing output file: " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place: " + path.string());
  }
}

void write_manifest(const fs::path& output, const std::string& command,
                    const std::vector<std::string>& inputs,
                    const json& config) {
  json manifest;
  manifest["command"] = command;
  manifest["inputs"] = inputs;
  manifest["config"] = config;
  manifest["tool_version"] = kToolVersion;
  manifest["timestamp"] = timestamp();
  atomic_write(output.string() + ".manifest.json", manifest.dump(2) + "\n");
}

json codec_config_json(const codec::CodecConfig& cfg) {
  json j;
  j["delta"] = cfg.delta;
  j["beta"] = cfg.beta;
  j["color_transform"] = cfg.color_transform;
  j["context_enabled"] = cfg.context_enabled;
  j["context_rho"] = cfg.context_rho;
  return j;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return data;
}

// ---------------------------------------------------------------------------

struct EncodeArgs {
  std::string input, output;
  codec::CodecConfig cfg;
};

int cmd_encode(const EncodeArgs& args) {
  const img::ImageBuffer image = img::load_image(args.input);
  const codec::EncodeResult result = codec::encode_image(image, args.cfg);
  const auto bytes = codec::serialize(result.encoded);
  atomic_write(args.output,
               std::string(bytes.begin(), bytes.end()));
  write_manifest(args.output, "encode", {args.input},
                 codec_config_json(args.cfg));
  std::printf("bpp=%s psnr=%s bytes=%zu\n", fmt6(result.rd.bpp).c_str(),
              fmt6(result.rd.psnr).c_str(), bytes.size());
  return kExitOk;
}

int cmd_decode(const std::string& input, const std::string& output) {
  const std::string data = read_file(input);
  const codec::EncodedImage enc = codec::parse_encoded(std::span(
      reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
  const img::ImageBuffer image = codec::decode_image(enc);
  img::save_image(image, output);
  json config;
  config["delta"] = static_cast<double>(enc.delta);
  config["beta"] = static_cast<double>(enc.beta);
  write_manifest(output, "decode", {input}, config);
  std::printf("width=%u height=%u channels=%u\n", enc.width, enc.height,
              static_cast<unsigned>(enc.channels));
  return kExitOk;
}

struct SweepArgs {
  std::string image_dir, out_csv;
  std::vector<double> deltas;
  codec::CodecConfig cfg;
};

int cmd_rd_sweep(const SweepArgs& args) {
  if (!fs::is_directory(args.image_dir)) {
    throw IoError("not a directory: " + args.image_dir);
  }
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(args.image_dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".ppm" || ext == ".pgm") paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    throw std::invalid_argument("rd-sweep: no .ppm/.pgm images in " +
                                args.image_dir);
  }
  std::vector<img::ImageBuffer> images;
  images.reserve(paths.size());
  for (const auto& p : paths) images.push_back(img::load_image(p));

  const auto points = codec::rd_sweep(images, args.deltas, args.cfg);
  const std::string text = csv::format_rd_curve(points);
  atomic_write(args.out_csv, text);
  json config = codec_config_json(args.cfg);
  config["deltas"] = args.deltas;
  write_manifest(args.out_csv, "rd-sweep", paths, config);
  std::printf("images=%zu points=%zu out=%s\n", images.size(), points.size(),
              args.out_csv.c_str());
  return kExitOk;
}

int cmd_bdrate(const std::string& anchor_path, const std::string& test_path,
               bool pchip) {
  const auto anchor =
      metrics::make_curve(csv::read_rd_curve(anchor_path), "anchor");
  const auto test = metrics::make_curve(csv::read_rd_curve(test_path), "test");
  const double bd = metrics::bd_rate(
      anchor, test, pchip ? metrics::BdFit::kPchip : metrics::BdFit::kCubic);
  std::printf("%s\n", fmt6(bd).c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// scaling subcommands

// One (N, final loss) point per model: the sample at maximal compute.
std::vector<scaling::ScalePoint> final_loss_points(
    const std::vector<scaling::TrainingCurve>& curves) {
  std::vector<scaling::ScalePoint> points;
  for (const auto& curve : curves) {
    points.push_back(scaling::ScalePoint{curve.n_params_billions,
                                         curve.samples.back().second});
  }
  return points;
}

std::string fit_line(const char* name, const scaling::PowerLawFit& fit) {
  std::string line = std::string(name) + ": gamma=" + fmt6(fit.gamma) +
                     " alpha=" + fmt6(fit.alpha_exp);
  if (fit.floor.has_value()) line += " floor=" + fmt6(*fit.floor);
  line += " r=" + fmt6(fit.pearson_r);
  return line;
}

std::vector<std::pair<double, double>> fit_polyline(
    const scaling::PowerLawFit& fit, double lo, double hi) {
  std::vector<std::pair<double, double>> line;
  for (int i = 0; i <= 64; ++i) {
    const double x = lo * std::pow(hi / lo, i / 64.0);
    line.emplace_back(x, scaling::evaluate_fit(fit, x));
  }
  return line;
}

void emit_scaling_output(const fs::path& out, const std::string& csv_text,
                         const svg::PlotSpec& plot, const std::string& command,
                         const std::vector<std::string>& inputs,
                         const json& config) {
  if (out.extension() == ".svg") {
    atomic_write(out, svg::render_plot(plot));
  } else {
    atomic_write(out, csv_text);
  }
  write_manifest(out, command, inputs, config);
}

struct ScalingArgs {
  std::string log_csv;
  std::string reference_json;
  std::string out;
  bool use_floor = false;
  std::vector<double> targets;
};

int cmd_scaling_fit(const ScalingArgs& args) {
  const auto curves = csv::read_training_log(args.log_csv);
  const auto points = final_loss_points(curves);
  const scaling::PowerLawFit fit = args.use_floor
                                       ? scaling::fit_power_law_floor(points)
                                       : scaling::fit_power_law(points);
  std::printf("%s\n", fit_line("fit", fit).c_str());

  if (!args.out.empty()) {
    std::string csv_text = "x,loss,fitted_loss\n";
    for (const auto& p : points) {
      csv_text += fmt6(p.x) + "," + fmt6(p.loss) + "," +
                  fmt6(scaling::evaluate_fit(fit, p.x)) + "\n";
    }
    svg::PlotSpec plot;
    plot.title = "power-law fit";
    plot.x_label = "model size N (billions)";
    plot.y_label = "test loss L";
    svg::Series pts;
    for (const auto& p : points) pts.points.emplace_back(p.x, p.loss);
    pts.draw_line = false;
    pts.draw_markers = true;
    pts.color = "#222222";
    pts.label = "models";
    plot.series.push_back(pts);
    svg::Series line;
    line.points = fit_polyline(fit, points.front().x, points.back().x);
    line.color = "#1f6fb2";
    line.label = fit_line("fit", fit);
    plot.series.push_back(line);
    json config;
    config["floor"] = args.use_floor;
    emit_scaling_output(args.out, csv_text, plot, "scaling fit",
                        {args.log_csv}, config);
  }
  return kExitOk;
}

int cmd_scaling_frontier(const ScalingArgs& args) {
  const auto curves = csv::read_training_log(args.log_csv);
  const auto frontier = scaling::pareto_frontier(curves);
  const std::string csv_text = csv::format_frontier(frontier);
  std::fputs(csv_text.c_str(), stdout);

  if (!args.out.empty()) {
    svg::PlotSpec plot;
    plot.title = "compute-optimal frontier";
    plot.x_label = "training compute C (PFLOPs)";
    plot.y_label = "test loss L";
    for (const auto& curve : curves) {
      svg::Series s;
      for (const auto& [c, l] : curve.samples) s.points.emplace_back(c, l);
      s.color = "#9dbcd4";
      s.stroke_width = 1.0;
      plot.series.push_back(s);
    }
    svg::Series front;
    for (const auto& p : frontier) front.points.emplace_back(p.x, p.loss);
    front.color = "#8c4a1d";
    front.stroke_width = 3.0;
    front.draw_markers = true;
    front.label = "pareto frontier";
    plot.series.push_back(front);
    if (frontier.size() >= 2) {
      const auto fit = scaling::fit_power_law(frontier);
      svg::Series line;
      line.points =
          fit_polyline(fit, frontier.front().x, frontier.back().x);
      line.color = "#c2458f";
      line.label = fit_line("cmin_law", fit);
      plot.series.push_back(line);
    }
    emit_scaling_output(args.out, csv_text, plot, "scaling frontier",
                        {args.log_csv}, json::object());
  }
  return kExitOk;
}

int cmd_scaling_forecast(const ScalingArgs& args) {
  scaling::ForecastReport report;
  if (!args.reference_json.empty()) {
    // Evaluate the published fit constants instead of refitting a log.
    const auto ref = reference::load_reference(args.reference_json);
    report.n_law = ref.model_size_law;
    report.cmin_law = ref.compute_law;
    for (const auto& rec : ref.model_scales) {
      const double n_billions = rec.params_millions / 1000.0;
      report.model_points.push_back(scaling::ScalePoint{
          n_billions, scaling::evaluate_fit(ref.model_size_law, n_billions)});
    }
    for (const double t : args.targets) {
      report.forecasts.emplace_back(
          t, scaling::evaluate_fit(report.n_law, t));
    }
  } else {
    const auto curves = csv::read_training_log(args.log_csv);
    report = scaling::forecast_report(final_loss_points(curves), curves,
                                      args.targets);
  }
  std::printf("%s\n", fit_line("n_law", report.n_law).c_str());
  if (report.cmin_law.has_value()) {
    std::printf("%s\n", fit_line("cmin_law", *report.cmin_law).c_str());
  }
  for (const auto& [target, loss] : report.forecasts) {
    std::printf("L(%s)=%s\n", fmt6(target).c_str(), fmt6(loss).c_str());
  }

  if (!args.out.empty()) {
    std::string csv_text = "target,forecast_loss\n";
    for (const auto& [target, loss] : report.forecasts) {
      csv_text += fmt6(target) + "," + fmt6(loss) + "\n";
    }
    svg::PlotSpec plot;
    plot.title = "scaling forecast";
    plot.x_label = "model size N (billions)";
    plot.y_label = "test loss L";
    svg::Series pts;
    for (const auto& p : report.model_points) {
      pts.points.emplace_back(p.x, p.loss);
    }
    pts.draw_line = false;
    pts.draw_markers = true;
    pts.color = "#222222";
    pts.label = "measured";
    plot.series.push_back(pts);
    double lo = report.model_points.front().x;
    double hi = report.model_points.back().x;
    for (const auto& [target, loss] : report.forecasts) {
      lo = std::min(lo, target);
      hi = std::max(hi, target);
    }
    svg::Series line;
    line.points = fit_polyline(report.n_law, lo, hi);
    line.color = "#1f6fb2";
    line.label = fit_line("n_law", report.n_law);
    plot.series.push_back(line);
    svg::Series marks;
    for (const auto& [target, loss] : report.forecasts) {
      marks.points.emplace_back(target, loss);
    }
    if (!marks.points.empty()) {
      marks.draw_line = false;
      marks.draw_markers = true;
      marks.color = "#c0392b";
      marks.label = "forecast";
      plot.series.push_back(marks);
    }
    json config;
    config["targets"] = args.targets;
    const std::string input =
        args.reference_json.empty() ? args.log_csv : args.reference_json;
    emit_scaling_output(args.out, csv_text, plot, "scaling forecast", {input},
                        config);
  }
  return kExitOk;
}

// Published model configurations and fit constants as hand-inspectable CSV.
int cmd_scaling_reference(const std::string& path) {
  const auto ref = reference::load_reference(path);
  std::printf("# %s\n", ref.source.c_str());
  std::printf(
      "name,params_millions,transform_depths,channels,entropy_blocks\n");
  for (const auto& rec : ref.model_scales) {
    std::string depths, channels, blocks;
    for (const int d : rec.depths) depths += std::to_string(d) + " ";
    for (const int c : rec.channels) channels += std::to_string(c) + " ";
    for (const int b : rec.entropy_blocks) blocks += std::to_string(b) + " ";
    if (!depths.empty()) depths.pop_back();
    if (!channels.empty()) channels.pop_back();
    if (!blocks.empty()) blocks.pop_back();
    std::printf("%s,%s,%s,%s,%s\n", rec.name.c_str(),
                fmt6(rec.params_millions).c_str(), depths.c_str(),
                channels.c_str(), blocks.c_str());
  }
  std::printf("%s\n", fit_line("model_size_law", ref.model_size_law).c_str());
  std::printf("%s\n", fit_line("compute_law", ref.compute_law).c_str());
  for (const auto& [n, loss] : ref.forecasts) {
    std::printf("published L(%s)=%s\n", fmt6(n).c_str(), fmt6(loss).c_str());
  }
  return kExitOk;
}

template <typename Fn>
int run_guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitArgs;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
}

void add_codec_flags(CLI::App* cmd, codec::CodecConfig* cfg) {
  cmd->add_option("--delta", cfg->delta, "base quantizer step (>= 0.25)");
  cmd->add_option("--beta", cfg->beta, "generalized Gaussian shape");
  cmd->add_flag("--ycbcr,!--no-ycbcr", cfg->color_transform,
                "BT.601 color transform for 3-channel input");
  cmd->add_flag("--context", cfg->context_enabled,
                "checkerboard context refinement");
  cmd->add_option("--rho", cfg->context_rho,
                  "context prediction weight in [0, 1]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rate-distortion scaling laboratory"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  EncodeArgs encode_args;
  CLI::App* encode = app.add_subcommand("encode", "compress a PPM/PGM image");
  encode->add_option("input", encode_args.input, "input image (.ppm/.pgm)")
      ->required();
  encode->add_option("output", encode_args.output, "output bitstream")
      ->required();
  add_codec_flags(encode, &encode_args.cfg);

  std::string decode_in, decode_out;
  CLI::App* decode = app.add_subcommand("decode", "decompress a bitstream");
  decode->add_option("input", decode_in, "input bitstream")->required();
  decode->add_option("output", decode_out, "output image (.ppm/.pgm)")
      ->required();

  SweepArgs sweep_args;
  CLI::App* sweep =
      app.add_subcommand("rd-sweep", "rate-distortion sweep over a corpus");
  sweep->add_option("imagedir", sweep_args.image_dir, "directory of images")
      ->required();
  sweep->add_option("--deltas", sweep_args.deltas, "quantizer steps")
      ->delimiter(',')
      ->required();
  sweep->add_option("--out", sweep_args.out_csv, "output curve CSV")
      ->required();
  add_codec_flags(sweep, &sweep_args.cfg);

  std::string bd_anchor, bd_test;
  bool bd_pchip = false;
  CLI::App* bdrate =
      app.add_subcommand("bdrate", "BD-rate between two RD curve CSVs");
  bdrate->add_option("anchor", bd_anchor, "anchor curve CSV")->required();
  bdrate->add_option("test", bd_test, "test curve CSV")->required();
  bdrate->add_flag("--pchip", bd_pchip, "piecewise-cubic-Hermite fit variant");

  CLI::App* scaling_cmd =
      app.add_subcommand("scaling", "scaling-law analysis");
  scaling_cmd->require_subcommand(1);
  ScalingArgs fit_args, frontier_args, forecast_args;
  CLI::App* sfit = scaling_cmd->add_subcommand(
      "fit", "power law over final losses vs model size");
  sfit->add_option("log", fit_args.log_csv, "training log CSV")->required();
  sfit->add_flag("--floor", fit_args.use_floor, "fit an irreducible floor");
  sfit->add_option("--out", fit_args.out, "output .csv or .svg");

  CLI::App* sfrontier = scaling_cmd->add_subcommand(
      "frontier", "compute-optimal Pareto frontier");
  sfrontier->add_option("log", frontier_args.log_csv, "training log CSV")
      ->required();
  sfrontier->add_option("--out", frontier_args.out, "output .csv or .svg");

  CLI::App* sforecast = scaling_cmd->add_subcommand(
      "forecast", "fit both laws and extrapolate");
  sforecast->add_option("log", forecast_args.log_csv,
                        "training log CSV (omit with --reference)");
  sforecast->add_option("--reference", forecast_args.reference_json,
                        "evaluate published fit constants from a reference "
                        "JSON instead of refitting");
  sforecast->add_option("--targets", forecast_args.targets,
                        "model sizes (billions) to forecast")
      ->delimiter(',');
  sforecast->add_option("--out", forecast_args.out, "output .csv or .svg");

  std::string reference_path;
  CLI::App* sreference = scaling_cmd->add_subcommand(
      "reference", "print published model scales and fit constants");
  sreference->add_option("file", reference_path, "reference JSON file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgs;
  }

  if (*encode) return run_guarded([&] { return cmd_encode(encode_args); });
  if (*decode) {
    return run_guarded([&] { return cmd_decode(decode_in, decode_out); });
  }
  if (*sweep) return run_guarded([&] { return cmd_rd_sweep(sweep_args); });
  if (*bdrate) {
    return run_guarded([&] { return cmd_bdrate(bd_anchor, bd_test, bd_pchip); });
  }
  if (*scaling_cmd) {
    if (*sfit) return run_guarded([&] { return cmd_scaling_fit(fit_args); });
    if (*sfrontier) {
      return run_guarded([&] { return cmd_scaling_frontier(frontier_args); });
    }
    if (*sforecast) {
      return run_guarded([&] {
        if (forecast_args.log_csv.empty() &&
            forecast_args.reference_json.empty()) {
          throw std::invalid_argument(
              "scaling forecast: need a training log or --reference");
        }
        return cmd_scaling_forecast(forecast_args);
      });
    }
    if (*sreference) {
      return run_guarded([&] { return cmd_scaling_reference(reference_path); });
    }
  }
  return kExitArgs;
}
