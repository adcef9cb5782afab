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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "cli_harness.hpp"
#include "doctest.h"
#include "rdlab/image.hpp"
#include "test_corpus.hpp"

namespace fs = std::filesystem;
using cli_harness::run;
using cli_harness::slurp;
using cli_harness::spit;

namespace {

struct Fixture {
  fs::path dir;

  Fixture() {
    dir = fs::temp_directory_path() / "rdlab_cli_tests";
    fs::remove_all(dir);
    fs::create_directories(dir / "imgs");
    rdlab::img::save_image(test_corpus::make_image(101, 96, 64, 3),
                           (dir / "imgs" / "a.ppm").string());
    rdlab::img::save_image(test_corpus::make_image(102, 64, 80, 1),
                           (dir / "imgs" / "b.pgm").string());

    // Four-point anchor curve and a 10% costlier twin, full precision.
    spit((dir / "anchor.csv").string(),
         "bpp,psnr\n0.25,30.1\n0.5,33.4\n1.0,36.8\n2.0,40.3\n");
    spit((dir / "scaled.csv").string(),
         "bpp,psnr\n0.275,30.1\n0.55,33.4\n1.1,36.8\n2.2,40.3\n");
    spit((dir / "three.csv").string(), "bpp,psnr\n0.25,30\n0.5,33\n1.0,36\n");

    // Exact power-law fixture: L = 2 x^-0.5 at x in {1,2,4,8}.
    spit((dir / "powerlaw.csv").string(),
         "model_id,n_params_billions,compute_pflops,loss\n"
         "m1,1,1,2\n"
         "m2,2,1,1.4142135623730951\n"
         "m3,4,1,1\n"
         "m4,8,1,0.7071067811865476\n");

    // Published-constant fixture: losses on L = 0.7172 N^-0.0147 at the five
    // reference model sizes.
    char buf[256];
    std::string text = "model_id,n_params_billions,compute_pflops,loss\n";
    const double sizes[5] = {0.0685, 0.12008, 0.24643, 0.54357, 1.002};
    for (int i = 0; i < 5; ++i) {
      std::snprintf(buf, sizeof(buf), "m%d,%.17g,%d,%.17g\n", i, sizes[i],
                    i + 1, 0.7172 * std::pow(sizes[i], -0.0147));
      text += buf;
    }
    spit((dir / "published.csv").string(), text);

    // Two training curves from the frontier example.
    spit((dir / "curves.csv").string(),
         "model_id,n_params_billions,compute_pflops,loss\n"
         "a,0.1,1,0.9\na,0.1,2,0.7\na,0.1,4,0.6\n"
         "b,0.2,1.5,0.95\nb,0.2,3,0.65\nb,0.2,6,0.5\n");
  }

  std::string path(const std::string& name) const {
    return (dir / name).string();
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST_CASE("encode prints a stats line and writes a manifest") {
  const auto& f = fixture();
  const auto r = run("encode " + f.path("imgs/a.ppm") + " " + f.path("a.gglc") +
                     " --delta 2");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("bpp=") != std::string::npos);
  CHECK(r.stdout_text.find("psnr=") != std::string::npos);
  CHECK(r.stdout_text.find("bytes=") != std::string::npos);
  CHECK(fs::exists(f.path("a.gglc")));
  CHECK(fs::exists(f.path("a.gglc") + ".manifest.json"));
}

TEST_CASE("encode error paths") {
  const auto& f = fixture();
  CHECK(run("encode " + f.path("missing.ppm") + " " + f.path("x.gglc"))
            .exit_code == 1);
  CHECK(run("encode " + f.path("imgs/a.ppm") + " " + f.path("x.gglc") +
            " --delta 0.1")
            .exit_code == 2);
  CHECK(run("encode").exit_code == 2);
}

TEST_CASE("decode roundtrip agrees with the encode report") {
  const auto& f = fixture();
  const auto enc = run("encode " + f.path("imgs/a.ppm") + " " +
                       f.path("rt.gglc") + " --delta 2");
  REQUIRE(enc.exit_code == 0);
  const double reported_psnr = cli_harness::parse_stat(enc.stdout_text, "psnr");

  const auto dec = run("decode " + f.path("rt.gglc") + " " + f.path("rt.ppm"));
  CHECK(dec.exit_code == 0);
  const auto original = rdlab::img::load_image(f.path("imgs/a.ppm"));
  const auto decoded = rdlab::img::load_image(f.path("rt.ppm"));
  CHECK(std::fabs(rdlab::img::psnr(original, decoded) - reported_psnr) <
        1e-6 + 1e-9);
}

TEST_CASE("decode error paths") {
  const auto& f = fixture();
  // Truncated bitstream.
  const std::string good = slurp(f.path("rt.gglc"));
  REQUIRE(!good.empty());
  spit(f.path("trunc.gglc"), good.substr(0, good.size() / 2));
  CHECK(run("decode " + f.path("trunc.gglc") + " " + f.path("t.ppm"))
            .exit_code == 3);
  // Wrong magic.
  std::string bad = good;
  bad[0] = 'X';
  spit(f.path("magic.gglc"), bad);
  CHECK(run("decode " + f.path("magic.gglc") + " " + f.path("t.ppm"))
            .exit_code == 3);
  // Corrupt payload byte -> CRC.
  bad = good;
  bad[bad.size() - 2] ^= 0x10;
  spit(f.path("crc.gglc"), bad);
  CHECK(run("decode " + f.path("crc.gglc") + " " + f.path("t.ppm"))
            .exit_code == 3);
  // No partial output left behind.
  CHECK(!fs::exists(f.path("t.ppm")));
}

TEST_CASE("rd-sweep writes a curve CSV deterministically") {
  const auto& f = fixture();
  const std::string args = "rd-sweep " + f.path("imgs") +
                           " --deltas 1,2,4,8 --out " + f.path("curve.csv");
  CHECK(run(args).exit_code == 0);
  const std::string first = slurp(f.path("curve.csv"));
  CHECK(run(args).exit_code == 0);
  CHECK(slurp(f.path("curve.csv")) == first);

  // 4 deltas -> header + 4 rows.
  int lines = 0;
  for (const char c : first) lines += c == '\n';
  CHECK(lines == 5);
  CHECK(first.rfind("bpp,psnr\n", 0) == 0);
}

TEST_CASE("rd-sweep rejects an empty directory") {
  const auto& f = fixture();
  fs::create_directories(f.dir / "empty");
  CHECK(run("rd-sweep " + f.path("empty") + " --deltas 1,2 --out " +
            f.path("no.csv"))
            .exit_code == 2);
  CHECK(!fs::exists(f.path("no.csv")));
}

TEST_CASE("bdrate analytic fixtures") {
  const auto& f = fixture();
  const auto same = run("bdrate " + f.path("anchor.csv") + " " +
                        f.path("anchor.csv"));
  CHECK(same.exit_code == 0);
  CHECK(same.stdout_text == "0.000000\n");

  const auto scaled = run("bdrate " + f.path("anchor.csv") + " " +
                          f.path("scaled.csv"));
  CHECK(scaled.exit_code == 0);
  CHECK(scaled.stdout_text == "10.000000\n");

  const auto pchip = run("bdrate --pchip " + f.path("anchor.csv") + " " +
                         f.path("scaled.csv"));
  CHECK(pchip.exit_code == 0);
  CHECK(pchip.stdout_text == "10.000000\n");

  CHECK(run("bdrate " + f.path("three.csv") + " " + f.path("anchor.csv"))
            .exit_code == 2);
  CHECK(run("bdrate " + f.path("missing.csv") + " " + f.path("anchor.csv"))
            .exit_code == 1);
}

TEST_CASE("scaling fit prints the recovered power law") {
  const auto& f = fixture();
  const auto r = run("scaling fit " + f.path("powerlaw.csv"));
  CHECK(r.exit_code == 0);
  CHECK(std::fabs(cli_harness::parse_stat(r.stdout_text, "gamma") - 2.0) <
        1e-5);
  CHECK(std::fabs(cli_harness::parse_stat(r.stdout_text, "alpha") - 0.5) <
        1e-5);
  CHECK(std::fabs(cli_harness::parse_stat(r.stdout_text, "r") + 1.0) < 1e-5);
}

TEST_CASE("scaling forecast reproduces the published numbers") {
  const auto& f = fixture();
  const auto r =
      run("scaling forecast " + f.path("published.csv") + " --targets 2,10");
  CHECK(r.exit_code == 0);
  CHECK(std::fabs(cli_harness::parse_stat(r.stdout_text, "L(2.000000)") -
                  0.7099) < 5e-4);
  CHECK(std::fabs(cli_harness::parse_stat(r.stdout_text, "L(10.000000)") -
                  0.6933) < 5e-4);
}

TEST_CASE("scaling forecast from the shipped reference constants") {
  const std::string ref = std::string(RDLAB_DATA_DIR) + "/hpcm_reference.json";
  const auto r = run("scaling forecast --reference " + ref +
                     " --targets 2,10");
  CHECK(r.exit_code == 0);
  CHECK(std::fabs(cli_harness::parse_stat(r.stdout_text, "L(2.000000)") -
                  0.7099) < 5e-4);
  CHECK(std::fabs(cli_harness::parse_stat(r.stdout_text, "L(10.000000)") -
                  0.6933) < 5e-4);
  CHECK(r.stdout_text.find("cmin_law") != std::string::npos);
}

TEST_CASE("scaling reference prints the model-scale table") {
  const std::string ref = std::string(RDLAB_DATA_DIR) + "/hpcm_reference.json";
  const auto r = run("scaling reference " + ref);
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("1002.000000") != std::string::npos);
  CHECK(r.stdout_text.find("model_size_law") != std::string::npos);
  CHECK(run("scaling reference /nonexistent.json").exit_code == 1);
  // forecast with neither a log nor reference constants is an argument error
  CHECK(run("scaling forecast --targets 2").exit_code == 2);
}

TEST_CASE("scaling frontier emits the expected rows") {
  const auto& f = fixture();
  const auto r = run("scaling frontier " + f.path("curves.csv"));
  CHECK(r.exit_code == 0);
  int lines = 0;
  for (const char c : r.stdout_text) lines += c == '\n';
  CHECK(lines == 6);  // header + 5 frontier rows
  CHECK(r.stdout_text.rfind("compute_pflops,loss\n", 0) == 0);
}

TEST_CASE("scaling outputs are deterministic, including SVG") {
  const auto& f = fixture();
  const std::string args = "scaling fit " + f.path("powerlaw.csv") +
                           " --out " + f.path("fit.svg");
  CHECK(run(args).exit_code == 0);
  const std::string first = slurp(f.path("fit.svg"));
  CHECK(!first.empty());
  CHECK(run(args).exit_code == 0);
  CHECK(slurp(f.path("fit.svg")) == first);

  const std::string csv_args = "scaling frontier " + f.path("curves.csv") +
                               " --out " + f.path("frontier.csv");
  CHECK(run(csv_args).exit_code == 0);
  const std::string csv_first = slurp(f.path("frontier.csv"));
  CHECK(run(csv_args).exit_code == 0);
  CHECK(slurp(f.path("frontier.csv")) == csv_first);
}

TEST_CASE("unknown arguments exit with the documented code") {
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("scaling fit").exit_code == 2);
}
