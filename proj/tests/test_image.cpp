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

#include "rdlab/image.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "rdlab/errors.hpp"

using namespace rdlab;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rdlab_image_tests";
  fs::create_directories(dir);
  return dir / name;
}

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("2x2 P6 file loads verbatim") {
  const std::string payload{"P6\n2 2\n255\n"};
  std::string bytes = payload;
  const unsigned char raw[12] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 255};
  bytes.append(reinterpret_cast<const char*>(raw), 12);
  const auto path = temp_file("tiny.ppm");
  write_bytes(path, bytes);

  const img::ImageBuffer image = img::load_image(path.string());
  CHECK(image.width == 2);
  CHECK(image.height == 2);
  CHECK(image.channels == 3);
  for (int i = 0; i < 12; ++i) CHECK(image.samples[i] == raw[i]);
}

TEST_CASE("save then load is the identity") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> d(0, 255);
  for (const int channels : {1, 3}) {
    img::ImageBuffer image;
    image.width = 13;
    image.height = 7;
    image.channels = channels;
    image.samples.resize(13 * 7 * channels);
    for (auto& s : image.samples) s = static_cast<std::uint8_t>(d(rng));

    const auto path = temp_file("roundtrip.ppm");
    img::save_image(image, path.string());
    const img::ImageBuffer back = img::load_image(path.string());
    CHECK(back.width == image.width);
    CHECK(back.height == image.height);
    CHECK(back.channels == image.channels);
    CHECK(back.samples == image.samples);
  }
}

TEST_CASE("unsupported depth and malformed inputs are rejected") {
  SUBCASE("maxval != 255") {
    const auto path = temp_file("depth.ppm");
    write_bytes(path, "P6\n1 1\n65535\nxxxxxx");
    CHECK_THROWS_AS(img::load_image(path.string()), FormatError);
  }
  SUBCASE("bad magic") {
    const auto path = temp_file("magic.ppm");
    write_bytes(path, "P7\n1 1\n255\n   ");
    CHECK_THROWS_AS(img::load_image(path.string()), FormatError);
  }
  SUBCASE("truncated payload") {
    const auto path = temp_file("trunc.ppm");
    write_bytes(path, "P6\n2 2\n255\nab");
    CHECK_THROWS_AS(img::load_image(path.string()), FormatError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(img::load_image("/nonexistent/rdlab.ppm"), IoError);
  }
  SUBCASE("comments in the header are fine") {
    const auto path = temp_file("comment.pgm");
    write_bytes(path, "P5\n# a comment\n1 1\n255\nX");
    const img::ImageBuffer image = img::load_image(path.string());
    CHECK(image.samples[0] == 'X');
  }
}

TEST_CASE("psnr") {
  img::ImageBuffer a;
  a.width = 4;
  a.height = 4;
  a.channels = 1;
  a.samples.assign(16, 100);
  img::ImageBuffer b = a;

  SUBCASE("identical images hit the infinite sentinel") {
    CHECK(img::psnr(a, b) == img::infinite_psnr());
  }
  SUBCASE("uniform difference of one") {
    for (auto& s : b.samples) s = 101;
    CHECK(img::psnr(a, b) == doctest::Approx(48.1308).epsilon(1e-6));
  }
  SUBCASE("full-scale difference") {
    a.samples.assign(16, 0);
    b.samples.assign(16, 255);
    CHECK(img::psnr(a, b) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
  SUBCASE("dimension mismatch") {
    b.width = 5;
    b.samples.resize(20);
    CHECK_THROWS_AS(img::psnr(a, b), std::invalid_argument);
  }
}
