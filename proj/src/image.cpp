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
#include <fstream>
#include <limits>
#include <stdexcept>

#include "rdlab/errors.hpp"

namespace rdlab::img {

namespace {

// Next PPM header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int parse_positive_int(const std::string& tok, const char* what) {
  if (tok.empty()) throw FormatError(std::string("ppm: missing ") + what);
  for (const char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw FormatError(std::string("ppm: malformed ") + what);
    }
  }
  long v = 0;
  try {
    v = std::stol(tok);
  } catch (...) {
    throw FormatError(std::string("ppm: malformed ") + what);
  }
  if (v <= 0 || v > (1 << 24)) {
    throw FormatError(std::string("ppm: out-of-range ") + what);
  }
  return static_cast<int>(v);
}

}  // namespace

ImageBuffer load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image file: " + path);

  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (!in || m0 != 'P' || (m1 != '5' && m1 != '6')) {
    throw FormatError("ppm: unsupported magic (need P5 or P6): " + path);
  }
  const int channels = (m1 == '6') ? 3 : 1;

  const int width = parse_positive_int(next_token(in), "width");
  const int height = parse_positive_int(next_token(in), "height");
  const std::string maxval_tok = next_token(in);
  if (maxval_tok != "255") {
    throw FormatError("ppm: unsupported bit depth (maxval must be 255): " +
                      path);
  }
  // The maxval token is followed by exactly one whitespace byte, already
  // consumed by the tokenizer.

  ImageBuffer image;
  image.width = width;
  image.height = height;
  image.channels = channels;
  image.samples.resize(static_cast<std::size_t>(width) * height * channels);
  in.read(reinterpret_cast<char*>(image.samples.data()),
          static_cast<std::streamsize>(image.samples.size()));
  if (static_cast<std::size_t>(in.gcount()) != image.samples.size()) {
    throw FormatError("ppm: truncated payload: " + path);
  }
  return image;
}

void save_image(const ImageBuffer& image, const std::string& path) {
  if (image.channels != 1 && image.channels != 3) {
    throw std::invalid_argument("save_image: channels must be 1 or 3");
  }
  if (image.samples.size() != static_cast<std::size_t>(image.width) *
                                  image.height * image.channels) {
    throw std::invalid_argument("save_image: sample count mismatch");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output image file: " + path);
  out << (image.channels == 3 ? "P6" : "P5") << "\n"
      << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.samples.data()),
            static_cast<std::streamsize>(image.samples.size()));
  if (!out) throw IoError("failed writing image file: " + path);
}

double infinite_psnr() { return std::numeric_limits<double>::infinity(); }

double mse(const ImageBuffer& a, const ImageBuffer& b) {
  if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
    throw std::invalid_argument("mse: image dimensions differ");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double d =
        static_cast<double>(a.samples[i]) - static_cast<double>(b.samples[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(a.samples.size());
}

double psnr_from_mse(double mse_value) {
  if (mse_value <= 0.0) return infinite_psnr();
  return 10.0 * std::log10(255.0 * 255.0 / mse_value);
}

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
  return psnr_from_mse(mse(a, b));
}

}  // namespace rdlab::img
