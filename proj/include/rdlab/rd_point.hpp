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

#ifndef RDLAB_RD_POINT_HPP_
#define RDLAB_RD_POINT_HPP_

namespace rdlab {

// One rate-distortion sample of a codec configuration.
struct RDPoint {
  double bpp = 0.0;   // bits per pixel over all coded streams
  double psnr = 0.0;  // dB; +infinity for lossless reproduction
  double mse = 0.0;   // 0-255 sample scale
};

}  // namespace rdlab

#endif  // RDLAB_RD_POINT_HPP_
