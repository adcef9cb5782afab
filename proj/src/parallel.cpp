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

#include "rdlab/parallel.hpp"

#include <cstdlib>
#include <string>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace rdlab {

int thread_count() {
#if defined(_OPENMP)
  int hw = omp_get_max_threads();
#else
  int hw = 1;
#endif
  const char* env = std::getenv("RDLAB_THREADS");
  if (env == nullptr) return hw;
  long requested = 0;
  try {
    requested = std::stol(env);
  } catch (...) {
    return hw;
  }
  if (requested <= 0) return hw;  // 0 = auto
  return static_cast<int>(requested < hw ? requested : hw);
}

}  // namespace rdlab
