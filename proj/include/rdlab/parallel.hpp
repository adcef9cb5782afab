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

#ifndef RDLAB_PARALLEL_HPP_
#define RDLAB_PARALLEL_HPP_

namespace rdlab {

// Number of worker threads for the OpenMP kernels. Honors the RDLAB_THREADS
// environment variable (0 or unset = auto = all hardware threads). Always
// returns at least 1; returns 1 when built without OpenMP.
int thread_count();

}  // namespace rdlab

#endif  // RDLAB_PARALLEL_HPP_
