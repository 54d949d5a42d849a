/*
 * Copyright 2026 The pdimp Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PDIMP_PARALLEL_H_
#define PDIMP_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace pdimp {

// Runs fn(index, worker) for every index in [0, count) on up to `workers`
// threads (worker ids are 0..workers-1). Each index runs exactly once; callers
// write results to per-index slots so the output does not depend on the
// schedule. If any call throws, the exception from the lowest failing index is
// rethrown after all threads join.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t index,
                                           std::size_t worker)>& fn);

// Worker count from the PDIMP_WORKERS environment variable, else 1.
std::size_t default_worker_count();

}  // namespace pdimp

#endif  // PDIMP_PARALLEL_H_
