/*
   Copyright 2026 The rotasde Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "rotasde/integrators.hpp"

namespace rotasde {

/// Calls body(p) for every p in [0, n_paths) on an OpenMP team of `threads` workers
/// (0 picks the runtime default). Every path runs even if another fails; afterwards the
/// exception of the lowest failing path is rethrown, so failures do not depend on the
/// schedule.
void for_each_path(std::size_t n_paths, int threads,
                   const std::function<void(std::size_t)>& body);

/// Same contract, single thread, increasing path order.
void for_each_path_serial(std::size_t n_paths, const std::function<void(std::size_t)>& body);

/// Path p is driven by stream (seed, p, main) and resamples from (seed, p, resample), so the
/// result is independent of the thread count.
std::vector<PathRecord> simulate_ensemble(const SdeModel& model, Scheme scheme, const Matrix& r0,
                                          std::size_t m_steps, const StepConfig& cfg,
                                          std::uint64_t seed, std::size_t n_paths,
                                          int threads = 0);

std::vector<PathRecord> simulate_ensemble_serial(const SdeModel& model, Scheme scheme,
                                                 const Matrix& r0, std::size_t m_steps,
                                                 const StepConfig& cfg, std::uint64_t seed,
                                                 std::size_t n_paths);

}  // namespace rotasde
