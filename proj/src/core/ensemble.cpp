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

#include <exception>
#include <string>

#include <omp.h>

#include "rotasde/ensemble.hpp"
#include "rotasde/errors.hpp"

namespace rotasde {

namespace {

void run_guarded(std::size_t p, const std::function<void(std::size_t)>& body,
                 std::exception_ptr& slot)
{
    try {
        try {
            body(p);
        } catch (const NumericalError&) {
            rethrow_numerical_with_context("path " + std::to_string(p) + ": ");
        }
    } catch (...) {
        slot = std::current_exception();
    }
}

void rethrow_first(const std::vector<std::exception_ptr>& errors)
{
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

PathRecord one_path(const SdeModel& model, Scheme scheme, const Matrix& r0, std::size_t m_steps,
                    const StepConfig& cfg, std::uint64_t seed, std::size_t p)
{
    const StreamKey key{seed, static_cast<std::uint32_t>(p), StreamPurpose::main};
    return simulate_path(model, scheme, r0, generate_noise_serial(model.d, m_steps, cfg.delta, key),
                         cfg);
}

}  // namespace

void for_each_path(std::size_t n_paths, int threads,
                   const std::function<void(std::size_t)>& body)
{
    std::vector<std::exception_ptr> errors(n_paths);
    const int team = threads > 0 ? threads : omp_get_max_threads();
    const auto count = static_cast<std::int64_t>(n_paths);
#pragma omp parallel for schedule(dynamic, 1) num_threads(team)
    for (std::int64_t p = 0; p < count; ++p) {
        run_guarded(static_cast<std::size_t>(p), body, errors[static_cast<std::size_t>(p)]);
    }
    rethrow_first(errors);
}

void for_each_path_serial(std::size_t n_paths, const std::function<void(std::size_t)>& body)
{
    std::vector<std::exception_ptr> errors(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        run_guarded(p, body, errors[p]);
    }
    rethrow_first(errors);
}

std::vector<PathRecord> simulate_ensemble(const SdeModel& model, Scheme scheme, const Matrix& r0,
                                          std::size_t m_steps, const StepConfig& cfg,
                                          std::uint64_t seed, std::size_t n_paths, int threads)
{
    std::vector<PathRecord> out(n_paths);
    for_each_path(n_paths, threads, [&](std::size_t p) {
        out[p] = one_path(model, scheme, r0, m_steps, cfg, seed, p);
    });
    return out;
}

std::vector<PathRecord> simulate_ensemble_serial(const SdeModel& model, Scheme scheme,
                                                 const Matrix& r0, std::size_t m_steps,
                                                 const StepConfig& cfg, std::uint64_t seed,
                                                 std::size_t n_paths)
{
    std::vector<PathRecord> out(n_paths);
    for_each_path_serial(n_paths, [&](std::size_t p) {
        out[p] = one_path(model, scheme, r0, m_steps, cfg, seed, p);
    });
    return out;
}

}  // namespace rotasde
