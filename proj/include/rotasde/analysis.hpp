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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rotasde/integrators.hpp"

namespace rotasde {

struct ConvergenceReport {
    Scheme scheme = Scheme::tasp;
    /// Strictly decreasing.
    std::vector<double> deltas;
    std::vector<double> errors;
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    std::size_t n_paths = 0;
};

/// k with k * b == a up to rounding; throws InvalidArgument naming `what` otherwise.
std::size_t integer_ratio(double a, double b, const std::string& what);

/// max over the coarse grid of ||coarse(t) - reference(t)||_F^2. The reference grid must
/// refine the coarse one and store a state at every stored coarse time.
double sup_squared_distance(const PathRecord& coarse, const PathRecord& reference);

/// sqrt(mean_p sup_t ||R_p(t) - Rref_p(t)||_F^2) over paired paths.
double strong_error(std::span<const PathRecord> coarse, std::span<const PathRecord> reference);

/// Pairwise (tree) sum with a fixed shape, so reductions do not depend on thread count.
double pairwise_sum(std::span<const double> values);

/// Least-squares fit of log(error) = intercept + slope * log(delta). Inputs are sorted by
/// decreasing delta; needs at least three points with positive errors.
ConvergenceReport fit_order(std::vector<double> deltas, std::vector<double> errors,
                            std::size_t n_paths = 0);

struct ConvergenceStudyConfig {
    std::vector<Scheme> schemes{Scheme::tasp, Scheme::slem};
    std::vector<double> deltas;
    double reference_delta = 0.0;
    double t_final = 1.0;
    std::size_t n_paths = 100;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct ConvergenceStudy {
    std::vector<ConvergenceReport> reports;
    std::vector<std::string> warnings;
};

/// Coupled refinement: path p draws one table at reference_delta from stream (seed, p, main);
/// every tested delta sees the coarsened table. Each scheme is measured against its own
/// solution at reference_delta. `step` supplies everything but delta.
ConvergenceStudy convergence_study(const SdeModel& model, const Matrix& r0,
                                   const ConvergenceStudyConfig& cfg, const StepConfig& step);

enum class IncrementScale {
    /// Divide by sqrt(delta / 2), the standard deviation of each entry for the Brownian model.
    standardized,
    raw,
};

/// Strictly upper entries of log(R_{m-1}^T R_m) for every recorded step, row-major per step.
/// Needs a path recorded with stride 1.
std::vector<double> log_increment_samples(const PathRecord& path,
                                          IncrementScale scale = IncrementScale::standardized,
                                          const Tolerances& tol = kDefaultTolerances);

struct SampleMoments {
    std::size_t count = 0;
    double mean = 0.0;
    /// Unbiased.
    double variance = 0.0;
};

SampleMoments sample_moments(std::span<const double> samples);

/// Standard-normal quantile; Acklam's rational approximation refined by one Halley step.
double normal_quantile(double p);

struct QqData {
    std::vector<double> theory_q;
    std::vector<double> sample_q;
};

/// Sorted samples against quantiles at (i - 0.5) / N. Needs at least 10 samples.
QqData qq_against_normal(std::vector<double> samples);

/// max |sample_q - theory_q| over the central `fraction` of plotting positions.
double qq_max_deviation(const QqData& qq, double fraction = 0.98);

/// (t, ||R(t) - I||_F) for every stored state.
std::vector<std::pair<double, double>> convergence_to_identity(const PathRecord& path);

struct TimingSummary {
    Scheme scheme = Scheme::tasp;
    int n = 0;
    double mean_ns = 0.0;
    double median_ns = 0.0;
    std::size_t steps = 0;
};

/// Per-step statistics pooled over `paths`, which must share one scheme and carry timings.
TimingSummary timing_summary(std::span<const PathRecord> paths);

/// Same statistics over raw per-step timings.
TimingSummary timing_summary(Scheme scheme, int n, std::span<const std::int64_t> nanos);

}  // namespace rotasde
