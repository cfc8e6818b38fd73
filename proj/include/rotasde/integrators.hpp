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

/// One-step maps on SO(n) and path simulation.
///
/// All three schemes share the tangent increment
///
///   Z = (B_{o,I} - (1/2) sum_j B_j^2) delta + sum_j B_j dW_j,
///
/// with coefficients frozen at the left endpoint, and differ in how they leave the tangent
/// space: S-TaSP uses R (I + Z + C) with C = sqrt(I - Z^T Z) - I, SL-EM uses R exp(Z), and
/// the Euclidean Euler-Maruyama baseline adds m B_{o,I} delta + sum_j m B_j dW_j.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rotasde/noise.hpp"
#include "rotasde/rng.hpp"
#include "rotasde/sde_model.hpp"
#include "rotasde/so_n.hpp"
#include "rotasde/tolerances.hpp"

namespace rotasde {

enum class Scheme { tasp, slem, euclidean };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& text);

struct StepConfig {
    double delta = 1e-3;
    SqrtMethod sqrt_method = SqrtMethod::exact();
    double pd_margin = kDefaultTolerances.pd_margin;
    int max_retries = 100;
    bool record_diagnostics = true;
    /// Keep every k-th state (and always the last) in a PathRecord.
    std::size_t record_stride = 1;
    Tolerances tol = kDefaultTolerances;

    /// Throws InvalidArgument unless delta > 0, max_retries >= 1 and record_stride >= 1.
    void validate() const;
};

/// Supplies the Brownian increments dW (length d) for one step; called again after a
/// rejected S-TaSP draw.
class IncrementSource {
public:
    virtual ~IncrementSource() = default;
    virtual void draw(std::span<double> dw, double delta) = 0;
};

/// sqrt(delta) times consecutive normals of a stream.
class StreamIncrements final : public IncrementSource {
public:
    explicit StreamIncrements(NormalStream& stream) : stream_(stream) {}
    void draw(std::span<double> dw, double delta) override;

private:
    NormalStream& stream_;
};

/// Always zero; reduces every scheme to its deterministic drift map.
class ZeroIncrements final : public IncrementSource {
public:
    void draw(std::span<double> dw, double) override;
};

struct StepDiagnostics {
    int retries = 0;
    std::int64_t nanos = 0;
    double defect = 0.0;
};

struct StepResult {
    Rotation state;
    StepDiagnostics diag;
};

struct EuclideanStepResult {
    Matrix state;
    StepDiagnostics diag;
};

/// Z from standard normals eps: dW_j = sqrt(delta) eps_j.
SkewMatrix tangent_increment(const SdeModel& model, const Rotation& r, double t, double delta,
                             std::span<const double> eps,
                             const Tolerances& tol = kDefaultTolerances);

/// Z from Brownian increments dW directly.
SkewMatrix tangent_increment_dw(const SdeModel& model, const Matrix& r, double t, double delta,
                                std::span<const double> dw,
                                const Tolerances& tol = kDefaultTolerances);

/// R (I + Z + C). Redraws Z while I - Z^T Z - pd_margin I is not positive definite; throws
/// RetriesExhaustedError after max_retries rejected draws.
StepResult tasp_step(const SdeModel& model, const Rotation& r, double t, const StepConfig& cfg,
                     IncrementSource& source);

/// R exp(Z) with the same Z; no rejection.
StepResult slem_step(const SdeModel& model, const Rotation& r, double t, const StepConfig& cfg,
                     IncrementSource& source);

/// m + m B_{o,I} delta + sum_j m B_j dW_j; leaves the manifold.
EuclideanStepResult euclidean_em_step(const SdeModel& model, const Matrix& m, double t,
                                      const StepConfig& cfg, IncrementSource& source);

/// One simulated trajectory. `states[i]` is the state after step `steps[i]` at `times[i]`;
/// the per-step diagnostics are indexed by step - 1 and have length m_steps (empty when
/// diagnostics are off).
struct PathRecord {
    Scheme scheme = Scheme::tasp;
    double delta = 0.0;
    std::size_t m_steps = 0;
    std::vector<std::size_t> steps;
    std::vector<double> times;
    std::vector<Matrix> states;
    std::vector<double> defects;
    std::vector<int> retries;
    std::vector<std::int64_t> step_nanos;
};

/// Iterates the scheme over every row of `noise`. Rejected S-TaSP draws are replaced from
/// the resample stream {noise.key.seed, noise.key.path_id, resample}, so the table itself
/// is consumed identically by every scheme.
PathRecord simulate_path(const SdeModel& model, Scheme scheme, const Matrix& r0,
                         const NoiseTable& noise, const StepConfig& cfg);

/// Same as simulate_path with every increment forced to zero.
PathRecord simulate_path_noiseless(const SdeModel& model, Scheme scheme, const Matrix& r0,
                                   std::size_t m_steps, const StepConfig& cfg);

}  // namespace rotasde
