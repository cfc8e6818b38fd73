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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "rotasde/errors.hpp"
#include "rotasde/integrators.hpp"

namespace rotasde {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t nanos_since(Clock::time_point start)
{
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
}

// (B_{o,I} - (1/2) sum_j B_j^2) delta, i.e. the skew part of the Ito drift times delta.
Matrix drift_increment(const SdeModel& model, const Matrix& r, double t, double delta,
                       const Tolerances& tol)
{
    return delta * ito_drift(model, r, t, tol).skew_part.matrix();
}

Matrix add_noise(const SdeModel& model, const Matrix& r, double t, Matrix drift,
                 std::span<const double> dw)
{
    if (model.d > 0) {
        drift += combine_diffusion(model, r, t, dw).matrix();
    }
    return drift;
}

// First draw comes from a table row, redraws from the resample stream.
class TableIncrements final : public IncrementSource {
public:
    explicit TableIncrements(NormalStream& resample) : resample_(resample) {}

    void reset(std::span<const double> row)
    {
        row_ = row;
        used_ = false;
    }

    void draw(std::span<double> dw, double delta) override
    {
        if (!used_) {
            std::copy(row_.begin(), row_.end(), dw.begin());
            used_ = true;
            return;
        }
        const double scale = std::sqrt(delta);
        for (double& x : dw) {
            x = scale * resample_.next();
        }
    }

private:
    NormalStream& resample_;
    std::span<const double> row_;
    bool used_ = false;
};

}  // namespace

std::string to_string(Scheme s)
{
    switch (s) {
    case Scheme::tasp:
        return "tasp";
    case Scheme::slem:
        return "slem";
    case Scheme::euclidean:
        return "euclidean";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& text)
{
    if (text == "tasp") {
        return Scheme::tasp;
    }
    if (text == "slem") {
        return Scheme::slem;
    }
    if (text == "euclidean") {
        return Scheme::euclidean;
    }
    throw InvalidArgument("unknown scheme '" + text + "'");
}

void StepConfig::validate() const
{
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw InvalidArgument("step config: delta must be positive");
    }
    if (max_retries < 1) {
        throw InvalidArgument("step config: max_retries must be >= 1");
    }
    if (record_stride < 1) {
        throw InvalidArgument("step config: record_stride must be >= 1");
    }
    if (!(pd_margin >= 0.0 && pd_margin < 1.0)) {
        throw InvalidArgument("step config: pd_margin must lie in [0, 1)");
    }
}

void StreamIncrements::draw(std::span<double> dw, double delta)
{
    const double scale = std::sqrt(delta);
    for (double& x : dw) {
        x = scale * stream_.next();
    }
}

void ZeroIncrements::draw(std::span<double> dw, double)
{
    std::fill(dw.begin(), dw.end(), 0.0);
}

SkewMatrix tangent_increment_dw(const SdeModel& model, const Matrix& r, double t, double delta,
                                std::span<const double> dw, const Tolerances& tol)
{
    return SkewMatrix(add_noise(model, r, t, drift_increment(model, r, t, delta, tol), dw));
}

SkewMatrix tangent_increment(const SdeModel& model, const Rotation& r, double t, double delta,
                             std::span<const double> eps, const Tolerances& tol)
{
    if (static_cast<int>(eps.size()) != model.d) {
        throw InvalidArgument("tangent_increment: eps must have length d");
    }
    std::vector<double> dw(eps.begin(), eps.end());
    const double scale = std::sqrt(delta);
    for (double& x : dw) {
        x *= scale;
    }
    return tangent_increment_dw(model, r.matrix(), t, delta, dw, tol);
}

StepResult tasp_step(const SdeModel& model, const Rotation& r, double t, const StepConfig& cfg,
                     IncrementSource& source)
{
    std::vector<double> dw(static_cast<std::size_t>(model.d));
    std::int64_t nanos = 0;
    Matrix drift;
    for (int attempt = 0;; ++attempt) {
        source.draw(dw, cfg.delta);
        const auto start = Clock::now();
        if (attempt == 0) {
            drift = drift_increment(model, r.matrix(), t, cfg.delta, cfg.tol);
        }
        const SkewMatrix z(add_noise(model, r.matrix(), t, drift, dw));
        if (is_contraction(z, cfg.pd_margin)) {
            Matrix local = z.matrix() + detail::correction_unchecked(z, cfg.sqrt_method);
            local.diagonal().array() += 1.0;
            Matrix next = r.matrix() * local;
            nanos += nanos_since(start);

            StepResult out{Rotation::trusted(std::move(next)), {}};
            out.diag.retries = attempt;
            if (cfg.record_diagnostics) {
                out.diag.nanos = nanos;
                out.diag.defect = orthogonality_defect(out.state.matrix());
            }
            return out;
        }
        nanos += nanos_since(start);
        if (attempt + 1 >= cfg.max_retries) {
            std::ostringstream os;
            os << "tasp_step: " << cfg.max_retries
               << " draws rejected (I - Z^T Z not positive definite); delta = " << cfg.delta
               << " is too large for the noise scale";
            throw RetriesExhaustedError(os.str());
        }
    }
}

StepResult slem_step(const SdeModel& model, const Rotation& r, double t, const StepConfig& cfg,
                     IncrementSource& source)
{
    std::vector<double> dw(static_cast<std::size_t>(model.d));
    source.draw(dw, cfg.delta);
    const auto start = Clock::now();
    const SkewMatrix z = tangent_increment_dw(model, r.matrix(), t, cfg.delta, dw, cfg.tol);
    Matrix next = r.matrix() * expm_pade(z.matrix());
    const std::int64_t nanos = nanos_since(start);

    StepResult out{Rotation::trusted(std::move(next)), {}};
    if (cfg.record_diagnostics) {
        out.diag.nanos = nanos;
        out.diag.defect = orthogonality_defect(out.state.matrix());
    }
    return out;
}

EuclideanStepResult euclidean_em_step(const SdeModel& model, const Matrix& m, double t,
                                      const StepConfig& cfg, IncrementSource& source)
{
    std::vector<double> dw(static_cast<std::size_t>(model.d));
    source.draw(dw, cfg.delta);
    const auto start = Clock::now();
    Matrix generator = cfg.delta * ito_drift(model, m, t, cfg.tol).value;
    generator = add_noise(model, m, t, std::move(generator), dw);
    Matrix next = m + m * generator;
    const std::int64_t nanos = nanos_since(start);

    EuclideanStepResult out{std::move(next), {}};
    if (cfg.record_diagnostics) {
        out.diag.nanos = nanos;
        out.diag.defect = orthogonality_defect(out.state);
    }
    return out;
}

namespace {

template <typename Prepare>
PathRecord run_path(const SdeModel& model, Scheme scheme, const Matrix& r0, std::size_t m_steps,
                    const StepConfig& cfg, IncrementSource& source, Prepare&& prepare)
{
    cfg.validate();
    if (r0.rows() != model.n || r0.cols() != model.n) {
        throw InvalidArgument("simulate_path: initial state has the wrong shape");
    }

    PathRecord rec;
    rec.scheme = scheme;
    rec.delta = cfg.delta;
    rec.m_steps = m_steps;
    const std::size_t stored = m_steps / cfg.record_stride + 2;
    rec.steps.reserve(stored);
    rec.times.reserve(stored);
    rec.states.reserve(stored);
    if (cfg.record_diagnostics) {
        rec.defects.reserve(m_steps);
        rec.retries.reserve(m_steps);
        rec.step_nanos.reserve(m_steps);
    }
    rec.steps.push_back(0);
    rec.times.push_back(0.0);
    rec.states.push_back(r0);

    Matrix state = r0;
    Rotation rotation;
    if (scheme != Scheme::euclidean) {
        rotation = Rotation(r0, cfg.tol.orth_tol);
    }

    for (std::size_t m = 0; m < m_steps; ++m) {
        const double t = static_cast<double>(m) * cfg.delta;
        prepare(m);
        StepDiagnostics diag;
        try {
            switch (scheme) {
            case Scheme::tasp: {
                auto res = tasp_step(model, rotation, t, cfg, source);
                rotation = std::move(res.state);
                diag = res.diag;
                break;
            }
            case Scheme::slem: {
                auto res = slem_step(model, rotation, t, cfg, source);
                rotation = std::move(res.state);
                diag = res.diag;
                break;
            }
            case Scheme::euclidean: {
                auto res = euclidean_em_step(model, state, t, cfg, source);
                state = std::move(res.state);
                diag = res.diag;
                break;
            }
            }
        } catch (const NumericalError&) {
            std::ostringstream os;
            os << "step " << (m + 1) << " (t = " << t << "): ";
            rethrow_numerical_with_context(os.str());
        }

        if (cfg.record_diagnostics) {
            rec.defects.push_back(diag.defect);
            rec.retries.push_back(diag.retries);
            rec.step_nanos.push_back(diag.nanos);
        }
        const std::size_t step = m + 1;
        if (step % cfg.record_stride == 0 || step == m_steps) {
            rec.steps.push_back(step);
            rec.times.push_back(static_cast<double>(step) * cfg.delta);
            rec.states.push_back(scheme == Scheme::euclidean ? state : rotation.matrix());
        }
    }
    return rec;
}

}  // namespace

PathRecord simulate_path(const SdeModel& model, Scheme scheme, const Matrix& r0,
                         const NoiseTable& noise, const StepConfig& cfg)
{
    if (noise.d != model.d) {
        throw InvalidArgument("simulate_path: noise table has " + std::to_string(noise.d) +
                              " drivers, model has " + std::to_string(model.d));
    }
    if (std::abs(noise.delta - cfg.delta) > 1e-12 * cfg.delta) {
        throw InvalidArgument("simulate_path: step config delta differs from noise delta");
    }
    NormalStream resample({noise.key.seed, noise.key.path_id, StreamPurpose::resample});
    TableIncrements source(resample);
    return run_path(model, scheme, r0, noise.m_steps, cfg, source,
                    [&](std::size_t m) { source.reset(noise.row(m)); });
}

PathRecord simulate_path_noiseless(const SdeModel& model, Scheme scheme, const Matrix& r0,
                                   std::size_t m_steps, const StepConfig& cfg)
{
    ZeroIncrements source;
    return run_path(model, scheme, r0, m_steps, cfg, source, [](std::size_t) {});
}

}  // namespace rotasde
