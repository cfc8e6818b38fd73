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
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "rotasde/analysis.hpp"
#include "rotasde/ensemble.hpp"
#include "rotasde/errors.hpp"

namespace rotasde {

std::size_t integer_ratio(double a, double b, const std::string& what)
{
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidArgument(what + ": both values must be positive");
    }
    const double q = a / b;
    const double k = std::round(q);
    if (k < 1.0 || std::abs(q - k) > 1e-9 * std::max(1.0, q)) {
        std::ostringstream os;
        os << what << ": " << a << " / " << b << " = " << q << " is not a positive integer";
        throw InvalidArgument(os.str());
    }
    return static_cast<std::size_t>(k);
}

double sup_squared_distance(const PathRecord& coarse, const PathRecord& reference)
{
    const std::size_t ratio = integer_ratio(coarse.delta, reference.delta, "coarse / reference delta");
    if (coarse.m_steps * ratio != reference.m_steps) {
        throw InvalidArgument("sup_squared_distance: paths cover different horizons");
    }
    double sup = 0.0;
    for (std::size_t i = 0; i < coarse.steps.size(); ++i) {
        const std::size_t target = coarse.steps[i] * ratio;
        const auto it = std::lower_bound(reference.steps.begin(), reference.steps.end(), target);
        if (it == reference.steps.end() || *it != target) {
            throw InvalidArgument("sup_squared_distance: reference has no state at coarse step " +
                                  std::to_string(coarse.steps[i]));
        }
        const Matrix& ref = reference.states[static_cast<std::size_t>(it - reference.steps.begin())];
        sup = std::max(sup, (coarse.states[i] - ref).squaredNorm());
    }
    return sup;
}

double pairwise_sum(std::span<const double> values)
{
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double strong_error(std::span<const PathRecord> coarse, std::span<const PathRecord> reference)
{
    if (coarse.empty() || coarse.size() != reference.size()) {
        throw InvalidArgument("strong_error: need the same nonzero number of coarse and "
                              "reference paths");
    }
    std::vector<double> sups(coarse.size());
    for (std::size_t p = 0; p < coarse.size(); ++p) {
        sups[p] = sup_squared_distance(coarse[p], reference[p]);
    }
    return std::sqrt(pairwise_sum(sups) / static_cast<double>(sups.size()));
}

ConvergenceReport fit_order(std::vector<double> deltas, std::vector<double> errors,
                            std::size_t n_paths)
{
    if (deltas.size() != errors.size()) {
        throw InvalidArgument("fit_order: deltas and errors differ in length");
    }
    if (deltas.size() < 3) {
        throw InvalidArgument("fit_order: need at least 3 step sizes");
    }
    std::vector<std::size_t> order(deltas.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return deltas[a] > deltas[b]; });

    ConvergenceReport rep;
    rep.n_paths = n_paths;
    for (std::size_t i : order) {
        if (!(deltas[i] > 0.0) || !(errors[i] > 0.0) || !std::isfinite(errors[i])) {
            throw InvalidArgument("fit_order: deltas and errors must be positive and finite");
        }
        if (!rep.deltas.empty() && !(deltas[i] < rep.deltas.back())) {
            throw InvalidArgument("fit_order: step sizes must be distinct");
        }
        rep.deltas.push_back(deltas[i]);
        rep.errors.push_back(errors[i]);
    }

    const auto k = static_cast<double>(rep.deltas.size());
    std::vector<double> x(rep.deltas.size());
    std::vector<double> y(rep.deltas.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::log(rep.deltas[i]);
        y[i] = std::log(rep.errors[i]);
    }
    const double xm = std::accumulate(x.begin(), x.end(), 0.0) / k;
    const double ym = std::accumulate(y.begin(), y.end(), 0.0) / k;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
    }
    rep.slope = sxy / sxx;
    rep.intercept = ym - rep.slope * xm;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - rep.intercept - rep.slope * x[i];
        sse += r * r;
    }
    rep.stderr_slope = std::sqrt(sse / (k - 2.0) / sxx);
    return rep;
}

ConvergenceStudy convergence_study(const SdeModel& model, const Matrix& r0,
                                   const ConvergenceStudyConfig& cfg, const StepConfig& step)
{
    if (cfg.schemes.empty()) {
        throw InvalidArgument("convergence_study: no schemes");
    }
    if (cfg.n_paths < 1) {
        throw InvalidArgument("convergence_study: n_paths must be >= 1");
    }
    if (cfg.deltas.size() < 3) {
        throw InvalidArgument("convergence_study: need at least 3 step sizes");
    }

    std::vector<double> deltas = cfg.deltas;
    std::sort(deltas.begin(), deltas.end(), std::greater<>());
    if (std::adjacent_find(deltas.begin(), deltas.end()) != deltas.end()) {
        throw InvalidArgument("convergence_study: step sizes must be distinct");
    }

    const double ref_delta = cfg.reference_delta;
    const std::size_t m_ref = integer_ratio(cfg.t_final, ref_delta, "t_final / reference_delta");
    std::vector<std::size_t> factors;
    std::size_t stride = 0;
    for (double delta : deltas) {
        integer_ratio(cfg.t_final, delta, "t_final / delta");
        const std::size_t k = integer_ratio(delta, ref_delta, "delta / reference_delta");
        factors.push_back(k);
        stride = std::gcd(stride, k);
    }

    ConvergenceStudy study;
    if (factors.back() < 16) {
        std::ostringstream os;
        os << "reference_delta " << ref_delta << " is only " << factors.back()
           << "x finer than the finest tested delta (16x recommended)";
        study.warnings.push_back(os.str());
    }

    const std::size_t n_schemes = cfg.schemes.size();
    const std::size_t n_deltas = deltas.size();
    // sup2[(s * n_deltas + i) * n_paths + p]
    std::vector<double> sup2(n_schemes * n_deltas * cfg.n_paths, 0.0);

    for_each_path(cfg.n_paths, cfg.threads, [&](std::size_t p) {
        const StreamKey key{cfg.seed, static_cast<std::uint32_t>(p), StreamPurpose::main};
        const NoiseTable fine = generate_noise_serial(model.d, m_ref, ref_delta, key);
        std::vector<NoiseTable> coarse_tables;
        coarse_tables.reserve(n_deltas);
        for (std::size_t k : factors) {
            coarse_tables.push_back(coarsen(fine, k));
        }

        for (std::size_t s = 0; s < n_schemes; ++s) {
            StepConfig c = step;
            c.record_diagnostics = false;
            c.delta = fine.delta;
            c.record_stride = stride;
            const PathRecord reference = simulate_path(model, cfg.schemes[s], r0, fine, c);
            c.record_stride = 1;
            for (std::size_t i = 0; i < n_deltas; ++i) {
                c.delta = coarse_tables[i].delta;
                const PathRecord path = simulate_path(model, cfg.schemes[s], r0, coarse_tables[i], c);
                sup2[(s * n_deltas + i) * cfg.n_paths + p] = sup_squared_distance(path, reference);
            }
        }
    });

    for (std::size_t s = 0; s < n_schemes; ++s) {
        std::vector<double> errors(n_deltas);
        for (std::size_t i = 0; i < n_deltas; ++i) {
            const std::span<const double> block(sup2.data() + (s * n_deltas + i) * cfg.n_paths,
                                                cfg.n_paths);
            errors[i] = std::sqrt(pairwise_sum(block) / static_cast<double>(cfg.n_paths));
        }
        ConvergenceReport rep = fit_order(deltas, errors, cfg.n_paths);
        rep.scheme = cfg.schemes[s];
        study.reports.push_back(std::move(rep));
    }
    return study;
}

std::vector<double> log_increment_samples(const PathRecord& path, IncrementScale scale,
                                          const Tolerances& tol)
{
    if (path.states.size() != path.m_steps + 1) {
        throw InvalidArgument("log_increment_samples: path must be recorded at every step");
    }
    if (path.scheme == Scheme::euclidean) {
        throw InvalidArgument("log_increment_samples: euclidean paths leave SO(n)");
    }
    const double factor =
        scale == IncrementScale::standardized ? 1.0 / std::sqrt(path.delta / 2.0) : 1.0;
    std::vector<double> out;
    if (path.m_steps == 0) {
        return out;
    }
    const auto n = path.states.front().rows();
    out.reserve(path.m_steps * static_cast<std::size_t>(n * (n - 1) / 2));
    for (std::size_t m = 1; m < path.states.size(); ++m) {
        const Matrix rel = path.states[m - 1].transpose() * path.states[m];
        const SkewMatrix log = logm_rotation(Rotation::trusted(rel), tol);
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = a + 1; b < n; ++b) {
                out.push_back(factor * log.matrix()(a, b));
            }
        }
    }
    return out;
}

SampleMoments sample_moments(std::span<const double> samples)
{
    SampleMoments m;
    m.count = samples.size();
    if (samples.empty()) {
        return m;
    }
    m.mean = pairwise_sum(samples) / static_cast<double>(m.count);
    if (m.count < 2) {
        return m;
    }
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double e = samples[i] - m.mean;
        sq[i] = e * e;
    }
    m.variance = pairwise_sum(sq) / static_cast<double>(m.count - 1);
    return m;
}

double normal_quantile(double p)
{
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidArgument("normal_quantile: p must lie in (0, 1)");
    }
    // 1 - p is exact here, and the refinement below loses accuracy as p nears 1.
    if (p > 0.5) {
        return -normal_quantile(1.0 - p);
    }
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }

    // Halley step on Phi(x) - p.
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

QqData qq_against_normal(std::vector<double> samples)
{
    if (samples.size() < 10) {
        throw InvalidArgument("qq_against_normal: need at least 10 samples");
    }
    std::sort(samples.begin(), samples.end());
    QqData qq;
    const auto n = static_cast<double>(samples.size());
    qq.theory_q.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        qq.theory_q[i] = normal_quantile((static_cast<double>(i) + 0.5) / n);
    }
    qq.sample_q = std::move(samples);
    return qq;
}

double qq_max_deviation(const QqData& qq, double fraction)
{
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw InvalidArgument("qq_max_deviation: fraction must lie in (0, 1]");
    }
    const auto n = static_cast<double>(qq.sample_q.size());
    const double tail = 0.5 * (1.0 - fraction);
    double worst = 0.0;
    for (std::size_t i = 0; i < qq.sample_q.size(); ++i) {
        const double pos = (static_cast<double>(i) + 0.5) / n;
        if (pos < tail || pos > 1.0 - tail) {
            continue;
        }
        worst = std::max(worst, std::abs(qq.sample_q[i] - qq.theory_q[i]));
    }
    return worst;
}

std::vector<std::pair<double, double>> convergence_to_identity(const PathRecord& path)
{
    std::vector<std::pair<double, double>> out;
    out.reserve(path.states.size());
    for (std::size_t i = 0; i < path.states.size(); ++i) {
        const Matrix& r = path.states[i];
        out.emplace_back(path.times[i], (r - Matrix::Identity(r.rows(), r.cols())).norm());
    }
    return out;
}

TimingSummary timing_summary(Scheme scheme, int n, std::span<const std::int64_t> nanos)
{
    if (nanos.empty()) {
        throw InvalidArgument("timing_summary: no timings recorded");
    }
    TimingSummary s;
    s.scheme = scheme;
    s.n = n;
    s.steps = nanos.size();
    std::vector<double> v(nanos.begin(), nanos.end());
    s.mean_ns = pairwise_sum(v) / static_cast<double>(v.size());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    s.median_ns = v[mid];
    if (v.size() % 2 == 0) {
        const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        s.median_ns = 0.5 * (s.median_ns + lower);
    }
    return s;
}

TimingSummary timing_summary(std::span<const PathRecord> paths)
{
    if (paths.empty()) {
        throw InvalidArgument("timing_summary: no paths");
    }
    std::vector<std::int64_t> all;
    for (const PathRecord& p : paths) {
        if (p.scheme != paths.front().scheme) {
            throw InvalidArgument("timing_summary: paths mix schemes");
        }
        all.insert(all.end(), p.step_nanos.begin(), p.step_nanos.end());
    }
    const int n = paths.front().states.empty() ? 0 : static_cast<int>(paths.front().states.front().rows());
    return timing_summary(paths.front().scheme, n, all);
}

}  // namespace rotasde
