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

#include "rotasde/analysis.hpp"
#include "rotasde/ensemble.hpp"
#include "rotasde/errors.hpp"
#include "rotasde/rng.hpp"
#include "rotasde/runner/commands.hpp"
#include "rotasde/runner/output.hpp"

#ifndef ROTASDE_VERSION
#define ROTASDE_VERSION "unknown"
#endif

namespace rotasde::runner {

using nlohmann::json;

namespace {

std::vector<PathRecord> run_paths(const ExperimentConfig& cfg, const SdeModel& model,
                                  Scheme scheme, const Matrix& r0, std::size_t m_steps,
                                  const StepConfig& step)
{
    if (!cfg.zero_noise) {
        return simulate_ensemble(model, scheme, r0, m_steps, step, cfg.seed, cfg.n_paths,
                                 cfg.threads);
    }
    std::vector<PathRecord> out(cfg.n_paths);
    for_each_path(cfg.n_paths, cfg.threads, [&](std::size_t p) {
        out[p] = simulate_path_noiseless(model, scheme, r0, m_steps, step);
    });
    return out;
}

std::size_t step_count(const ExperimentConfig& cfg)
{
    return integer_ratio(cfg.t_final, cfg.delta, "t_final / delta");
}

json report_json(const ConvergenceReport& r)
{
    return {{"slope", r.slope}, {"stderr", r.stderr_slope}, {"intercept", r.intercept}};
}

}  // namespace

std::string version() { return ROTASDE_VERSION; }

RunResult run_simulate(const ExperimentConfig& cfg)
{
    const SdeModel model = make_model(cfg);
    const Matrix r0 = make_initial_state(cfg);
    const std::size_t m_steps = step_count(cfg);
    const Scheme scheme = cfg.schemes.front();
    StepConfig step = make_step_config(cfg, cfg.delta);
    step.record_stride = cfg.record_stride;

    const std::vector<PathRecord> paths = run_paths(cfg, model, scheme, r0, m_steps, step);

    RunResult res;
    const auto file = cfg.output_dir / "trajectory.csv";
    std::vector<std::string> header{"path_id", "step", "time"};
    for (int i = 0; i < cfg.n; ++i) {
        for (int j = 0; j < cfg.n; ++j) {
            header.push_back("r_" + std::to_string(i) + "_" + std::to_string(j));
        }
    }
    header.insert(header.end(), {"defect", "retries", "step_nanos"});
    CsvWriter csv(file, header);

    double max_defect = 0.0;
    long long total_retries = 0;
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const PathRecord& rec = paths[p];
        for (std::size_t k = 1; k < rec.steps.size(); ++k) {
            const std::size_t s = rec.steps[k];
            csv.field(static_cast<unsigned long long>(p))
                .field(static_cast<unsigned long long>(s))
                .field(rec.times[k]);
            const Matrix& r = rec.states[k];
            for (Eigen::Index i = 0; i < r.rows(); ++i) {
                for (Eigen::Index j = 0; j < r.cols(); ++j) {
                    csv.field(r(i, j));
                }
            }
            csv.field(rec.defects[s - 1])
                .field(static_cast<long long>(rec.retries[s - 1]))
                .field(static_cast<long long>(cfg.record_timing ? rec.step_nanos[s - 1] : 0));
            csv.end_row();
        }
        for (double d : rec.defects) {
            max_defect = std::max(max_defect, d);
        }
        for (int r : rec.retries) {
            total_retries += r;
        }
    }
    csv.close();
    res.outputs.push_back(file);
    res.results["max_defect"] = max_defect;
    res.results["total_retries"] = total_retries;
    res.results["rows"] = static_cast<unsigned long long>(paths.size() * (paths.empty() ? 0 : paths.front().steps.size() - 1));
    return res;
}

RunResult run_converge(const ExperimentConfig& cfg)
{
    RunResult res;
    std::vector<ConvergenceReport> reports;
    double reference_delta = cfg.reference_delta;

    if (cfg.synthetic_error_exponent) {
        std::vector<double> errors;
        for (double d : cfg.deltas) {
            errors.push_back(std::pow(d, *cfg.synthetic_error_exponent));
        }
        for (Scheme s : cfg.schemes) {
            ConvergenceReport r = fit_order(cfg.deltas, errors, cfg.n_paths);
            r.scheme = s;
            reports.push_back(std::move(r));
        }
        res.warnings.push_back("synthetic_error_exponent set: errors are delta^p, no paths run");
    } else {
        const SdeModel model = make_model(cfg);
        const Matrix r0 = make_initial_state(cfg);
        ConvergenceStudyConfig study_cfg;
        study_cfg.schemes = cfg.schemes;
        study_cfg.deltas = cfg.deltas;
        study_cfg.reference_delta = cfg.reference_delta;
        study_cfg.t_final = cfg.t_final;
        study_cfg.n_paths = cfg.n_paths;
        study_cfg.seed = cfg.seed;
        study_cfg.threads = cfg.threads;
        if (cfg.zero_noise) {
            throw ConfigError("config field 'zero_noise': not supported by converge");
        }
        ConvergenceStudy study;
        try {
            study = convergence_study(model, r0, study_cfg, make_step_config(cfg, cfg.delta));
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string(e.what()) +
                              " (all errors vanish when the initial state is an equilibrium, "
                              "e.g. the descent model at the identity; try \"initial\": "
                              "\"random\")");
        }
        reports = std::move(study.reports);
        res.warnings = std::move(study.warnings);
    }

    const auto csv_path = cfg.output_dir / "convergence.csv";
    CsvWriter csv(csv_path, {"delta", "error", "n_paths", "scheme"});
    for (const auto& r : reports) {
        for (std::size_t i = 0; i < r.deltas.size(); ++i) {
            csv.field(r.deltas[i])
                .field(r.errors[i])
                .field(static_cast<unsigned long long>(r.n_paths))
                .field(to_string(r.scheme));
            csv.end_row();
        }
    }
    csv.close();
    res.outputs.push_back(csv_path);

    json order = report_json(reports.front());
    order["scheme"] = to_string(reports.front().scheme);
    order["n_paths"] = cfg.n_paths;
    if (!cfg.synthetic_error_exponent) {
        order["reference_delta"] = reference_delta;
    }
    json per_scheme = json::object();
    for (const auto& r : reports) {
        per_scheme[to_string(r.scheme)] = report_json(r);
    }
    order["schemes"] = per_scheme;
    const auto order_path = cfg.output_dir / "order.json";
    write_json_file(order_path, order);
    res.outputs.push_back(order_path);
    res.results = per_scheme;
    return res;
}

RunResult run_brownian_stats(const ExperimentConfig& cfg)
{
    const SdeModel model = make_model(cfg);
    const Matrix r0 = make_initial_state(cfg);
    const std::size_t m_steps = step_count(cfg);
    StepConfig step = make_step_config(cfg, cfg.delta);
    step.record_diagnostics = false;

    RunResult res;
    json variance;
    json per_scheme = json::object();
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
        const Scheme scheme = cfg.schemes[s];
        const std::vector<PathRecord> paths = run_paths(cfg, model, scheme, r0, m_steps, step);
        std::vector<double> samples;
        for (const PathRecord& p : paths) {
            const std::vector<double> inc = log_increment_samples(p);
            samples.insert(samples.end(), inc.begin(), inc.end());
        }
        const SampleMoments mom = sample_moments(samples);
        const QqData qq = qq_against_normal(samples);
        const double dev = qq_max_deviation(qq, 0.98);
        per_scheme[to_string(scheme)] = {{"variance", mom.variance},
                                         {"mean", mom.mean},
                                         {"sample_count", mom.count},
                                         {"qq_max_deviation_central_98", dev}};
        if (s == 0) {
            variance = per_scheme[to_string(scheme)];
            variance["scheme"] = to_string(scheme);
            const auto qq_path = cfg.output_dir / "qq.csv";
            CsvWriter csv(qq_path, {"theory_q", "sample_q"});
            for (std::size_t i = 0; i < qq.sample_q.size(); ++i) {
                csv.field(qq.theory_q[i]).field(qq.sample_q[i]);
                csv.end_row();
            }
            csv.close();
            res.outputs.push_back(qq_path);
        }
    }
    variance["schemes"] = per_scheme;
    const auto var_path = cfg.output_dir / "variance.json";
    write_json_file(var_path, variance);
    res.outputs.push_back(var_path);
    res.results = per_scheme;
    return res;
}

RunResult run_check_geometry(const ExperimentConfig& cfg)
{
    const SdeModel model = make_model(cfg);
    const Matrix r0 = make_initial_state(cfg);
    const std::size_t m_steps = step_count(cfg);
    StepConfig step = make_step_config(cfg, cfg.delta);
    // Only diagnostics are needed; keep the endpoints.
    step.record_stride = m_steps;

    RunResult res;
    const double defect0 = orthogonality_defect(r0);
    std::vector<std::vector<double>> columns;
    json per_scheme = json::object();
    for (Scheme scheme : cfg.schemes) {
        const std::vector<PathRecord> paths = run_paths(cfg, model, scheme, r0, m_steps, step);
        std::vector<double> col(m_steps + 1, defect0);
        for (std::size_t m = 0; m < m_steps; ++m) {
            double worst = 0.0;
            for (const PathRecord& p : paths) {
                worst = std::max(worst, p.defects[m]);
            }
            col[m + 1] = worst;
        }
        per_scheme[to_string(scheme)] = {
            {"max_defect", *std::max_element(col.begin(), col.end())},
            {"final_defect", col.back()}};
        columns.push_back(std::move(col));
    }

    std::vector<std::string> header{"time"};
    for (Scheme s : cfg.schemes) {
        header.push_back("defect_" + to_string(s));
    }
    const auto file = cfg.output_dir / "defect.csv";
    CsvWriter csv(file, header);
    for (std::size_t m = 0; m <= m_steps; ++m) {
        csv.field(static_cast<double>(m) * cfg.delta);
        for (const auto& col : columns) {
            csv.field(col[m]);
        }
        csv.end_row();
    }
    csv.close();
    res.outputs.push_back(file);
    res.results = per_scheme;
    return res;
}

RunResult run_benchmark(const ExperimentConfig& cfg)
{
    const SdeModel model = make_model(cfg);
    const Matrix r0 = make_initial_state(cfg);
    const std::size_t m_steps = cfg.warmup + cfg.steps;
    StepConfig step = make_step_config(cfg, cfg.delta);
    step.record_stride = m_steps;

    RunResult res;
    std::vector<TimingSummary> summaries;
    for (Scheme scheme : cfg.schemes) {
        PathRecord rec;
        if (cfg.zero_noise) {
            rec = simulate_path_noiseless(model, scheme, r0, m_steps, step);
        } else {
            const NoiseTable noise = generate_noise(
                model.d, m_steps, cfg.delta, StreamKey{cfg.seed, 0, StreamPurpose::main});
            rec = simulate_path(model, scheme, r0, noise, step);
        }
        const std::span<const std::int64_t> measured(rec.step_nanos.data() + cfg.warmup,
                                                     cfg.steps);
        summaries.push_back(timing_summary(scheme, cfg.n, measured));
    }

    const auto file = cfg.output_dir / "timing.csv";
    CsvWriter csv(file, {"scheme", "n", "mean_ns", "median_ns", "steps"});
    json per_scheme = json::object();
    double tasp_mean = 0.0;
    double slem_mean = 0.0;
    for (const auto& s : summaries) {
        csv.field(to_string(s.scheme))
            .field(static_cast<long long>(s.n))
            .field(s.mean_ns)
            .field(s.median_ns)
            .field(static_cast<unsigned long long>(s.steps));
        csv.end_row();
        per_scheme[to_string(s.scheme)] = {{"mean_ns", s.mean_ns}, {"median_ns", s.median_ns}};
        if (s.scheme == Scheme::tasp) {
            tasp_mean = s.mean_ns;
        } else if (s.scheme == Scheme::slem) {
            slem_mean = s.mean_ns;
        }
    }
    csv.close();
    res.outputs.push_back(file);
    res.results = per_scheme;
    res.results["tasp_over_slem_mean"] = tasp_mean / slem_mean;
    return res;
}

RunResult run(ExperimentConfig cfg, std::ostream* log)
{
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> warnings = finalize(cfg);

    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + cfg.output_dir.string() +
                      "': " + ec.message());
    }

    RunResult res;
    switch (cfg.command) {
    case Command::simulate:
        res = run_simulate(cfg);
        break;
    case Command::converge:
        res = run_converge(cfg);
        break;
    case Command::brownian_stats:
        res = run_brownian_stats(cfg);
        break;
    case Command::check_geometry:
        res = run_check_geometry(cfg);
        break;
    case Command::benchmark:
        res = run_benchmark(cfg);
        break;
    }
    warnings.insert(warnings.end(), res.warnings.begin(), res.warnings.end());
    res.warnings = warnings;
    if (log != nullptr) {
        for (const auto& w : res.warnings) {
            *log << "rotasde: warning: " << w << '\n';
        }
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json outputs = json::array();
    for (const auto& path : res.outputs) {
        outputs.push_back({{"file", path.filename().string()},
                           {"sha256", sha256_file(path)},
                           {"bytes", std::filesystem::file_size(path)}});
    }
    json manifest;
    manifest["tool"] = "rotasde";
    manifest["version"] = version();
    manifest["command"] = to_string(cfg.command);
    manifest["config"] = to_json(cfg);
    manifest["rng"] = rng_contract();
    manifest["outputs"] = outputs;
    manifest["wall_clock_seconds"] = {{"total", elapsed}};
    manifest["warnings"] = res.warnings;
    manifest["results"] = res.results;
    write_json_file(cfg.output_dir / "manifest.json", manifest);
    return res;
}

}  // namespace rotasde::runner
