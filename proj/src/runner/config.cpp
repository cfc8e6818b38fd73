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
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "rotasde/analysis.hpp"
#include "rotasde/errors.hpp"
#include "rotasde/rng.hpp"
#include "rotasde/runner/config.hpp"

namespace rotasde::runner {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& message)
{
    throw ConfigError("config field '" + key + "': " + message);
}

double as_double(const json& v, const std::string& key)
{
    if (!v.is_number()) {
        fail(key, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        fail(key, "must be finite");
    }
    return x;
}

std::int64_t as_int(const json& v, const std::string& key)
{
    if (v.is_number_integer()) {
        return v.get<std::int64_t>();
    }
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (std::floor(x) == x && std::abs(x) < 9e15) {
            return static_cast<std::int64_t>(x);
        }
    }
    fail(key, "expected an integer");
}

std::size_t as_count(const json& v, const std::string& key, std::size_t min)
{
    const std::int64_t x = as_int(v, key);
    if (x < static_cast<std::int64_t>(min)) {
        fail(key, "must be >= " + std::to_string(min));
    }
    return static_cast<std::size_t>(x);
}

std::uint64_t as_seed(const json& v, const std::string& key)
{
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    const std::int64_t x = as_int(v, key);
    if (x < 0) {
        fail(key, "must be non-negative");
    }
    return static_cast<std::uint64_t>(x);
}

std::string as_string(const json& v, const std::string& key)
{
    if (!v.is_string()) {
        fail(key, "expected a string");
    }
    return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& key)
{
    if (!v.is_boolean()) {
        fail(key, "expected true or false");
    }
    return v.get<bool>();
}

template <typename F>
auto wrap(const std::string& key, F&& parse)
{
    try {
        return parse();
    } catch (const InvalidArgument& e) {
        fail(key, e.what());
    }
}

std::vector<Scheme> parse_schemes(const json& v, const std::string& key)
{
    std::vector<Scheme> out;
    if (v.is_string()) {
        out.push_back(wrap(key, [&] { return parse_scheme(v.get<std::string>()); }));
        return out;
    }
    if (!v.is_array() || v.empty()) {
        fail(key, "expected a scheme name or a non-empty list of names");
    }
    for (const auto& item : v) {
        const Scheme s = wrap(key, [&] { return parse_scheme(as_string(item, key)); });
        if (std::find(out.begin(), out.end(), s) != out.end()) {
            fail(key, "scheme '" + to_string(s) + "' listed twice");
        }
        out.push_back(s);
    }
    return out;
}

InitialState parse_initial(const json& v, const std::string& key)
{
    InitialState init;
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "identity") {
            init.kind = InitialState::Kind::identity;
        } else if (s == "random") {
            init.kind = InitialState::Kind::random;
        } else {
            fail(key, "expected \"identity\", \"random\" or a matrix (list of rows)");
        }
        return init;
    }
    if (!v.is_array() || v.empty()) {
        fail(key, "expected \"identity\", \"random\" or a matrix (list of rows)");
    }
    const auto rows = static_cast<Eigen::Index>(v.size());
    init.kind = InitialState::Kind::matrix;
    init.matrix = Matrix::Zero(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = v[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
            fail(key, "matrix must be square");
        }
        for (Eigen::Index j = 0; j < rows; ++j) {
            init.matrix(i, j) = as_double(row[static_cast<std::size_t>(j)], key);
        }
    }
    return init;
}

std::vector<Scheme> default_schemes(Command c)
{
    switch (c) {
    case Command::converge:
    case Command::benchmark:
        return {Scheme::tasp, Scheme::slem};
    default:
        return {Scheme::tasp};
    }
}

bool contains(const std::vector<Scheme>& v, Scheme s)
{
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

std::string to_string(Command c)
{
    switch (c) {
    case Command::simulate:
        return "simulate";
    case Command::converge:
        return "converge";
    case Command::brownian_stats:
        return "brownian-stats";
    case Command::check_geometry:
        return "check-geometry";
    case Command::benchmark:
        return "benchmark";
    }
    return "unknown";
}

Command parse_command(const std::string& text)
{
    std::string s = text;
    std::replace(s.begin(), s.end(), '_', '-');
    for (Command c : {Command::simulate, Command::converge, Command::brownian_stats,
                      Command::check_geometry, Command::benchmark}) {
        if (to_string(c) == s) {
            return c;
        }
    }
    throw ConfigError("unknown command '" + text + "'");
}

ExperimentConfig parse_config(const json& doc, Command command)
{
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    ExperimentConfig cfg;
    cfg.command = command;
    for (const auto& [key, v] : doc.items()) {
        if (key == "experiment") {
            const Command c = wrap(key, [&] {
                try {
                    return parse_command(as_string(v, key));
                } catch (const ConfigError& e) {
                    throw InvalidArgument(e.what());
                }
            });
            if (c != command) {
                fail(key, "config is for '" + to_string(c) + "' but the command is '" +
                              to_string(command) + "'");
            }
        } else if (key == "model") {
            cfg.model = as_string(v, key);
            if (cfg.model != "brownian" && cfg.model != "descent") {
                fail(key, "expected \"brownian\" or \"descent\"");
            }
        } else if (key == "n") {
            cfg.n = static_cast<int>(as_count(v, key, 2));
        } else if (key == "delta") {
            cfg.delta = as_double(v, key);
        } else if (key == "t_final") {
            cfg.t_final = as_double(v, key);
        } else if (key == "n_paths") {
            cfg.n_paths = as_count(v, key, 1);
        } else if (key == "seed") {
            cfg.seed = as_seed(v, key);
        } else if (key == "schemes" || key == "scheme") {
            cfg.schemes = parse_schemes(v, key);
        } else if (key == "sqrt_method") {
            cfg.sqrt_method = wrap(key, [&] { return SqrtMethod::parse(as_string(v, key)); });
        } else if (key == "drift_source") {
            cfg.drift_source = wrap(key, [&] { return parse_drift_source(as_string(v, key)); });
        } else if (key == "output_dir") {
            cfg.output_dir = as_string(v, key);
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(as_count(v, key, 0));
        } else if (key == "initial") {
            cfg.initial = parse_initial(v, key);
        } else if (key == "deltas") {
            if (!v.is_array()) {
                fail(key, "expected a list of step sizes");
            }
            cfg.deltas.clear();
            for (const auto& item : v) {
                cfg.deltas.push_back(as_double(item, key));
            }
        } else if (key == "reference_delta") {
            cfg.reference_delta = as_double(v, key);
        } else if (key == "synthetic_error_exponent") {
            cfg.synthetic_error_exponent = as_double(v, key);
        } else if (key == "steps") {
            cfg.steps = as_count(v, key, 1);
        } else if (key == "warmup") {
            cfg.warmup = as_count(v, key, 0);
        } else if (key == "record_timing") {
            cfg.record_timing = as_bool(v, key);
        } else if (key == "record_stride") {
            cfg.record_stride = as_count(v, key, 1);
        } else if (key == "zero_noise") {
            cfg.zero_noise = as_bool(v, key);
        } else if (key == "pd_margin") {
            cfg.pd_margin = as_double(v, key);
        } else if (key == "max_retries") {
            cfg.max_retries = static_cast<int>(as_count(v, key, 1));
        } else {
            fail(key, "unknown field");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, Command command)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path.string() + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc, command);
}

void apply_overrides(ExperimentConfig& cfg, const Overrides& overrides)
{
    if (overrides.seed) {
        cfg.seed = *overrides.seed;
    }
    if (overrides.threads) {
        cfg.threads = *overrides.threads;
    }
    if (overrides.output_dir) {
        cfg.output_dir = *overrides.output_dir;
    }
}

std::vector<std::string> finalize(ExperimentConfig& cfg)
{
    std::vector<std::string> warnings;
    if (cfg.schemes.empty()) {
        cfg.schemes = default_schemes(cfg.command);
    }
    if (!(cfg.delta > 0.0)) {
        fail("delta", "must be positive");
    }
    if (!(cfg.t_final > 0.0)) {
        fail("t_final", "must be positive");
    }
    if (!(cfg.pd_margin >= 0.0 && cfg.pd_margin < 1.0)) {
        fail("pd_margin", "must lie in [0, 1)");
    }
    if (cfg.threads < 0) {
        fail("threads", "must be >= 0");
    }
    if (cfg.initial.kind == InitialState::Kind::matrix && cfg.initial.matrix.rows() != cfg.n) {
        fail("initial", "matrix is " + std::to_string(cfg.initial.matrix.rows()) + "x" +
                            std::to_string(cfg.initial.matrix.rows()) + " but n = " +
                            std::to_string(cfg.n));
    }

    const auto require_steps = [&] {
        try {
            integer_ratio(cfg.t_final, cfg.delta, "t_final / delta");
        } catch (const InvalidArgument& e) {
            fail("delta", e.what());
        }
    };

    switch (cfg.command) {
    case Command::simulate:
        require_steps();
        if (cfg.schemes.size() != 1) {
            fail("schemes", "simulate writes one trajectory file; give exactly one scheme");
        }
        break;
    case Command::check_geometry:
        require_steps();
        break;
    case Command::brownian_stats:
        require_steps();
        if (cfg.model != "brownian") {
            fail("model", "brownian-stats needs the brownian model");
        }
        if (contains(cfg.schemes, Scheme::euclidean)) {
            fail("schemes", "brownian-stats takes logarithms, so euclidean paths are not allowed");
        }
        break;
    case Command::converge: {
        if (cfg.deltas.size() < 3) {
            fail("deltas", "need at least 3 step sizes");
        }
        std::set<double> distinct(cfg.deltas.begin(), cfg.deltas.end());
        if (distinct.size() != cfg.deltas.size()) {
            fail("deltas", "step sizes must be distinct");
        }
        for (double d : cfg.deltas) {
            if (!(d > 0.0)) {
                fail("deltas", "step sizes must be positive");
            }
        }
        if (cfg.synthetic_error_exponent) {
            break;
        }
        if (!(cfg.reference_delta > 0.0)) {
            fail("reference_delta", "must be positive");
        }
        for (double d : cfg.deltas) {
            try {
                integer_ratio(cfg.t_final, d, "t_final / delta");
            } catch (const InvalidArgument& e) {
                fail("deltas", e.what());
            }
            try {
                integer_ratio(d, cfg.reference_delta, "delta / reference_delta");
            } catch (const InvalidArgument& e) {
                fail("reference_delta", e.what());
            }
        }
        break;
    }
    case Command::benchmark:
        if (!contains(cfg.schemes, Scheme::tasp) || !contains(cfg.schemes, Scheme::slem)) {
            fail("schemes", "benchmark compares tasp against slem; list both");
        }
        if (cfg.steps < 10000) {
            warnings.push_back("steps = " + std::to_string(cfg.steps) +
                               " is below the 10000 measured steps the protocol asks for");
        }
        break;
    }
    return warnings;
}

json to_json(const ExperimentConfig& cfg)
{
    json j;
    j["experiment"] = to_string(cfg.command);
    j["model"] = cfg.model;
    j["n"] = cfg.n;
    j["delta"] = cfg.delta;
    j["t_final"] = cfg.t_final;
    j["n_paths"] = cfg.n_paths;
    j["seed"] = cfg.seed;
    json schemes = json::array();
    for (Scheme s : cfg.schemes) {
        schemes.push_back(to_string(s));
    }
    j["schemes"] = schemes;
    j["sqrt_method"] = cfg.sqrt_method.name();
    j["drift_source"] = to_string(cfg.drift_source);
    j["output_dir"] = cfg.output_dir.string();
    j["threads"] = cfg.threads;
    switch (cfg.initial.kind) {
    case InitialState::Kind::identity:
        j["initial"] = "identity";
        break;
    case InitialState::Kind::random:
        j["initial"] = "random";
        break;
    case InitialState::Kind::matrix: {
        json rows = json::array();
        for (Eigen::Index i = 0; i < cfg.initial.matrix.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index k = 0; k < cfg.initial.matrix.cols(); ++k) {
                row.push_back(cfg.initial.matrix(i, k));
            }
            rows.push_back(row);
        }
        j["initial"] = rows;
        break;
    }
    }
    if (cfg.command == Command::converge) {
        j["deltas"] = cfg.deltas;
        j["reference_delta"] = cfg.reference_delta;
        if (cfg.synthetic_error_exponent) {
            j["synthetic_error_exponent"] = *cfg.synthetic_error_exponent;
        }
    }
    if (cfg.command == Command::benchmark) {
        j["steps"] = cfg.steps;
        j["warmup"] = cfg.warmup;
    }
    if (cfg.command == Command::simulate) {
        j["record_timing"] = cfg.record_timing;
        j["record_stride"] = cfg.record_stride;
    }
    j["zero_noise"] = cfg.zero_noise;
    j["pd_margin"] = cfg.pd_margin;
    j["max_retries"] = cfg.max_retries;
    return j;
}

SdeModel make_model(const ExperimentConfig& cfg)
{
    if (cfg.model == "brownian") {
        return brownian_model(cfg.n);
    }
    if (cfg.model == "descent") {
        return descent_model(cfg.n, cfg.drift_source);
    }
    fail("model", "unknown model '" + cfg.model + "'");
}

Rotation random_rotation(int n, std::uint64_t seed)
{
    detail::require_dimension(n);
    NormalStream stream({seed, 0, StreamPurpose::setup});
    std::vector<double> w(static_cast<std::size_t>(n * (n - 1) / 2));
    stream.fill(w);
    SkewMatrix z = skew_from_coordinates(n, w.data());
    const SkewSchur schur = skew_schur(z);
    const double norm2 = schur.angles.empty() ? 0.0 : std::abs(schur.angles.front());
    constexpr double limit = std::numbers::pi / 2.0;
    if (norm2 > limit) {
        z = z * (limit / norm2);
    }
    return expm_skew(z);
}

Matrix make_initial_state(const ExperimentConfig& cfg)
{
    switch (cfg.initial.kind) {
    case InitialState::Kind::identity:
        return Matrix::Identity(cfg.n, cfg.n);
    case InitialState::Kind::random:
        return random_rotation(cfg.n, cfg.seed).matrix();
    case InitialState::Kind::matrix:
        // Checked against the Rotation invariants by the integrators; the Euclidean scheme
        // takes it as is.
        return cfg.initial.matrix;
    }
    return Matrix::Identity(cfg.n, cfg.n);
}

StepConfig make_step_config(const ExperimentConfig& cfg, double delta)
{
    StepConfig s;
    s.delta = delta;
    s.sqrt_method = cfg.sqrt_method;
    s.pd_margin = cfg.pd_margin;
    s.max_retries = cfg.max_retries;
    return s;
}

}  // namespace rotasde::runner
