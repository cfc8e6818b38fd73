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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rotasde/integrators.hpp"
#include "rotasde/sde_model.hpp"
#include "rotasde/so_n.hpp"

namespace rotasde::runner {

enum class Command { simulate, converge, brownian_stats, check_geometry, benchmark };

std::string to_string(Command c);
/// Accepts the CLI spelling ("brownian-stats") and the underscore form.
Command parse_command(const std::string& text);

struct InitialState {
    enum class Kind { identity, random, matrix };
    Kind kind = Kind::identity;
    /// Only for Kind::matrix.
    Matrix matrix;
};

/// One experiment. Field names match the JSON keys.
struct ExperimentConfig {
    Command command = Command::simulate;
    std::string model = "brownian";
    int n = 3;
    double delta = 1e-3;
    double t_final = 1.0;
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
    /// Empty means the command's default set.
    std::vector<Scheme> schemes;
    SqrtMethod sqrt_method = SqrtMethod::exact();
    DriftSource drift_source = DriftSource::converted;
    std::filesystem::path output_dir = ".";
    int threads = 0;
    InitialState initial;

    // converge
    std::vector<double> deltas;
    double reference_delta = 0.0;
    /// Plumbing check: replace measured errors by delta^p.
    std::optional<double> synthetic_error_exponent;

    // benchmark
    std::size_t steps = 10000;
    std::size_t warmup = 100;

    // simulate
    bool record_timing = false;
    std::size_t record_stride = 1;

    /// Forces every Brownian increment to zero.
    bool zero_noise = false;
    double pd_margin = kDefaultTolerances.pd_margin;
    int max_retries = 100;
};

/// Command-line values; they take precedence over the config file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::filesystem::path> output_dir;
};

/// Builds a config from a JSON object. Unknown keys and ill-typed values raise ConfigError
/// naming the key. An "experiment" key, when present, must agree with `command`.
ExperimentConfig parse_config(const nlohmann::json& doc, Command command);

/// parse_config on the contents of `path`; unreadable files raise IoError.
ExperimentConfig load_config(const std::filesystem::path& path, Command command);

void apply_overrides(ExperimentConfig& cfg, const Overrides& overrides);

/// Fills command defaults (schemes) and checks cross-field constraints. Returns warnings;
/// throws ConfigError on violations.
std::vector<std::string> finalize(ExperimentConfig& cfg);

/// Effective configuration, as echoed into the manifest.
nlohmann::json to_json(const ExperimentConfig& cfg);

SdeModel make_model(const ExperimentConfig& cfg);

/// Gaussian skew matrix from stream (seed, 0, setup), shrunk to spectral norm pi/2 when
/// larger, then exponentiated.
Rotation random_rotation(int n, std::uint64_t seed);

Matrix make_initial_state(const ExperimentConfig& cfg);

StepConfig make_step_config(const ExperimentConfig& cfg, double delta);

}  // namespace rotasde::runner
