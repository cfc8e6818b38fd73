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

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rotasde/runner/config.hpp"

namespace rotasde::runner {

struct RunResult {
    /// Data files in the order they were written (manifest.json excluded).
    std::vector<std::filesystem::path> outputs;
    /// Headline numbers, echoed into the manifest.
    nlohmann::json results = nlohmann::json::object();
    std::vector<std::string> warnings;
};

/// Each writes its data files into cfg.output_dir, which must exist. `cfg` must have been
/// through finalize().
RunResult run_simulate(const ExperimentConfig& cfg);
RunResult run_converge(const ExperimentConfig& cfg);
RunResult run_brownian_stats(const ExperimentConfig& cfg);
RunResult run_check_geometry(const ExperimentConfig& cfg);
RunResult run_benchmark(const ExperimentConfig& cfg);

/// finalize(), create the output directory, dispatch on cfg.command, then write
/// manifest.json with the config echo, per-file SHA-256 and wall-clock totals. Warnings go
/// to `log` when given.
RunResult run(ExperimentConfig cfg, std::ostream* log = nullptr);

/// Library version string.
std::string version();

}  // namespace rotasde::runner
