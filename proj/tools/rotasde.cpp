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

// rotasde <simulate|converge|brownian-stats|check-geometry|benchmark> --config <file>
//         [--seed N] [--threads N] [--out DIR]
//
// Flags override the corresponding config fields. Exit codes: 0 success, 2 config error,
// 3 numerical failure, 4 I/O error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rotasde/errors.hpp"
#include "rotasde/runner/commands.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

}  // namespace

int main(int argc, char** argv)
{
    using namespace rotasde;

    CLI::App app{"Simulate multiplicative SDEs on SO(n) with S-TaSP, SL-EM and Euler-Maruyama"};
    app.set_version_flag("--version", runner::version());
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out_dir;

    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "Write trajectory.csv for an ensemble of paths"},
        {"converge", "Coupled step-size refinement; write convergence.csv and order.json"},
        {"brownian-stats", "Standardized log-increment statistics; write qq.csv and variance.json"},
        {"check-geometry", "Orthogonality defect over time; write defect.csv"},
        {"benchmark", "Per-step timing of tasp against slem; write timing.csv"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON experiment config")->required();
        sub->add_option("--seed", seed, "Master seed (overrides config)");
        sub->add_option("--threads", threads, "Worker threads, 0 = OpenMP default")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--out", out_dir, "Output directory (overrides config)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        runner::ExperimentConfig cfg =
            runner::load_config(config_path, runner::parse_command(command));
        runner::Overrides overrides;
        overrides.seed = seed;
        overrides.threads = threads;
        if (out_dir) {
            overrides.output_dir = *out_dir;
        }
        runner::apply_overrides(cfg, overrides);
        const runner::RunResult res = runner::run(cfg, &std::cerr);
        for (const auto& path : res.outputs) {
            std::cout << path.string() << '\n';
        }
        std::cout << res.results.dump() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "rotasde: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        std::cerr << "rotasde: invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "rotasde: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const IoError& e) {
        std::cerr << "rotasde: I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "rotasde: I/O error: " << e.what() << '\n';
        return kExitIo;
    }
}
