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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "rotasde/errors.hpp"
#include "rotasde/runner/commands.hpp"
#include "rotasde/runner/config.hpp"
#include "rotasde/runner/output.hpp"

namespace rotasde::runner {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class RunnerTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("rotasde_test_" + std::string(info->name()) + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path dir_;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p)
{
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

std::string config_error_for(const json& doc, Command c)
{
    try {
        ExperimentConfig cfg = parse_config(doc, c);
        finalize(cfg);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

TEST(ConfigTest, ErrorsNameTheField)
{
    EXPECT_NE(config_error_for({{"bogus", 1}}, Command::simulate).find("bogus"),
              std::string::npos);
    EXPECT_NE(config_error_for({{"n", "three"}}, Command::simulate).find("'n'"),
              std::string::npos);
    EXPECT_NE(config_error_for({{"n", 1}}, Command::simulate).find("'n'"), std::string::npos);
    EXPECT_NE(config_error_for({{"delta", -1.0}}, Command::simulate).find("'delta'"),
              std::string::npos);
    EXPECT_NE(config_error_for({{"experiment", "converge"}}, Command::simulate).find("experiment"),
              std::string::npos);
    EXPECT_NE(config_error_for({{"schemes", {"tasp", "heun"}}}, Command::simulate).find("schemes"),
              std::string::npos);
    EXPECT_NE(config_error_for({{"sqrt_method", "taylor(x)"}}, Command::simulate)
                  .find("sqrt_method"),
              std::string::npos);
    EXPECT_NE(config_error_for({{"initial", {{1, 0}, {0}}}}, Command::simulate).find("initial"),
              std::string::npos);
}

TEST(ConfigTest, ParsesEveryField)
{
    const json doc = {{"experiment", "check-geometry"},
                      {"model", "descent"},
                      {"n", 4},
                      {"delta", 0.01},
                      {"t_final", 2.0},
                      {"n_paths", 3},
                      {"seed", 99},
                      {"schemes", {"tasp", "slem", "euclidean"}},
                      {"sqrt_method", "taylor(3)"},
                      {"drift_source", "printed"},
                      {"output_dir", "somewhere"},
                      {"threads", 2},
                      {"initial", "random"},
                      {"record_stride", 5},
                      {"pd_margin", 1e-6},
                      {"max_retries", 12}};
    ExperimentConfig cfg = parse_config(doc, Command::check_geometry);
    EXPECT_TRUE(finalize(cfg).empty());
    EXPECT_EQ(cfg.model, "descent");
    EXPECT_EQ(cfg.n, 4);
    EXPECT_EQ(cfg.n_paths, 3u);
    EXPECT_EQ(cfg.seed, 99u);
    EXPECT_EQ(cfg.schemes.size(), 3u);
    EXPECT_EQ(cfg.sqrt_method, SqrtMethod::taylor(3));
    EXPECT_EQ(cfg.drift_source, DriftSource::printed);
    EXPECT_EQ(cfg.output_dir, fs::path("somewhere"));
    EXPECT_EQ(cfg.initial.kind, InitialState::Kind::random);
    EXPECT_EQ(cfg.max_retries, 12);
    // The echo parses back to the same configuration.
    const json echo = to_json(cfg);
    ExperimentConfig again = parse_config(echo, Command::check_geometry);
    finalize(again);
    EXPECT_EQ(to_json(again), echo);
}

TEST(ConfigTest, CommandConstraints)
{
    EXPECT_NE(config_error_for({{"delta", 0.3}}, Command::simulate).find("delta"),
              std::string::npos);
    EXPECT_NE(config_error_for({{"schemes", {"tasp", "slem"}}}, Command::simulate).find("schemes"),
              std::string::npos);
    EXPECT_NE(config_error_for({{"model", "descent"}}, Command::brownian_stats).find("model"),
              std::string::npos);
    EXPECT_NE(config_error_for({{"schemes", {"euclidean"}}}, Command::brownian_stats)
                  .find("schemes"),
              std::string::npos);
    EXPECT_NE(config_error_for({{"schemes", {"tasp"}}}, Command::benchmark).find("schemes"),
              std::string::npos);
    EXPECT_NE(config_error_for({{"deltas", {0.1, 0.05}}, {"reference_delta", 0.001}},
                               Command::converge)
                  .find("deltas"),
              std::string::npos);
    EXPECT_NE(config_error_for({{"deltas", {0.125, 0.0625, 0.03125}}, {"reference_delta", 0.003}},
                               Command::converge)
                  .find("reference_delta"),
              std::string::npos);

    ExperimentConfig bench = parse_config(json::object(), Command::benchmark);
    bench.steps = 100;
    EXPECT_EQ(finalize(bench).size(), 1u);
    EXPECT_EQ(bench.schemes, (std::vector<Scheme>{Scheme::tasp, Scheme::slem}));
}

TEST(ConfigTest, OverridesTakePrecedence)
{
    ExperimentConfig cfg =
        parse_config({{"seed", 7}, {"threads", 1}, {"output_dir", "a"}}, Command::simulate);
    Overrides o;
    o.seed = 9;
    apply_overrides(cfg, o);
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.threads, 1);
    o.threads = 3;
    o.output_dir = "b";
    apply_overrides(cfg, o);
    EXPECT_EQ(cfg.threads, 3);
    EXPECT_EQ(cfg.output_dir, fs::path("b"));
}

TEST(ConfigTest, RandomInitialStateIsReproducibleRotation)
{
    const Rotation a = random_rotation(5, 3);
    const Rotation b = random_rotation(5, 3);
    EXPECT_EQ(a.matrix(), b.matrix());
    EXPECT_NE(a.matrix(), random_rotation(5, 4).matrix());
    EXPECT_LT(orthogonality_defect(a.matrix()), 1e-13);
    EXPECT_NEAR(a.matrix().determinant(), 1.0, 1e-12);
    EXPECT_NE(a.matrix(), Matrix::Identity(5, 5));
}

TEST_F(RunnerTest, LoadConfigErrors)
{
    EXPECT_THROW(load_config(dir_ / "missing.json", Command::simulate), IoError);
    std::ofstream(dir_ / "broken.json") << "{ not json";
    EXPECT_THROW(load_config(dir_ / "broken.json", Command::simulate), ConfigError);
}

TEST_F(RunnerTest, SimulateWritesOneRowPerStepAndIsReproducible)
{
    ExperimentConfig cfg = parse_config({{"n", 3}, {"delta", 1e-3}, {"t_final", 1.0}, {"seed", 5}},
                                        Command::simulate);
    cfg.output_dir = dir_ / "first";
    const RunResult res = run(cfg);
    const auto rows = read_csv(dir_ / "first" / "trajectory.csv");
    ASSERT_EQ(rows.size(), 1001u);
    const std::vector<std::string> expected_header{
        "path_id", "step",  "time",  "r_0_0", "r_0_1",   "r_0_2",   "r_1_0",     "r_1_1",
        "r_1_2",   "r_2_0", "r_2_1", "r_2_2", "defect", "retries", "step_nanos"};
    EXPECT_EQ(rows[0], expected_header);
    EXPECT_EQ(rows[1][1], "1");
    EXPECT_EQ(rows[1000][1], "1000");
    for (std::size_t k = 1; k < rows.size(); ++k) {
        ASSERT_EQ(rows[k].size(), expected_header.size());
        EXPECT_LE(std::stod(rows[k][12]), 1e-12);
        EXPECT_EQ(rows[k][14], "0");
    }

    cfg.output_dir = dir_ / "second";
    run(cfg);
    EXPECT_EQ(slurp(dir_ / "first" / "trajectory.csv"), slurp(dir_ / "second" / "trajectory.csv"));

    cfg.output_dir = dir_ / "threads";
    cfg.n_paths = 4;
    cfg.threads = 1;
    run(cfg);
    cfg.output_dir = dir_ / "threads4";
    cfg.threads = 4;
    run(cfg);
    EXPECT_EQ(slurp(dir_ / "threads" / "trajectory.csv"),
              slurp(dir_ / "threads4" / "trajectory.csv"));
    EXPECT_EQ(read_csv(dir_ / "threads4" / "trajectory.csv").size(), 4001u);
}

TEST_F(RunnerTest, ManifestChecksumsMatchFiles)
{
    ExperimentConfig cfg = parse_config({{"n", 2}, {"delta", 0.01}}, Command::check_geometry);
    cfg.output_dir = dir_;
    const RunResult res = run(cfg);
    const json manifest = json::parse(slurp(dir_ / "manifest.json"));
    EXPECT_EQ(manifest["command"], "check-geometry");
    EXPECT_EQ(manifest["config"]["n"], 2);
    EXPECT_TRUE(manifest["wall_clock_seconds"]["total"].is_number());
    EXPECT_FALSE(manifest["rng"].get<std::string>().empty());
    ASSERT_EQ(manifest["outputs"].size(), res.outputs.size());
    for (const auto& entry : manifest["outputs"]) {
        const fs::path file = dir_ / entry["file"].get<std::string>();
        EXPECT_EQ(entry["sha256"], sha256_file(file));
        EXPECT_EQ(entry["bytes"].get<std::uintmax_t>(), fs::file_size(file));
    }
}

TEST_F(RunnerTest, Sha256KnownAnswer)
{
    std::ofstream(dir_ / "abc.txt", std::ios::binary) << "abc";
    EXPECT_EQ(sha256_file(dir_ / "abc.txt"),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_THROW(sha256_file(dir_ / "nope"), IoError);
}

TEST_F(RunnerTest, TruncatedSqrtKeepsLargeDescentNearManifold)
{
    ExperimentConfig cfg = parse_config({{"model", "descent"},
                                         {"n", 50},
                                         {"t_final", 10.0},
                                         {"initial", "random"},
                                         {"seed", 5},
                                         {"sqrt_method", "taylor(5)"}},
                                        Command::check_geometry);
    cfg.output_dir = dir_;
    const RunResult res = run(cfg);
    EXPECT_LE(res.results["tasp"]["max_defect"].get<double>(), 1e-6);
    EXPECT_EQ(read_csv(dir_ / "defect.csv").size(), 10002u);
}

TEST_F(RunnerTest, ZeroNoiseStatsAreAllZero)
{
    ExperimentConfig cfg = parse_config({{"n", 3}, {"delta", 0.01}, {"zero_noise", true}},
                                        Command::brownian_stats);
    cfg.output_dir = dir_;
    run(cfg);
    const auto rows = read_csv(dir_ / "qq.csv");
    ASSERT_EQ(rows.size(), 301u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"theory_q", "sample_q"}));
    for (std::size_t k = 1; k < rows.size(); ++k) {
        EXPECT_EQ(std::stod(rows[k][1]), 0.0);
    }
}

TEST_F(RunnerTest, SyntheticConvergenceRecoversExponent)
{
    ExperimentConfig cfg =
        parse_config({{"deltas", {0.0625, 0.03125, 0.015625, 0.0078125}},
                      {"reference_delta", 0.0009765625},
                      {"synthetic_error_exponent", 0.5}},
                     Command::converge);
    cfg.output_dir = dir_;
    run(cfg);
    const json order = json::parse(slurp(dir_ / "order.json"));
    EXPECT_NEAR(order["slope"].get<double>(), 0.5, 1e-12);
    const auto rows = read_csv(dir_ / "convergence.csv");
    EXPECT_EQ(rows[0], (std::vector<std::string>{"delta", "error", "n_paths", "scheme"}));
    EXPECT_EQ(rows.size(), 9u);
}

TEST_F(RunnerTest, ConvergeAtEquilibriumExplainsItself)
{
    // tau vanishes at the identity, so the descent model never leaves it.
    ExperimentConfig cfg = parse_config({{"model", "descent"},
                                         {"deltas", {0.125, 0.0625, 0.03125}},
                                         {"reference_delta", 0.0078125},
                                         {"n_paths", 2}},
                                        Command::converge);
    cfg.output_dir = dir_;
    try {
        run(cfg);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("equilibrium"), std::string::npos) << e.what();
    }
    cfg.initial.kind = InitialState::Kind::random;
    const RunResult res = run(cfg);
    EXPECT_TRUE(res.results.contains("tasp"));
    EXPECT_TRUE(res.results.contains("slem"));
}

TEST_F(RunnerTest, BenchmarkReportsBothSchemes)
{
    ExperimentConfig cfg =
        parse_config({{"n", 4}, {"steps", 200}, {"warmup", 10}}, Command::benchmark);
    cfg.output_dir = dir_;
    const RunResult res = run(cfg);
    const auto rows = read_csv(dir_ / "timing.csv");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"scheme", "n", "mean_ns", "median_ns", "steps"}));
    EXPECT_EQ(rows[1][0], "tasp");
    EXPECT_EQ(rows[2][0], "slem");
    EXPECT_EQ(rows[1][4], "200");
    EXPECT_TRUE(res.results.contains("tasp_over_slem_mean"));
    EXPECT_EQ(res.warnings.size(), 1u);
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(ROTASDE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

TEST_F(RunnerTest, CliExitCodes)
{
    const fs::path good = dir_ / "good.json";
    std::ofstream(good) << json{{"n", 2}, {"delta", 0.01}}.dump();
    const fs::path bad = dir_ / "bad.json";
    std::ofstream(bad) << json{{"n", 2}, {"wrong", 1}}.dump();
    const fs::path at_pi = dir_ / "pi.json";
    std::ofstream(at_pi) << json{{"model", "descent"},
                                 {"n", 3},
                                 {"delta", 0.01},
                                 {"initial", {{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}}}}
                                .dump();
    const std::string out = " --out " + (dir_ / "cli").string();

    EXPECT_EQ(run_cli("simulate --config " + good.string() + out), 0);
    EXPECT_TRUE(fs::exists(dir_ / "cli" / "manifest.json"));
    EXPECT_EQ(run_cli("simulate --config " + bad.string() + out), 2);
    EXPECT_EQ(run_cli("simulate" + out), 2);
    EXPECT_EQ(run_cli("teleport --config " + good.string()), 2);
    EXPECT_EQ(run_cli("simulate --config " + at_pi.string() + out), 3);
    EXPECT_EQ(run_cli("simulate --config " + (dir_ / "absent.json").string() + out), 4);
    EXPECT_EQ(run_cli("simulate --config " + good.string() + " --seed 4" + out), 0);
    const json manifest = json::parse(slurp(dir_ / "cli" / "manifest.json"));
    EXPECT_EQ(manifest["config"]["seed"], 4);
}

}  // namespace
}  // namespace rotasde::runner
