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

// Step maps, matrix functions, and the OpenMP kernels against their serial references.
//
//   ./rotasde_bench --benchmark_filter=Step

#include <benchmark/benchmark.h>

#include "rotasde/ensemble.hpp"
#include "rotasde/runner/config.hpp"

namespace rotasde {
namespace {

// Typical increment at delta = 1e-3 for the descent model.
SkewMatrix sample_increment(int n)
{
    const SdeModel m = descent_model(n);
    const Rotation r = runner::random_rotation(n, 3);
    NormalStream stream({3, 0, StreamPurpose::main});
    std::vector<double> eps(static_cast<std::size_t>(m.d));
    stream.fill(eps);
    return tangent_increment(m, r, 0.0, 1e-3, eps);
}

template <Scheme S>
void BM_Step(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const SdeModel m = descent_model(n);
    Rotation r = runner::random_rotation(n, 3);
    NormalStream stream({3, 0, StreamPurpose::main});
    StreamIncrements source(stream);
    StepConfig cfg;
    cfg.record_diagnostics = false;
    for (auto _ : state) {
        StepResult res = S == Scheme::tasp ? tasp_step(m, r, 0.0, cfg, source)
                                           : slem_step(m, r, 0.0, cfg, source);
        benchmark::DoNotOptimize(res.state.matrix().data());
    }
}
BENCHMARK(BM_Step<Scheme::tasp>)->Arg(6)->Arg(20)->Arg(50);
BENCHMARK(BM_Step<Scheme::slem>)->Arg(6)->Arg(20)->Arg(50);

void BM_CorrectionExact(benchmark::State& state)
{
    const SkewMatrix z = sample_increment(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(detail::correction_unchecked(z, SqrtMethod::exact()).data());
    }
}
BENCHMARK(BM_CorrectionExact)->Arg(6)->Arg(50);

void BM_CorrectionTaylor5(benchmark::State& state)
{
    const SkewMatrix z = sample_increment(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(detail::correction_unchecked(z, SqrtMethod::taylor(5)).data());
    }
}
BENCHMARK(BM_CorrectionTaylor5)->Arg(6)->Arg(50);

void BM_ExpmPade(benchmark::State& state)
{
    const SkewMatrix z = sample_increment(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(expm_pade(z.matrix()).data());
    }
}
BENCHMARK(BM_ExpmPade)->Arg(6)->Arg(50);

void BM_DescentDrift(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const SdeModel m = descent_model(n);
    const Rotation r = runner::random_rotation(n, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ito_drift(m, r.matrix(), 0.0).value.data());
    }
}
BENCHMARK(BM_DescentDrift)->Arg(6)->Arg(50);

void BM_NoiseSerial(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            generate_noise_serial(1225, 1000, 1e-3, StreamKey{1, 0, StreamPurpose::main})
                .increments.data());
    }
}
BENCHMARK(BM_NoiseSerial)->Unit(benchmark::kMillisecond);

void BM_NoiseParallel(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            generate_noise(1225, 1000, 1e-3, StreamKey{1, 0, StreamPurpose::main})
                .increments.data());
    }
}
BENCHMARK(BM_NoiseParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_EnsembleSerial(benchmark::State& state)
{
    const SdeModel m = brownian_model(6);
    StepConfig cfg;
    cfg.record_diagnostics = false;
    cfg.record_stride = 1000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            simulate_ensemble_serial(m, Scheme::tasp, Matrix::Identity(6, 6), 1000, cfg, 1, 16)
                .data());
    }
}
BENCHMARK(BM_EnsembleSerial)->Unit(benchmark::kMillisecond);

void BM_EnsembleParallel(benchmark::State& state)
{
    const SdeModel m = brownian_model(6);
    StepConfig cfg;
    cfg.record_diagnostics = false;
    cfg.record_stride = 1000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_ensemble(m, Scheme::tasp, Matrix::Identity(6, 6), 1000,
                                                   cfg, 1, 16,
                                                   static_cast<int>(state.range(0)))
                                     .data());
    }
}
BENCHMARK(BM_EnsembleParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace rotasde

BENCHMARK_MAIN();
