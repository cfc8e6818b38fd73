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

#include "rotasde/errors.hpp"
#include "rotasde/noise.hpp"

namespace rotasde {

namespace {

NoiseTable empty_table(int d, std::size_t m_steps, double delta, StreamKey key)
{
    if (m_steps < 1) {
        throw InvalidArgument("generate_noise: need at least one step");
    }
    if (d < 0 || !(delta > 0.0)) {
        throw InvalidArgument("generate_noise: need d >= 0 and delta > 0");
    }
    NoiseTable t;
    t.d = d;
    t.m_steps = m_steps;
    t.delta = delta;
    t.key = key;
    t.increments.resize(static_cast<Eigen::Index>(m_steps), d);
    return t;
}

// Pairwise sum of rows [first, first + count) of column j. For power-of-two factors this
// makes coarsen(coarsen(x, a), b) bit-identical to coarsen(x, a * b).
double pairwise_sum(const Matrix& m, std::size_t first, std::size_t count, int j)
{
    if (count == 1) {
        return m(static_cast<Eigen::Index>(first), j);
    }
    const std::size_t half = count / 2;
    return pairwise_sum(m, first, half, j) + pairwise_sum(m, first + half, count - half, j);
}

}  // namespace

NoiseTable generate_noise(int d, std::size_t m_steps, double delta, StreamKey key,
                          std::size_t first_step)
{
    NoiseTable t = empty_table(d, m_steps, delta, key);
    const double scale = std::sqrt(delta);
    const auto total = static_cast<std::int64_t>(m_steps) * d;
    const auto offset = static_cast<std::uint64_t>(first_step) * static_cast<std::uint64_t>(d);
    // Each chunk is read sequentially so both normals of a Philox block are used.
    constexpr std::int64_t kChunk = 4096;
    const std::int64_t chunks = (total + kChunk - 1) / kChunk;
    double* out = t.increments.data();
#pragma omp parallel for schedule(static) if (chunks > 1)
    for (std::int64_t c = 0; c < chunks; ++c) {
        const std::int64_t begin = c * kChunk;
        const std::int64_t end = std::min(total, begin + kChunk);
        NormalStream stream(key, offset + static_cast<std::uint64_t>(begin));
        for (std::int64_t i = begin; i < end; ++i) {
            out[i] = scale * stream.next();
        }
    }
    return t;
}

NoiseTable generate_noise(int d, std::size_t m_steps, double delta, std::uint64_t seed)
{
    return generate_noise(d, m_steps, delta, StreamKey{seed, 0, StreamPurpose::main});
}

NoiseTable generate_noise_serial(int d, std::size_t m_steps, double delta, StreamKey key,
                                 std::size_t first_step)
{
    NoiseTable t = empty_table(d, m_steps, delta, key);
    const double scale = std::sqrt(delta);
    NormalStream stream(key, static_cast<std::uint64_t>(first_step) * static_cast<std::uint64_t>(d));
    double* out = t.increments.data();
    const std::size_t total = m_steps * static_cast<std::size_t>(d);
    for (std::size_t i = 0; i < total; ++i) {
        out[i] = scale * stream.next();
    }
    return t;
}

NoiseTable coarsen(const NoiseTable& noise, std::size_t factor)
{
    if (factor == 0 || noise.m_steps % factor != 0) {
        throw InvalidArgument("coarsen: factor " + std::to_string(factor) +
                              " does not divide " + std::to_string(noise.m_steps) + " steps");
    }
    NoiseTable t;
    t.d = noise.d;
    t.m_steps = noise.m_steps / factor;
    t.delta = noise.delta * static_cast<double>(factor);
    t.key = noise.key;
    t.increments.resize(static_cast<Eigen::Index>(t.m_steps), noise.d);
    for (std::size_t m = 0; m < t.m_steps; ++m) {
        for (int j = 0; j < noise.d; ++j) {
            t.increments(static_cast<Eigen::Index>(m), j) =
                pairwise_sum(noise.increments, m * factor, factor, j);
        }
    }
    return t;
}

}  // namespace rotasde
