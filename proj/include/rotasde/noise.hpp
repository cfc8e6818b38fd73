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
#include <span>

#include "rotasde/rng.hpp"
#include "rotasde/so_n.hpp"

namespace rotasde {

/// Brownian increments for `m_steps` steps of size `delta` and `d` drivers; row m holds
/// W(t_{m+1}) - W(t_m).
struct NoiseTable {
    int d = 0;
    std::size_t m_steps = 0;
    double delta = 0.0;
    StreamKey key;
    Matrix increments;

    std::span<const double> row(std::size_t m) const
    {
        return {increments.data() + m * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
    }
};

/// Increments sqrt(delta) * N(0,1) read from stream `key`, entry (m, j) taken from normal
/// index (first_step + m) * d + j. Rows are filled in parallel with OpenMP.
NoiseTable generate_noise(int d, std::size_t m_steps, double delta, StreamKey key,
                          std::size_t first_step = 0);

/// Path 0, main stream.
NoiseTable generate_noise(int d, std::size_t m_steps, double delta, std::uint64_t seed);

/// Serial reference for generate_noise; bit-identical output.
NoiseTable generate_noise_serial(int d, std::size_t m_steps, double delta, StreamKey key,
                                 std::size_t first_step = 0);

/// Sums blocks of `factor` consecutive rows: the same Brownian path on a coarser grid.
NoiseTable coarsen(const NoiseTable& noise, std::size_t factor);

}  // namespace rotasde
