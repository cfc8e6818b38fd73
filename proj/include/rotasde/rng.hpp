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

/// Counter-based random streams.
///
/// Philox4x32-10 (Salmon et al., SC'11) keyed by the 64-bit seed, with the 128-bit counter
/// laid out as (index_lo, index_hi, path_id, purpose). Block k of a stream yields two
/// uniforms in (0, 1) with 53 random bits each,
///
///   u = ((w0 >> 5) * 2^26 + (w1 >> 6) + 0.5) * 2^-53  (and likewise from w2, w3),
///
/// turned into normals 2k and 2k+1 by Box-Muller: r = sqrt(-2 ln u1), (r cos 2 pi u2,
/// r sin 2 pi u2). Every normal in a stream is addressable by index, so tables can be
/// filled in parallel and streams for different paths never overlap.

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace rotasde {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Ten-round Philox4x32 bijection.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

enum class StreamPurpose : std::uint32_t { main = 0, resample = 1, setup = 2 };

struct StreamKey {
    std::uint64_t seed = 0;
    std::uint32_t path_id = 0;
    StreamPurpose purpose = StreamPurpose::main;
};

/// Human-readable description of the generator contract, recorded in run manifests.
std::string rng_contract();

/// Sequential reader over the standard normals of one stream.
class NormalStream {
public:
    explicit NormalStream(StreamKey key, std::uint64_t first_index = 0);

    double next();
    void fill(std::span<double> out);

    /// Normal number `index` of the stream, independent of the reader position.
    static double at(StreamKey key, std::uint64_t index);
    /// Normals 2*block and 2*block+1.
    static std::array<double, 2> block(StreamKey key, std::uint64_t block);

    std::uint64_t position() const { return index_; }

private:
    StreamKey key_;
    std::uint64_t index_;
    std::array<double, 2> cached_{};
    std::uint64_t cached_block_ = ~std::uint64_t{0};
};

}  // namespace rotasde
