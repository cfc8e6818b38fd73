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

#include <cmath>
#include <numbers>

#include "rotasde/rng.hpp"

namespace rotasde {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t a, std::uint32_t b)
{
    const std::uint64_t bits = (static_cast<std::uint64_t>(a >> 5) << 26) | (b >> 6);
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key)
{
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::string rng_contract()
{
    return "philox4x32-10; key=(seed_lo32, seed_hi32); counter=(block_lo32, block_hi32, "
           "path_id, purpose{main=0,resample=1,setup=2}); uniform=((w0>>5)*2^26+(w1>>6)+0.5)"
           "*2^-53 from (w0,w1) and (w2,w3); box-muller: normal[2k]=r*cos(2*pi*u2), "
           "normal[2k+1]=r*sin(2*pi*u2), r=sqrt(-2*ln(u1))";
}

std::array<double, 2> NormalStream::block(StreamKey key, std::uint64_t block)
{
    const PhiloxKey k{static_cast<std::uint32_t>(key.seed),
                      static_cast<std::uint32_t>(key.seed >> 32)};
    const PhiloxCounter c{static_cast<std::uint32_t>(block),
                          static_cast<std::uint32_t>(block >> 32), key.path_id,
                          static_cast<std::uint32_t>(key.purpose)};
    const PhiloxCounter w = philox4x32_10(c, k);
    const double u1 = to_unit(w[0], w[1]);
    const double u2 = to_unit(w[2], w[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

double NormalStream::at(StreamKey key, std::uint64_t index)
{
    return block(key, index / 2)[index % 2];
}

NormalStream::NormalStream(StreamKey key, std::uint64_t first_index)
    : key_(key), index_(first_index)
{
}

double NormalStream::next()
{
    const std::uint64_t b = index_ / 2;
    if (b != cached_block_) {
        cached_ = block(key_, b);
        cached_block_ = b;
    }
    return cached_[index_++ % 2];
}

void NormalStream::fill(std::span<double> out)
{
    for (double& x : out) {
        x = next();
    }
}

}  // namespace rotasde
