// SPDX-License-Identifier: Apache-2.0
//
// mprsim - slotted MAC simulator for multi-packet reception channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mprsim/rng.hpp"

#include <cmath>

namespace mprsim
{

double
Rng::Uniform01()
{
    return static_cast<double>(m_engine() >> 11) * 0x1.0p-53;
}

std::uint64_t
Rng::UniformBelow(std::uint64_t bound)
{
    if (bound <= 1)
    {
        return 0;
    }
    // Largest multiple of bound that fits; values above it are rejected.
    const std::uint64_t limit = std::uint64_t(0) - (std::uint64_t(0) - bound) % bound;
    for (;;)
    {
        const std::uint64_t x = m_engine();
        if (limit == 0 || x < limit)
        {
            return x % bound;
        }
    }
}

double
Rng::Exponential(double rate)
{
    return -std::log1p(-Uniform01()) / rate;
}

std::uint64_t
SplitMix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t
DeriveSeed(std::uint64_t master, std::uint64_t node, Substream stream) noexcept
{
    std::uint64_t s = SplitMix64(master);
    s = SplitMix64(s ^ (node + 1) * 0xd1342543de82ef95ULL);
    return SplitMix64(s ^ static_cast<std::uint64_t>(stream));
}

} // namespace mprsim
