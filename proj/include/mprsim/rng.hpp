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

#ifndef MPRSIM_RNG_HPP
#define MPRSIM_RNG_HPP

#include <cstdint>
#include <random>

namespace mprsim
{

/**
 * Seeded random stream with platform-independent output.
 *
 * The engine is std::mt19937_64, whose sequence is fixed by the standard.
 * The standard distributions are implementation-defined, so the uniform and
 * exponential transforms are written out here.
 */
class Rng
{
  public:
    explicit Rng(std::uint64_t seed)
        : m_engine(seed)
    {
    }

    std::uint64_t NextU64() { return m_engine(); }

    // Uniform on [0, 1) with 53 bits of resolution.
    double Uniform01();

    // Uniform on {0, ..., bound - 1}; bound must be >= 1. Rejection sampling,
    // so a call may consume more than one engine output but is one draw.
    std::uint64_t UniformBelow(std::uint64_t bound);

    // Exponential with the given rate (> 0).
    double Exponential(double rate);

  private:
    std::mt19937_64 m_engine;
};

std::uint64_t SplitMix64(std::uint64_t x) noexcept;

enum class Substream : std::uint64_t
{
    Arrivals = 1,
    Backoff = 2,
};

// Seed for one node's substream: SplitMix64 applied to the master seed,
// folded with the node id and the stream tag. Changing this changes every
// reproduced number.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t node, Substream stream) noexcept;

} // namespace mprsim

#endif
