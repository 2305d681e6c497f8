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

#ifndef MPRSIM_SIM_CONFIG_HPP
#define MPRSIM_SIM_CONFIG_HPP

#include "mprsim/mac.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace mprsim
{

// Total offered payload over single-stream capacity.
struct OfferedLoad
{
    double u = 0.0;
    bool operator==(const OfferedLoad&) const = default;
};

// Poisson rate per station.
struct ArrivalRate
{
    double pps = 0.0;
    bool operator==(const ArrivalRate&) const = default;
};

using TrafficSource = std::variant<OfferedLoad, ArrivalRate>;

struct SimConfig
{
    std::uint32_t n_stations = 30;
    std::uint32_t mpr_k = 4;
    BackoffPolicy policy = BackoffPolicy::Adaptive(4, 3);
    MacParams mac;
    TrafficSource traffic = OfferedLoad{0.5};
    // Every station always holds a packet; arrivals are not generated.
    bool saturated = false;
    Slot duration_slots = 2'000'000;
    // Unset means 10% of the duration.
    std::optional<Slot> warmup_slots;
    std::uint64_t seed = 1;

    // Throws ConfigError naming the offending field.
    void Validate() const;

    Slot WarmupSlots() const;
    double ArrivalRatePps() const;
};

// lambda = u * bitrate / (n * payload)
double OfferedTrafficToRate(double u, std::uint32_t n_stations, const MacParams& mac);

// Canonical "key=value;..." text of every field except the seed.
std::string Fingerprint(const SimConfig& config);

} // namespace mprsim

#endif
