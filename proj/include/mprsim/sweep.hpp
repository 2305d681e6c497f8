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

#ifndef MPRSIM_SWEEP_HPP
#define MPRSIM_SWEEP_HPP

#include "mprsim/config.hpp"
#include "mprsim/metrics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mprsim
{

enum class SweepParameter
{
    OfferedLoad,
    Stations,
    MprK,
    Threshold,
    CwMin,
};

// Accepts u, n, n_stations, k, mpr_k, threshold, cwmin, cw_min.
std::optional<SweepParameter> ParseSweepParameter(std::string_view name);
std::string ToString(SweepParameter parameter);

// Replication r at sweep index s runs with seed base + s * stride + r.
inline constexpr std::uint64_t kSweepSeedStride = 10007;

struct SweepSpec
{
    ConfigSettings base;
    SweepParameter parameter = SweepParameter::OfferedLoad;
    std::vector<double> values;
    std::uint32_t replications = 1;
};

struct SweepRow
{
    double value = 0.0;
    ReplicationSummary summary;
    std::vector<MetricsReport> reports;
};

// Settings for one sweep point; ConfigError when the value does not fit the
// parameter or the base policy has no threshold to sweep.
ConfigSettings SweepPoint(const SweepSpec& spec, std::size_t index);

// Runs replications seed, seed+1, ... of one configuration. Independent runs
// may execute on `threads` workers (0 picks the hardware count); the result
// order never depends on scheduling.
std::vector<MetricsReport> RunReplications(const ConfigSettings& settings,
                                           std::uint32_t replications,
                                           unsigned threads = 0);

// Every config is built before any simulation starts, so an invalid spec
// fails without partial output.
std::vector<SweepRow> RunSweep(const SweepSpec& spec, unsigned threads = 0);

// Header: swept_value,throughput_mean,throughput_std,delay_mean_us,
// delay_std_us,eta_mean,eta_std,dropped_mean,replications
std::string SweepCsv(std::span<const SweepRow> rows);
nlohmann::json SweepJson(std::span<const SweepRow> rows, SweepParameter parameter);

nlohmann::json ToJson(const MetricsReport& report, bool per_node = true);
nlohmann::json ToJson(const ReplicationSummary& summary);

} // namespace mprsim

#endif
