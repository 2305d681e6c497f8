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

#ifndef MPRSIM_METRICS_HPP
#define MPRSIM_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mprsim
{

// Delivered payload over single-stream capacity for the window; 0 .. K.
double NormalizedThroughput(double delivered_payload_bits, double sim_time_us, double bitrate_bps);

// Head-of-queue service start to delivery or drop.
double MacDelay(double service_start_us, double terminal_us);

// delivered / attempts, or 1 when nothing was attempted.
double TransmissionEfficiency(std::uint64_t delivered, std::uint64_t attempts);

// Counters for one node (or the whole network) over the measurement window.
struct NodeMetrics
{
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t attempts = 0;
    double delivered_payload_bits = 0.0;
    double delay_sum_us = 0.0;
    std::uint64_t delay_samples = 0;

    double normalized_throughput = 0.0;
    double mean_mac_delay_us = 0.0;
    double transmission_efficiency = 1.0;

    // Fills the three derived fields from the counters.
    void Finalize(double sim_time_us, double bitrate_bps);
    NodeMetrics& operator+=(const NodeMetrics& other);
};

// Whole-run bookkeeping, warm-up included.
struct RunTotals
{
    std::uint64_t enqueued = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t still_queued = 0;

    bool Conserved() const noexcept { return enqueued == delivered + dropped + still_queued; }
    RunTotals& operator+=(const RunTotals& other);
};

struct MetricsReport
{
    double normalized_throughput = 0.0;
    double mean_mac_delay_us = 0.0;
    double transmission_efficiency = 1.0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t attempts = 0;
    double sim_time_us = 0.0;
    std::vector<NodeMetrics> per_node;

    RunTotals totals;
    std::vector<RunTotals> per_node_totals;

    std::uint64_t seed = 0;
    std::uint32_t mpr_k = 1;
    // Canonical config text without the seed; replications are only
    // aggregated when these match.
    std::string config_fingerprint;
};

// Flat "key = value" lines, aggregate fields only.
std::string ToKeyValue(const MetricsReport& report);

struct MeanStd
{
    double mean = 0.0;
    double std = 0.0;
};

struct ReplicationSummary
{
    MeanStd throughput;
    MeanStd delay_us;
    MeanStd eta;
    MeanStd dropped;
    MeanStd delivered;
    MeanStd attempts;
    std::size_t replications = 0;
};

// Sample mean and standard deviation (n - 1) over values, independent of
// their order.
MeanStd Describe(std::span<const double> values);

// Throws ConfigMismatchError if fingerprints differ, ConfigError if empty.
ReplicationSummary AggregateReplications(std::span<const MetricsReport> reports);

} // namespace mprsim

#endif
