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

#include "mprsim/metrics.hpp"

#include "mprsim/errors.hpp"
#include "mprsim/format.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mprsim
{

double
NormalizedThroughput(double delivered_payload_bits, double sim_time_us, double bitrate_bps)
{
    if (!(sim_time_us > 0))
    {
        throw ConfigError("throughput window must be positive");
    }
    return delivered_payload_bits / (bitrate_bps * sim_time_us / 1e6);
}

double
MacDelay(double service_start_us, double terminal_us)
{
    return terminal_us - service_start_us;
}

double
TransmissionEfficiency(std::uint64_t delivered, std::uint64_t attempts)
{
    if (attempts == 0)
    {
        return 1.0;
    }
    return static_cast<double>(delivered) / static_cast<double>(attempts);
}

void
NodeMetrics::Finalize(double sim_time_us, double bitrate_bps)
{
    normalized_throughput = NormalizedThroughput(delivered_payload_bits, sim_time_us, bitrate_bps);
    mean_mac_delay_us = delay_samples == 0 ? 0.0 : delay_sum_us / static_cast<double>(delay_samples);
    transmission_efficiency = TransmissionEfficiency(delivered, attempts);
}

NodeMetrics&
NodeMetrics::operator+=(const NodeMetrics& other)
{
    delivered += other.delivered;
    dropped += other.dropped;
    attempts += other.attempts;
    delivered_payload_bits += other.delivered_payload_bits;
    delay_sum_us += other.delay_sum_us;
    delay_samples += other.delay_samples;
    return *this;
}

RunTotals&
RunTotals::operator+=(const RunTotals& other)
{
    enqueued += other.enqueued;
    delivered += other.delivered;
    dropped += other.dropped;
    still_queued += other.still_queued;
    return *this;
}

std::string
ToKeyValue(const MetricsReport& report)
{
    std::ostringstream os;
    os << "normalized_throughput = " << FormatNumber(report.normalized_throughput) << '\n'
       << "mean_mac_delay_us = " << FormatNumber(report.mean_mac_delay_us) << '\n'
       << "transmission_efficiency = " << FormatNumber(report.transmission_efficiency) << '\n'
       << "delivered = " << report.delivered << '\n'
       << "dropped = " << report.dropped << '\n'
       << "attempts = " << report.attempts << '\n'
       << "sim_time_us = " << FormatNumber(report.sim_time_us) << '\n'
       << "seed = " << report.seed << '\n';
    return os.str();
}

MeanStd
Describe(std::span<const double> values)
{
    if (values.empty())
    {
        return {};
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double v : sorted)
    {
        sum += v;
    }
    const double n = static_cast<double>(sorted.size());
    const double mean = sum / n;
    if (sorted.size() < 2)
    {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double v : sorted)
    {
        ss += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(ss / (n - 1.0))};
}

ReplicationSummary
AggregateReplications(std::span<const MetricsReport> reports)
{
    if (reports.empty())
    {
        throw ConfigError("aggregation needs at least one report");
    }
    for (const auto& r : reports)
    {
        if (r.config_fingerprint != reports.front().config_fingerprint)
        {
            throw ConfigMismatchError("replications come from different configurations");
        }
    }
    auto column = [&](auto field) {
        std::vector<double> values;
        values.reserve(reports.size());
        for (const auto& r : reports)
        {
            values.push_back(static_cast<double>(field(r)));
        }
        return Describe(values);
    };
    ReplicationSummary s;
    s.throughput = column([](const MetricsReport& r) { return r.normalized_throughput; });
    s.delay_us = column([](const MetricsReport& r) { return r.mean_mac_delay_us; });
    s.eta = column([](const MetricsReport& r) { return r.transmission_efficiency; });
    s.dropped = column([](const MetricsReport& r) { return r.dropped; });
    s.delivered = column([](const MetricsReport& r) { return r.delivered; });
    s.attempts = column([](const MetricsReport& r) { return r.attempts; });
    s.replications = reports.size();
    return s;
}

} // namespace mprsim
