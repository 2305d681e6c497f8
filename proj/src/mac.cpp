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

#include "mprsim/mac.hpp"

#include "mprsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mprsim
{

namespace
{
// Absorbs rounding in exact multiples such as 400 us / 50 us.
constexpr double kCeilSlack = 1e-9;

Slot
CeilSlots(double us, double slot_us)
{
    return static_cast<Slot>(std::ceil(us / slot_us - kCeilSlack));
}
} // namespace

BackoffPolicy
BackoffPolicy::Adaptive(std::uint32_t k, std::uint32_t kt)
{
    if (kt >= k)
    {
        throw ConfigError("adaptive policy requires kt < k (kt=" + std::to_string(kt) +
                          ", k=" + std::to_string(k) + ")");
    }
    return BackoffPolicy(AdaptiveBackoff{k, kt});
}

std::string
BackoffPolicy::Name() const
{
    struct
    {
        std::string operator()(ConventionalDcf) const { return "dcf"; }
        std::string operator()(ThresholdBackoff) const { return "threshold"; }
        std::string operator()(AdaptiveBackoff) const { return "adaptive"; }
    } visitor;
    return std::visit(visitor, m_kind);
}

std::uint32_t
DecrementAmount(const BackoffPolicy& policy, std::uint32_t ongoing) noexcept
{
    struct
    {
        std::uint32_t i;
        std::uint32_t operator()(ConventionalDcf) const { return i == 0 ? 1 : 0; }
        std::uint32_t operator()(ThresholdBackoff p) const { return i <= p.lt ? 1 : 0; }
        std::uint32_t operator()(AdaptiveBackoff p) const { return i <= p.kt ? p.k - i : 0; }
    } visitor{ongoing};
    return std::visit(visitor, policy.Get());
}

bool
IsIdleSlot(const BackoffPolicy& policy, std::uint32_t ongoing) noexcept
{
    struct
    {
        std::uint32_t i;
        bool operator()(ConventionalDcf) const { return i == 0; }
        bool operator()(ThresholdBackoff p) const { return i <= p.lt; }
        bool operator()(AdaptiveBackoff p) const { return i <= p.kt; }
    } visitor{ongoing};
    return std::visit(visitor, policy.Get());
}

bool
IsDifsIdleSlot(const BackoffPolicy& policy, std::uint32_t ongoing) noexcept
{
    if (const auto* adaptive = std::get_if<AdaptiveBackoff>(&policy.Get()))
    {
        return ongoing <= adaptive->kt;
    }
    return ongoing == 0;
}

void
MacParams::Validate() const
{
    auto require = [](bool ok, const char* field, const char* what) {
        if (!ok)
        {
            throw ConfigError(std::string("field '") + field + "': " + what);
        }
    };
    require(cw_min >= 1, "cwmin", "must be >= 1");
    require(max_backoff_stage <= 30, "m", "must be <= 30");
    require(std::isfinite(slot_us) && slot_us > 0, "slot-us", "must be > 0");
    require(std::isfinite(difs_us) && difs_us > 0, "difs-us", "must be > 0");
    require(std::isfinite(bitrate_bps) && bitrate_bps > 0, "bitrate", "must be > 0");
    require(payload_bits + mac_header_bits + phy_header_bits > 0,
            "payload-bits",
            "frame must carry at least one bit");
}

std::uint64_t
ContentionWindow(std::uint32_t stage, const MacParams& params)
{
    return std::uint64_t(params.cw_min) << std::min(stage, params.max_backoff_stage);
}

std::int64_t
DrawBackoff(std::uint32_t stage, const MacParams& params, Rng& rng)
{
    return static_cast<std::int64_t>(rng.UniformBelow(ContentionWindow(stage, params)));
}

Airtime
FrameAirtime(const MacParams& params)
{
    const auto bits = params.payload_bits + params.mac_header_bits + params.phy_header_bits;
    const double us = static_cast<double>(bits) * 1e6 / params.bitrate_bps;
    return {us, std::max<Slot>(1, CeilSlots(us, params.slot_us))};
}

Slot
DifsSlots(const MacParams& params)
{
    return std::max<Slot>(1, CeilSlots(params.difs_us, params.slot_us));
}

TxResult
OnTransmissionResult(NodeState& node, bool success, const MacParams& params, Rng& rng, double now_us)
{
    if (!node.IsTransmitting())
    {
        throw StateError("node " + std::to_string(node.id) + " is not transmitting");
    }
    if (node.queue.empty())
    {
        throw StateError("node " + std::to_string(node.id) + " transmits with an empty queue");
    }

    TxResult result{TxOutcome::Delivered, node.queue.front()};
    if (!success && node.retries_used < params.retry_limit)
    {
        ++node.retries_used;
        node.backoff_stage = std::min(node.backoff_stage + 1, params.max_backoff_stage);
        node.phase = phase::Sensing{0, DrawBackoff(node.backoff_stage, params, rng)};
        result.outcome = TxOutcome::Retrying;
        return result;
    }

    result.outcome = success ? TxOutcome::Delivered : TxOutcome::Dropped;
    node.queue.pop_front();
    node.backoff_stage = 0;
    node.retries_used = 0;
    if (node.queue.empty() && node.always_backlogged)
    {
        node.queue.push_back(Packet{now_us, now_us});
        ++node.enqueued;
    }
    if (node.queue.empty())
    {
        node.phase = phase::Idle{};
    }
    else
    {
        node.queue.front().service_start_us = now_us;
        node.phase = phase::Sensing{0, DrawBackoff(0, params, rng)};
    }
    return result;
}

const char*
ToString(TxOutcome outcome) noexcept
{
    switch (outcome)
    {
    case TxOutcome::Delivered:
        return "Delivered";
    case TxOutcome::Retrying:
        return "Retrying";
    case TxOutcome::Dropped:
        return "Dropped";
    }
    return "?";
}

} // namespace mprsim
