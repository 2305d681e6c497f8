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

#ifndef MPRSIM_MAC_HPP
#define MPRSIM_MAC_HPP

#include "mprsim/rng.hpp"

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <variant>

namespace mprsim
{

using Slot = std::int64_t;

struct ConventionalDcf
{
    bool operator==(const ConventionalDcf&) const = default;
};

// Counter decrements by one whenever at most lt transmissions are ongoing.
struct ThresholdBackoff
{
    std::uint32_t lt;

    bool operator==(const ThresholdBackoff&) const = default;
};

// Counter decrements by (k - i) whenever i <= kt transmissions are ongoing.
struct AdaptiveBackoff
{
    std::uint32_t k;
    std::uint32_t kt;

    bool operator==(const AdaptiveBackoff&) const = default;
};

class BackoffPolicy
{
  public:
    using Kind = std::variant<ConventionalDcf, ThresholdBackoff, AdaptiveBackoff>;

    static BackoffPolicy Dcf() { return BackoffPolicy(ConventionalDcf{}); }
    static BackoffPolicy Threshold(std::uint32_t lt) { return BackoffPolicy(ThresholdBackoff{lt}); }
    // Throws ConfigError unless kt < k.
    static BackoffPolicy Adaptive(std::uint32_t k, std::uint32_t kt);

    const Kind& Get() const noexcept { return m_kind; }
    std::string Name() const;

    bool operator==(const BackoffPolicy&) const = default;

  private:
    explicit BackoffPolicy(Kind kind)
        : m_kind(kind)
    {
    }

    Kind m_kind;
};

// d(i): how far the backoff counter moves in a slot with `ongoing` transmissions.
std::uint32_t DecrementAmount(const BackoffPolicy& policy, std::uint32_t ongoing) noexcept;

// Whether the backoff countdown treats a slot with `ongoing` transmissions
// as idle.
bool IsIdleSlot(const BackoffPolicy& policy, std::uint32_t ongoing) noexcept;

// Whether a slot counts towards DIFS. Only the adaptive policy relaxes this
// (ongoing <= kt); DCF and the threshold policy need a silent channel.
bool IsDifsIdleSlot(const BackoffPolicy& policy, std::uint32_t ongoing) noexcept;

struct MacParams
{
    std::uint32_t cw_min = 128;
    std::uint32_t max_backoff_stage = 5;
    std::uint32_t retry_limit = 4;
    double slot_us = 50.0;
    double difs_us = 128.0;
    std::uint64_t payload_bits = 8184;
    std::uint64_t mac_header_bits = 272;
    std::uint64_t phy_header_bits = 128;
    double bitrate_bps = 1e6;

    // Throws ConfigError naming the offending field.
    void Validate() const;

    bool operator==(const MacParams&) const = default;
};

// CW_min * 2^min(stage, m)
std::uint64_t ContentionWindow(std::uint32_t stage, const MacParams& params);

// Uniform on [0, ContentionWindow(stage) - 1]; one draw from rng.
std::int64_t DrawBackoff(std::uint32_t stage, const MacParams& params, Rng& rng);

struct Airtime
{
    double us;
    Slot slots;
};

Airtime FrameAirtime(const MacParams& params);

// ceil(difs / slot), never below one slot.
Slot DifsSlots(const MacParams& params);

struct Packet
{
    double arrival_us = 0.0;
    double service_start_us = 0.0;
};

namespace phase
{
struct Idle
{
};

// Waiting for difs_slots idle slots. An empty counter marks a packet that
// still has the right to transmit right after DIFS, without backoff.
struct Sensing
{
    std::uint32_t idle_slots = 0;
    std::optional<std::int64_t> counter;
};

struct CountingDown
{
    std::int64_t counter = 0;
};

struct Transmitting
{
    Slot start_slot = 0;
    Slot end_slot = 0;
    bool collided = false;
};
} // namespace phase

using Phase = std::variant<phase::Idle, phase::Sensing, phase::CountingDown, phase::Transmitting>;

struct NodeState
{
    std::uint32_t id = 0;
    Phase phase = phase::Idle{};
    std::uint32_t backoff_stage = 0;
    std::uint32_t retries_used = 0;
    std::deque<Packet> queue;
    // Saturated traffic: the queue is refilled the moment it empties.
    bool always_backlogged = false;
    // Packets that ever entered the queue.
    std::uint64_t enqueued = 0;

    bool IsTransmitting() const { return std::holds_alternative<phase::Transmitting>(phase); }
};

enum class TxOutcome
{
    Delivered,
    Retrying,
    Dropped,
};

struct TxResult
{
    TxOutcome outcome;
    // The head-of-queue packet the attempt belonged to.
    Packet packet;
};

// Applies the outcome of a finished transmission. On Delivered or Dropped the
// next queued packet (if any) becomes head of queue at now_us and draws a
// stage-0 backoff; an empty queue leaves the node Idle. Throws StateError
// if the node is not transmitting.
TxResult OnTransmissionResult(NodeState& node,
                              bool success,
                              const MacParams& params,
                              Rng& rng,
                              double now_us);

const char* ToString(TxOutcome outcome) noexcept;

} // namespace mprsim

#endif
