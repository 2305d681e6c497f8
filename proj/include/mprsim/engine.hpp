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

#ifndef MPRSIM_ENGINE_HPP
#define MPRSIM_ENGINE_HPP

#include "mprsim/mac.hpp"
#include "mprsim/metrics.hpp"
#include "mprsim/rng.hpp"
#include "mprsim/sim_config.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace mprsim
{

struct TransmissionRecord
{
    std::uint32_t owner = 0;
    Slot start_slot = 0;
    // First slot no longer occupied.
    Slot end_slot = 0;
    bool collided = false;
    std::uint32_t attempt_index = 0;

    bool Overlaps(Slot slot) const noexcept { return start_slot <= slot && slot < end_slot; }
};

// Transmissions on the air during `slot`, not counting the observer's own
// (a half-duplex node cannot hear while it sends).
std::uint32_t OngoingCount(std::span<const TransmissionRecord> active,
                           Slot slot,
                           std::optional<std::uint32_t> observer = std::nullopt);

// k-MPR collision rule: more than k frames on the air in `slot` dooms all of
// them. Marks are never cleared.
void ResolveCollisions(std::span<TransmissionRecord> active, Slot slot, std::uint32_t mpr_k);

// Poisson arrivals for one station, generated lazily up to a horizon.
class ArrivalStream
{
  public:
    ArrivalStream(double rate_pps, double horizon_us, Rng rng);

    std::optional<double> Peek() const { return m_next; }
    void Pop();

  private:
    void Advance();

    double m_rate_pps;
    double m_horizon_us;
    Rng m_rng;
    double m_clock_us = 0.0;
    std::optional<double> m_next;
};

// Arrival instants in microseconds on [0, horizon_us]; empty for rate 0.
std::vector<double> GenerateArrivals(double rate_pps, double horizon_us, Rng& rng);

// Per-slot snapshot, taken after the slot's updates.
struct SlotTrace
{
    Slot slot = 0;
    std::uint32_t ongoing = 0;
    std::vector<Phase> phases;
};

// I idle, S<n> fresh packet sensing, B<n>/<c> sensing with counter c,
// C<c> counting down, T transmitting, X transmitting and collided.
std::string PhaseCode(const Phase& phase);

// "<slot> <ongoing> <code> <code> ..."
std::string FormatTraceLine(const SlotTrace& trace);

/**
 * Slotted simulation of N stations sharing one k-MPR channel.
 *
 * Each Step() handles one slot s in four stages:
 *  1. arrivals stamped in ((s-1)*slot, s*slot] join the station queues;
 *  2. transmissions whose end_slot is s finish and report their outcome;
 *  3. every waiting station observes the ongoing count for slot s and
 *     updates its DIFS credit or backoff counter; stations whose counter
 *     reaches zero or below, or that finish DIFS with a fresh packet,
 *     transmit from slot s + 1. A busy slot during the countdown freezes
 *     the counter and DIFS has to be observed again;
 *  4. the k-MPR rule is applied to slot s + 1.
 * Statistics cover events completing in slots (warmup, duration].
 */
class Engine
{
  public:
    explicit Engine(SimConfig config);

    using TraceSink = std::function<void(const SlotTrace&)>;
    void SetTraceSink(TraceSink sink) { m_trace = std::move(sink); }

    // Extra arrival on top of the Poisson stream.
    void ScheduleArrival(std::uint32_t node, double time_us);

    void Step();
    // Steps through slot duration_slots inclusive.
    void Run();
    bool Finished() const noexcept { return m_slot > m_config.duration_slots; }

    Slot CurrentSlot() const noexcept { return m_slot; }
    const SimConfig& Config() const noexcept { return m_config; }
    Slot AirtimeSlots() const noexcept { return m_airtime_slots; }
    Slot DifsSlotCount() const noexcept { return m_difs_slots; }

    const std::vector<NodeState>& Nodes() const noexcept { return m_nodes; }
    NodeState& MutableNode(std::uint32_t id) { return m_nodes.at(id); }
    const std::vector<TransmissionRecord>& Active() const noexcept { return m_active; }
    // Puts a transmission on the air; the owner must be in Transmitting.
    void InjectTransmission(const TransmissionRecord& record);

    MetricsReport Report() const;

  private:
    void DeliverArrivals(NodeState& node, Slot slot);
    void FinishTransmissions(Slot slot);
    bool UpdateWaitingNode(NodeState& node, Slot slot, std::uint32_t ongoing);
    void StartTransmission(NodeState& node, Slot slot);
    void SkipQuietSlots();
    std::optional<double> NextArrival(std::uint32_t node) const;

    SimConfig m_config;
    Slot m_airtime_slots;
    Slot m_difs_slots;
    Slot m_warmup_slots;
    double m_horizon_us;
    Slot m_slot = 0;

    std::vector<NodeState> m_nodes;
    std::vector<ArrivalStream> m_arrivals;
    std::vector<std::deque<double>> m_scripted;
    std::vector<Rng> m_backoff_rng;
    std::vector<TransmissionRecord> m_active;
    std::vector<NodeMetrics> m_window;
    std::vector<RunTotals> m_totals;

    TraceSink m_trace;
};

// Validates the config (ConfigError), then runs it to completion. With a
// trace stream, every slot is written as one FormatTraceLine line.
MetricsReport RunSimulation(const SimConfig& config, std::ostream* trace = nullptr);

// Packets that entered a queue were delivered, dropped, or are still queued,
// per node and in aggregate.
bool ConservationHolds(const MetricsReport& report) noexcept;

} // namespace mprsim

#endif
