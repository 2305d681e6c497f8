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

#include "mprsim/engine.hpp"

#include "mprsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mprsim
{

std::uint32_t
OngoingCount(std::span<const TransmissionRecord> active, Slot slot, std::optional<std::uint32_t> observer)
{
    std::uint32_t count = 0;
    for (const auto& record : active)
    {
        if (record.Overlaps(slot) && record.owner != observer)
        {
            ++count;
        }
    }
    return count;
}

void
ResolveCollisions(std::span<TransmissionRecord> active, Slot slot, std::uint32_t mpr_k)
{
    if (OngoingCount(active, slot) <= mpr_k)
    {
        return;
    }
    for (auto& record : active)
    {
        if (record.Overlaps(slot))
        {
            record.collided = true;
        }
    }
}

ArrivalStream::ArrivalStream(double rate_pps, double horizon_us, Rng rng)
    : m_rate_pps(rate_pps),
      m_horizon_us(horizon_us),
      m_rng(rng)
{
    Advance();
}

void
ArrivalStream::Pop()
{
    Advance();
}

void
ArrivalStream::Advance()
{
    m_next.reset();
    if (m_rate_pps <= 0.0)
    {
        return;
    }
    m_clock_us += m_rng.Exponential(m_rate_pps) * 1e6;
    if (m_clock_us <= m_horizon_us)
    {
        m_next = m_clock_us;
    }
}

std::vector<double>
GenerateArrivals(double rate_pps, double horizon_us, Rng& rng)
{
    std::vector<double> times;
    if (rate_pps <= 0.0)
    {
        return times;
    }
    double clock = 0.0;
    for (;;)
    {
        clock += rng.Exponential(rate_pps) * 1e6;
        if (clock > horizon_us)
        {
            return times;
        }
        times.push_back(clock);
    }
}

std::string
PhaseCode(const Phase& phase)
{
    struct
    {
        std::string operator()(const phase::Idle&) const { return "I"; }
        std::string operator()(const phase::Sensing& s) const
        {
            if (!s.counter)
            {
                return "S" + std::to_string(s.idle_slots);
            }
            return "B" + std::to_string(s.idle_slots) + "/" + std::to_string(*s.counter);
        }
        std::string operator()(const phase::CountingDown& c) const
        {
            return "C" + std::to_string(c.counter);
        }
        std::string operator()(const phase::Transmitting& t) const
        {
            return t.collided ? "X" : "T";
        }
    } visitor;
    return std::visit(visitor, phase);
}

std::string
FormatTraceLine(const SlotTrace& trace)
{
    std::string line = std::to_string(trace.slot) + " " + std::to_string(trace.ongoing);
    for (const auto& p : trace.phases)
    {
        line += ' ';
        line += PhaseCode(p);
    }
    return line;
}

Engine::Engine(SimConfig config)
    : m_config(std::move(config))
{
    m_config.Validate();
    m_airtime_slots = FrameAirtime(m_config.mac).slots;
    m_difs_slots = DifsSlots(m_config.mac);
    m_warmup_slots = m_config.WarmupSlots();
    m_horizon_us = static_cast<double>(m_config.duration_slots) * m_config.mac.slot_us;

    const std::uint32_t n = m_config.n_stations;
    const double rate = m_config.saturated ? 0.0 : m_config.ArrivalRatePps();
    m_nodes.resize(n);
    m_scripted.resize(n);
    m_window.resize(n);
    m_totals.resize(n);
    m_arrivals.reserve(n);
    m_backoff_rng.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
    {
        m_arrivals.emplace_back(rate,
                                m_horizon_us,
                                Rng(DeriveSeed(m_config.seed, i, Substream::Arrivals)));
        m_backoff_rng.emplace_back(DeriveSeed(m_config.seed, i, Substream::Backoff));
        auto& node = m_nodes[i];
        node.id = i;
        if (m_config.saturated)
        {
            node.always_backlogged = true;
            node.queue.push_back(Packet{0.0, 0.0});
            node.enqueued = 1;
            node.phase = phase::Sensing{};
        }
    }
}

void
Engine::ScheduleArrival(std::uint32_t node, double time_us)
{
    auto& script = m_scripted.at(node);
    script.insert(std::upper_bound(script.begin(), script.end(), time_us), time_us);
}

void
Engine::InjectTransmission(const TransmissionRecord& record)
{
    auto& node = m_nodes.at(record.owner);
    if (!node.IsTransmitting())
    {
        throw StateError("injected transmission for a node that is not transmitting");
    }
    m_active.push_back(record);
}

std::optional<double>
Engine::NextArrival(std::uint32_t node) const
{
    auto next = m_arrivals[node].Peek();
    const auto& script = m_scripted[node];
    if (!script.empty() && (!next || script.front() < *next))
    {
        next = script.front();
    }
    return next;
}

void
Engine::DeliverArrivals(NodeState& node, Slot slot)
{
    const double boundary_us = static_cast<double>(slot) * m_config.mac.slot_us;
    for (;;)
    {
        const auto next = NextArrival(node.id);
        if (!next || *next > boundary_us)
        {
            return;
        }
        auto& script = m_scripted[node.id];
        if (!script.empty() && script.front() == *next)
        {
            script.pop_front();
        }
        else
        {
            m_arrivals[node.id].Pop();
        }

        node.queue.push_back(Packet{*next, 0.0});
        ++node.enqueued;
        if (std::holds_alternative<phase::Idle>(node.phase))
        {
            node.queue.front().service_start_us = boundary_us;
            node.phase = phase::Sensing{};
        }
    }
}

void
Engine::FinishTransmissions(Slot slot)
{
    const double now_us = static_cast<double>(slot) * m_config.mac.slot_us;
    const bool counted = slot > m_warmup_slots;
    for (const auto& record : m_active)
    {
        if (record.end_slot != slot)
        {
            continue;
        }
        auto& node = m_nodes[record.owner];
        std::get<phase::Transmitting>(node.phase).collided = record.collided;
        const TxResult result = OnTransmissionResult(node,
                                                     !record.collided,
                                                     m_config.mac,
                                                     m_backoff_rng[record.owner],
                                                     now_us);
        auto& totals = m_totals[record.owner];
        auto& window = m_window[record.owner];
        if (counted)
        {
            ++window.attempts;
        }
        if (result.outcome == TxOutcome::Retrying)
        {
            continue;
        }
        const double delay = MacDelay(result.packet.service_start_us, now_us);
        if (result.outcome == TxOutcome::Delivered)
        {
            ++totals.delivered;
            if (counted)
            {
                ++window.delivered;
                window.delivered_payload_bits += static_cast<double>(m_config.mac.payload_bits);
            }
        }
        else
        {
            ++totals.dropped;
            if (counted)
            {
                ++window.dropped;
            }
        }
        if (counted)
        {
            window.delay_sum_us += delay;
            ++window.delay_samples;
        }
    }
    std::erase_if(m_active, [slot](const TransmissionRecord& r) { return r.end_slot == slot; });
}

void
Engine::StartTransmission(NodeState& node, Slot slot)
{
    const Slot start = slot + 1;
    const Slot end = start + m_airtime_slots;
    node.phase = phase::Transmitting{start, end, false};
    m_active.push_back(TransmissionRecord{node.id, start, end, false, node.retries_used});
}

bool
Engine::UpdateWaitingNode(NodeState& node, Slot slot, std::uint32_t ongoing)
{
    const auto& policy = m_config.policy;
    if (auto* sensing = std::get_if<phase::Sensing>(&node.phase))
    {
        if (!IsDifsIdleSlot(policy, ongoing))
        {
            sensing->idle_slots = 0;
            if (!sensing->counter)
            {
                sensing->counter =
                    DrawBackoff(node.backoff_stage, m_config.mac, m_backoff_rng[node.id]);
            }
            return false;
        }
        if (++sensing->idle_slots < m_difs_slots)
        {
            return false;
        }
        if (!sensing->counter || *sensing->counter <= 0)
        {
            StartTransmission(node, slot);
            return true;
        }
        node.phase = phase::CountingDown{*sensing->counter};
        return false;
    }

    if (auto* counting = std::get_if<phase::CountingDown>(&node.phase))
    {
        if (!IsIdleSlot(policy, ongoing))
        {
            // Frozen; DIFS must be observed again before the countdown resumes.
            node.phase = phase::Sensing{0, counting->counter};
            return false;
        }
        counting->counter -= DecrementAmount(policy, ongoing);
        if (counting->counter <= 0)
        {
            StartTransmission(node, slot);
            return true;
        }
    }
    return false;
}

void
Engine::SkipQuietSlots()
{
    if (m_trace || !m_active.empty())
    {
        return;
    }
    std::optional<double> earliest;
    for (const auto& node : m_nodes)
    {
        if (!std::holds_alternative<phase::Idle>(node.phase))
        {
            return;
        }
        const auto next = NextArrival(node.id);
        if (next && (!earliest || *next < *earliest))
        {
            earliest = next;
        }
    }
    Slot target = m_config.duration_slots + 1;
    if (earliest)
    {
        // One slot early so the regular boundary comparison decides the slot.
        target = static_cast<Slot>(std::ceil(*earliest / m_config.mac.slot_us)) - 1;
    }
    m_slot = std::max(m_slot, std::min(target, m_config.duration_slots + 1));
}

void
Engine::Step()
{
    const Slot slot = m_slot;
    for (auto& node : m_nodes)
    {
        DeliverArrivals(node, slot);
    }

    FinishTransmissions(slot);

    // Only stations that are not transmitting observe the channel, so the
    // half-duplex exclusion never removes anything here.
    const std::uint32_t ongoing = OngoingCount(m_active, slot);
    bool started = false;
    for (auto& node : m_nodes)
    {
        if (node.IsTransmitting() || std::holds_alternative<phase::Idle>(node.phase))
        {
            continue;
        }
        started |= UpdateWaitingNode(node, slot, ongoing);
    }

    if (started)
    {
        ResolveCollisions(m_active, slot + 1, m_config.mpr_k);
        for (const auto& record : m_active)
        {
            if (record.collided)
            {
                std::get<phase::Transmitting>(m_nodes[record.owner].phase).collided = true;
            }
        }
    }

    if (m_trace)
    {
        SlotTrace trace{slot, ongoing, {}};
        trace.phases.reserve(m_nodes.size());
        for (const auto& node : m_nodes)
        {
            trace.phases.push_back(node.phase);
        }
        m_trace(trace);
    }
    ++m_slot;
}

void
Engine::Run()
{
    while (!Finished())
    {
        SkipQuietSlots();
        if (Finished())
        {
            break;
        }
        Step();
    }
}

MetricsReport
Engine::Report() const
{
    MetricsReport report;
    const double window_us =
        static_cast<double>(m_config.duration_slots - m_warmup_slots) * m_config.mac.slot_us;
    NodeMetrics all;
    report.per_node.reserve(m_nodes.size());
    report.per_node_totals.reserve(m_nodes.size());
    for (std::size_t i = 0; i < m_nodes.size(); ++i)
    {
        NodeMetrics node = m_window[i];
        node.Finalize(window_us, m_config.mac.bitrate_bps);
        all += node;
        report.per_node.push_back(node);

        RunTotals totals = m_totals[i];
        totals.enqueued = m_nodes[i].enqueued;
        totals.still_queued = m_nodes[i].queue.size();
        report.totals += totals;
        report.per_node_totals.push_back(totals);
    }
    all.Finalize(window_us, m_config.mac.bitrate_bps);
    report.normalized_throughput = all.normalized_throughput;
    report.mean_mac_delay_us = all.mean_mac_delay_us;
    report.transmission_efficiency = all.transmission_efficiency;
    report.delivered = all.delivered;
    report.dropped = all.dropped;
    report.attempts = all.attempts;
    report.sim_time_us = window_us;
    report.seed = m_config.seed;
    report.mpr_k = m_config.mpr_k;
    report.config_fingerprint = Fingerprint(m_config);
    return report;
}

MetricsReport
RunSimulation(const SimConfig& config, std::ostream* trace)
{
    Engine engine(config);
    if (trace != nullptr)
    {
        engine.SetTraceSink([trace](const SlotTrace& line) { *trace << FormatTraceLine(line) << '\n'; });
    }
    engine.Run();
    return engine.Report();
}

bool
ConservationHolds(const MetricsReport& report) noexcept
{
    RunTotals sum;
    for (const auto& node : report.per_node_totals)
    {
        if (!node.Conserved())
        {
            return false;
        }
        sum += node;
    }
    return report.totals.Conserved() && sum.enqueued == report.totals.enqueued &&
           sum.delivered == report.totals.delivered && sum.dropped == report.totals.dropped;
}

} // namespace mprsim
