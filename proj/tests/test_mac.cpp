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

#include "mprsim/errors.hpp"
#include "mprsim/mac.hpp"

#include <doctest.h>

#include <vector>

using namespace mprsim;

namespace
{

NodeState
TransmittingNode(std::size_t packets)
{
    NodeState node;
    node.phase = phase::Transmitting{10, 182, false};
    for (std::size_t i = 0; i < packets; ++i)
    {
        node.queue.push_back(Packet{100.0 * double(i), 100.0 * double(i)});
    }
    node.enqueued = packets;
    return node;
}

} // namespace

TEST_CASE("decrement amount tables")
{
    const auto dcf = BackoffPolicy::Dcf();
    const auto lt2 = BackoffPolicy::Threshold(2);
    const auto adaptive = BackoffPolicy::Adaptive(4, 2);

    const std::vector<std::uint32_t> dcf_d = {1, 0, 0, 0, 0, 0};
    const std::vector<std::uint32_t> lt2_d = {1, 1, 1, 0, 0, 0};
    const std::vector<std::uint32_t> adaptive_d = {4, 3, 2, 0, 0, 0};
    for (std::uint32_t i = 0; i < 6; ++i)
    {
        CAPTURE(i);
        CHECK(DecrementAmount(dcf, i) == dcf_d[i]);
        CHECK(DecrementAmount(lt2, i) == lt2_d[i]);
        CHECK(DecrementAmount(adaptive, i) == adaptive_d[i]);
        CHECK(IsIdleSlot(adaptive, i) == (adaptive_d[i] > 0));
    }

    CHECK(DecrementAmount(BackoffPolicy::Adaptive(4, 3), 3) == 1);
    CHECK(DecrementAmount(BackoffPolicy::Adaptive(1, 0), 0) == 1);
}

TEST_CASE("DCF equals the threshold policy with threshold zero")
{
    for (std::uint32_t i = 0; i <= 16; ++i)
    {
        CHECK(DecrementAmount(BackoffPolicy::Dcf(), i) ==
              DecrementAmount(BackoffPolicy::Threshold(0), i));
        CHECK(IsIdleSlot(BackoffPolicy::Dcf(), i) == IsIdleSlot(BackoffPolicy::Threshold(0), i));
    }
}

TEST_CASE("decrement amount is non-increasing in the ongoing count")
{
    const std::vector<BackoffPolicy> policies = {BackoffPolicy::Dcf(),
                                                 BackoffPolicy::Threshold(3),
                                                 BackoffPolicy::Adaptive(6, 5),
                                                 BackoffPolicy::Adaptive(6, 0)};
    for (const auto& policy : policies)
    {
        for (std::uint32_t i = 1; i <= 16; ++i)
        {
            CHECK(DecrementAmount(policy, i) <= DecrementAmount(policy, i - 1));
        }
    }
}

TEST_CASE("DIFS idle rule")
{
    CHECK(IsDifsIdleSlot(BackoffPolicy::Dcf(), 0));
    CHECK_FALSE(IsDifsIdleSlot(BackoffPolicy::Dcf(), 1));
    CHECK(IsDifsIdleSlot(BackoffPolicy::Threshold(3), 0));
    CHECK_FALSE(IsDifsIdleSlot(BackoffPolicy::Threshold(3), 1));
    CHECK(IsDifsIdleSlot(BackoffPolicy::Adaptive(4, 2), 2));
    CHECK_FALSE(IsDifsIdleSlot(BackoffPolicy::Adaptive(4, 2), 3));
}

TEST_CASE("policy construction")
{
    CHECK_THROWS_AS(BackoffPolicy::Adaptive(4, 4), ConfigError);
    CHECK_THROWS_AS(BackoffPolicy::Adaptive(4, 9), ConfigError);
    CHECK(BackoffPolicy::Adaptive(4, 3) == BackoffPolicy::Adaptive(4, 3));
    CHECK_FALSE(BackoffPolicy::Adaptive(4, 3) == BackoffPolicy::Adaptive(4, 2));
    CHECK(BackoffPolicy::Dcf().Name() == "dcf");
    CHECK(BackoffPolicy::Threshold(1).Name() == "threshold");
    CHECK(BackoffPolicy::Adaptive(2, 1).Name() == "adaptive");
}

TEST_CASE("contention window")
{
    MacParams p;
    CHECK(ContentionWindow(0, p) == 128);
    CHECK(ContentionWindow(3, p) == 1024);
    CHECK(ContentionWindow(5, p) == 4096);
    CHECK(ContentionWindow(7, p) == 4096);
    p.cw_min = 16;
    p.max_backoff_stage = 2;
    CHECK(ContentionWindow(4, p) == 64);
}

TEST_CASE("backoff draws are uniform")
{
    MacParams p;
    Rng rng(7);
    std::vector<double> counts(128, 0.0);
    const int draws = 1'000'000;
    for (int i = 0; i < draws; ++i)
    {
        const auto b = DrawBackoff(0, p, rng);
        REQUIRE(b >= 0);
        REQUIRE(b < 128);
        counts[std::size_t(b)] += 1.0;
    }
    const double expected = draws / 128.0;
    double chi2 = 0.0;
    for (double c : counts)
    {
        chi2 += (c - expected) * (c - expected) / expected;
    }
    // 127 degrees of freedom; 0.999 quantile is about 182.
    CHECK(chi2 < 182.0);

    std::int64_t lo = 1 << 20;
    std::int64_t hi = -1;
    for (int i = 0; i < 200'000; ++i)
    {
        const auto b = DrawBackoff(5, p, rng);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    CHECK(lo == 0);
    CHECK(hi == 4095);

    MacParams one;
    one.cw_min = 1;
    one.max_backoff_stage = 0;
    for (int i = 0; i < 100; ++i)
    {
        CHECK(DrawBackoff(0, one, rng) == 0);
    }
}

TEST_CASE("frame airtime and DIFS")
{
    MacParams p;
    auto a = FrameAirtime(p);
    CHECK(a.us == doctest::Approx(8584.0));
    CHECK(a.slots == 172);
    CHECK(DifsSlots(p) == 3);

    p.payload_bits = 0;
    a = FrameAirtime(p);
    CHECK(a.us == doctest::Approx(400.0));
    CHECK(a.slots == 8);

    MacParams fast;
    fast.bitrate_bps = 2e6;
    a = FrameAirtime(fast);
    CHECK(a.us == doctest::Approx(4292.0));
    CHECK(a.slots == 86);

    fast.difs_us = 100.0;
    CHECK(DifsSlots(fast) == 2);
    fast.difs_us = 10.0;
    CHECK(DifsSlots(fast) == 1);
}

TEST_CASE("parameter validation")
{
    MacParams p;
    CHECK_NOTHROW(p.Validate());
    p.cw_min = 0;
    CHECK_THROWS_AS(p.Validate(), ConfigError);
    p = MacParams{};
    p.slot_us = 0.0;
    CHECK_THROWS_AS(p.Validate(), ConfigError);
    p = MacParams{};
    p.bitrate_bps = -1.0;
    CHECK_THROWS_AS(p.Validate(), ConfigError);
}

TEST_CASE("transmission outcome handling")
{
    MacParams p;
    Rng rng(3);

    SUBCASE("success with an empty queue afterwards")
    {
        auto node = TransmittingNode(1);
        node.backoff_stage = 2;
        node.retries_used = 2;
        const auto r = OnTransmissionResult(node, true, p, rng, 9000.0);
        CHECK(r.outcome == TxOutcome::Delivered);
        CHECK(node.queue.empty());
        CHECK(node.backoff_stage == 0);
        CHECK(node.retries_used == 0);
        CHECK(std::holds_alternative<phase::Idle>(node.phase));
    }

    SUBCASE("success with packets waiting")
    {
        auto node = TransmittingNode(2);
        const auto r = OnTransmissionResult(node, true, p, rng, 9000.0);
        CHECK(r.outcome == TxOutcome::Delivered);
        CHECK(r.packet.arrival_us == 0.0);
        REQUIRE(node.queue.size() == 1);
        CHECK(node.queue.front().service_start_us == 9000.0);
        const auto* sensing = std::get_if<phase::Sensing>(&node.phase);
        REQUIRE(sensing);
        REQUIRE(sensing->counter.has_value());
        CHECK(*sensing->counter < 128);
    }

    SUBCASE("failure below the retry limit")
    {
        auto node = TransmittingNode(1);
        const auto r = OnTransmissionResult(node, false, p, rng, 9000.0);
        CHECK(r.outcome == TxOutcome::Retrying);
        CHECK(node.queue.size() == 1);
        CHECK(node.retries_used == 1);
        CHECK(node.backoff_stage == 1);
        const auto* sensing = std::get_if<phase::Sensing>(&node.phase);
        REQUIRE(sensing);
        CHECK(*sensing->counter < 256);
    }

    SUBCASE("failure at the retry limit drops")
    {
        auto node = TransmittingNode(1);
        node.retries_used = p.retry_limit;
        node.backoff_stage = 4;
        const auto r = OnTransmissionResult(node, false, p, rng, 9000.0);
        CHECK(r.outcome == TxOutcome::Dropped);
        CHECK(node.queue.empty());
        CHECK(node.retries_used == 0);
        CHECK(node.backoff_stage == 0);
    }

    SUBCASE("saturated node is refilled")
    {
        auto node = TransmittingNode(1);
        node.always_backlogged = true;
        OnTransmissionResult(node, true, p, rng, 500.0);
        CHECK(node.queue.size() == 1);
        CHECK(node.enqueued == 2);
        CHECK(std::holds_alternative<phase::Sensing>(node.phase));
    }

    SUBCASE("invalid states")
    {
        NodeState idle;
        idle.queue.push_back(Packet{});
        CHECK_THROWS_AS(OnTransmissionResult(idle, true, p, rng, 0.0), StateError);
        auto empty = TransmittingNode(0);
        CHECK_THROWS_AS(OnTransmissionResult(empty, true, p, rng, 0.0), StateError);
    }
}

TEST_CASE("retries never exceed the limit and the stage never exceeds m")
{
    MacParams p;
    p.retry_limit = 3;
    p.max_backoff_stage = 2;
    Rng rng(11);
    auto node = TransmittingNode(50);
    int delivered = 0;
    int dropped = 0;
    for (int step = 0; step < 2000 && !node.queue.empty(); ++step)
    {
        node.phase = phase::Transmitting{0, 1, false};
        const bool success = rng.Uniform01() < 0.3;
        const auto r = OnTransmissionResult(node, success, p, rng, 0.0);
        CHECK(node.retries_used <= p.retry_limit);
        CHECK(node.backoff_stage <= p.max_backoff_stage);
        delivered += r.outcome == TxOutcome::Delivered;
        dropped += r.outcome == TxOutcome::Dropped;
    }
    CHECK(node.queue.empty());
    CHECK(delivered + dropped == 50);
}
