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

#include "mprsim/config.hpp"
#include "mprsim/engine.hpp"
#include "mprsim/errors.hpp"
#include "mprsim/format.hpp"
#include "mprsim/sweep.hpp"

#include <doctest.h>

#include <sstream>

using namespace mprsim;

namespace
{

std::string
ErrorOf(ConfigSettings& s, const std::string& key, const std::string& value)
{
    try
    {
        s.Set(key, value);
    }
    catch (const ConfigError& e)
    {
        return e.what();
    }
    return {};
}

ConfigSettings
ShortRun()
{
    ConfigSettings s;
    s.Set("n", "10");
    s.Set("k", "2");
    s.Set("duration-slots", "20000");
    return s;
}

} // namespace

TEST_CASE("number formatting and parsing")
{
    CHECK(FormatNumber(0.0) == "0");
    CHECK(FormatNumber(0.123456789) == "0.123457");
    CHECK(FormatNumber(8750.0) == "8750");
    CHECK(FormatNumber(1234567.0) == "1.23457e+06");
    CHECK(RoundSignificant(2.718281828) == doctest::Approx(2.71828).epsilon(1e-12));
    CHECK(FormatShortest(0.1) == "0.1");

    CHECK(ParseDouble("0.25") == 0.25);
    CHECK(ParseDouble("1e-3") == 0.001);
    CHECK_FALSE(ParseDouble(" 1"));
    CHECK_FALSE(ParseDouble("1.5x"));
    CHECK_FALSE(ParseDouble(""));
    CHECK(ParseInt("-4") == -4);
    CHECK_FALSE(ParseUint("-4"));
    CHECK(ParseUint("42") == 42u);
}

TEST_CASE("settings build the defaults")
{
    const auto c = ConfigSettings{}.Build();
    CHECK(c.n_stations == 30);
    CHECK(c.mpr_k == 4);
    CHECK(c.policy == BackoffPolicy::Adaptive(4, 3));
    CHECK(c.mac == MacParams{});
    CHECK(c.WarmupSlots() == 200'000);
}

TEST_CASE("thresholds follow K unless set")
{
    ConfigSettings s;
    s.Set("k", "6");
    CHECK(s.Build().policy == BackoffPolicy::Adaptive(6, 5));
    s.Set("policy", "threshold");
    CHECK(s.Build().policy == BackoffPolicy::Threshold(5));
    s.Set("lt", "1");
    CHECK(s.Build().policy == BackoffPolicy::Threshold(1));
    s.Set("policy", "adaptive");
    s.Set("kt", "6");
    CHECK_THROWS_AS(s.Build(), ConfigError);
}

TEST_CASE("invalid values name the field")
{
    ConfigSettings s;
    CHECK(ErrorOf(s, "k", "abc").find("field 'k'") != std::string::npos);
    CHECK(ErrorOf(s, "k", "0").find("field 'k'") != std::string::npos);
    CHECK(ErrorOf(s, "u", "-1").find("field 'u'") != std::string::npos);
    CHECK(ErrorOf(s, "policy", "aloha").find("field 'policy'") != std::string::npos);
    CHECK(ErrorOf(s, "saturated", "maybe").find("field 'saturated'") != std::string::npos);
    CHECK(ErrorOf(s, "out", "xml").find("field 'out'") != std::string::npos);
    CHECK(ErrorOf(s, "colour", "red").find("unknown field") != std::string::npos);
    CHECK(ErrorOf(s, "Retry_Limit", "3").empty());
    CHECK(s.Build().mac.retry_limit == 3);
}

TEST_CASE("later settings override earlier ones")
{
    ConfigSettings s;
    std::istringstream file("# experiment\nn = 12\nu = 0.4\ncwmin = 64\n");
    s.Load(file, "exp.cfg");
    s.Set("n", "20");
    s.Set("rate-pps", "2.5");
    const auto c = s.Build();
    CHECK(c.n_stations == 20);
    CHECK(c.mac.cw_min == 64);
    CHECK(std::get<ArrivalRate>(c.traffic).pps == 2.5);
    CHECK(c.ArrivalRatePps() == 2.5);
}

TEST_CASE("config file diagnostics carry the line")
{
    ConfigSettings s;
    std::istringstream bad("n = 5\n\nk = two\n");
    try
    {
        s.Load(bad, "exp.cfg");
        FAIL("expected an error");
    }
    catch (const ConfigError& e)
    {
        const std::string what = e.what();
        CHECK(what.find("exp.cfg:3:") != std::string::npos);
        CHECK(what.find("field 'k'") != std::string::npos);
    }

    std::istringstream both("u = 0.5\nrate-pps = 3\n");
    CHECK_THROWS_AS(s.Load(both, "x"), ConfigError);
    std::istringstream no_eq("n 5\n");
    CHECK_THROWS_AS(s.Load(no_eq, "x"), ConfigError);
    CHECK_THROWS_AS(s.LoadFile("/nonexistent/exp.cfg"), IoError);
}

TEST_CASE("fingerprint ignores only the seed")
{
    auto a = ShortRun().Build();
    auto b = a;
    b.seed = 99;
    CHECK(Fingerprint(a) == Fingerprint(b));
    b.mac.cw_min = 64;
    CHECK(Fingerprint(a) != Fingerprint(b));
}

TEST_CASE("sweep parameter names")
{
    CHECK(ParseSweepParameter("u") == SweepParameter::OfferedLoad);
    CHECK(ParseSweepParameter("n") == SweepParameter::Stations);
    CHECK(ParseSweepParameter("mpr_k") == SweepParameter::MprK);
    CHECK(ParseSweepParameter("threshold") == SweepParameter::Threshold);
    CHECK(ParseSweepParameter("cwmin") == SweepParameter::CwMin);
    CHECK_FALSE(ParseSweepParameter("bogus"));
}

TEST_CASE("sweep points")
{
    SweepSpec spec{ShortRun(), SweepParameter::Threshold, {0, 1}, 1};
    auto p = SweepPoint(spec, 1);
    CHECK(p.Build().policy == BackoffPolicy::Adaptive(2, 1));
    CHECK(p.Seed() == 1 + kSweepSeedStride);

    spec.base.Set("policy", "threshold");
    CHECK(SweepPoint(spec, 0).Build().policy == BackoffPolicy::Threshold(0));

    spec.base.Set("policy", "dcf");
    CHECK_THROWS_AS(SweepPoint(spec, 0), ConfigError);

    SweepSpec k_spec{ShortRun(), SweepParameter::MprK, {2.5}, 1};
    CHECK_THROWS_AS(SweepPoint(k_spec, 0), ConfigError);
}

TEST_CASE("a sweep row equals the standalone run")
{
    SweepSpec spec{ShortRun(), SweepParameter::OfferedLoad, {0.3, 1.2}, 2};
    const auto rows = RunSweep(spec, 2);
    REQUIRE(rows.size() == 2);

    auto standalone = ShortRun();
    standalone.Set("u", "1.2");
    standalone.Set("seed", std::to_string(1 + kSweepSeedStride));
    const auto reports = RunReplications(standalone, 2, 1);
    REQUIRE(rows[1].reports.size() == 2);
    for (std::size_t r = 0; r < 2; ++r)
    {
        CHECK(ToKeyValue(rows[1].reports[r]) == ToKeyValue(reports[r]));
    }
    const auto summary = AggregateReplications(reports);
    CHECK(rows[1].summary.throughput.mean == summary.throughput.mean);
    CHECK(rows[1].summary.delay_us.std == summary.delay_us.std);
}

TEST_CASE("sweep output is deterministic")
{
    SweepSpec spec{ShortRun(), SweepParameter::Stations, {5, 15}, 3};
    const auto a = SweepCsv(RunSweep(spec, 1));
    const auto b = SweepCsv(RunSweep(spec, 3));
    CHECK(a == b);
    CHECK(a.rfind("swept_value,throughput_mean,throughput_std,delay_mean_us,delay_std_us,"
                  "eta_mean,eta_std,dropped_mean,replications\n",
                  0) == 0);
    std::size_t lines = 0;
    for (char ch : a)
    {
        lines += ch == '\n';
    }
    CHECK(lines == 3);
}

TEST_CASE("a single replication has zero spread")
{
    SweepSpec spec{ShortRun(), SweepParameter::CwMin, {32}, 1};
    const auto rows = RunSweep(spec, 1);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].summary.throughput.std == 0.0);
    CHECK(rows[0].summary.delay_us.std == 0.0);
    CHECK(rows[0].summary.replications == 1);
    const auto json = SweepJson(rows, SweepParameter::CwMin);
    CHECK(json.dump().find("cw_min") != std::string::npos);
}

TEST_CASE("config echo")
{
    const auto j = ToJson(ShortRun().Build());
    CHECK(j["n"] == 10);
    CHECK(j["k"] == 2);
    CHECK(j["kt"] == 1);
    CHECK(j["policy"] == "adaptive");
}
