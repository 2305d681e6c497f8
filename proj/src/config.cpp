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

#include "mprsim/errors.hpp"
#include "mprsim/format.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

namespace mprsim
{

namespace
{

std::string
NormalizeKey(std::string_view key)
{
    std::string out(key);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return c == '_' ? '-' : static_cast<char>(std::tolower(c));
    });
    return out;
}

std::string_view
Trim(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
    {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

[[noreturn]] void
BadValue(const std::string& key, std::string_view value, const char* expected)
{
    throw ConfigError("field '" + key + "': '" + std::string(value) + "' is not " + expected);
}

template <typename T>
T
Unsigned(const std::string& key, std::string_view value, T min = 0)
{
    const auto parsed = ParseUint(value);
    if (!parsed || *parsed < min || *parsed > std::numeric_limits<T>::max())
    {
        BadValue(key, value, min == 0 ? "a non-negative integer" : "a positive integer");
    }
    return static_cast<T>(*parsed);
}

double
Real(const std::string& key, std::string_view value, bool strictly_positive)
{
    const auto parsed = ParseDouble(value);
    if (!parsed || *parsed < 0 || (strictly_positive && *parsed == 0))
    {
        BadValue(key, value, strictly_positive ? "a positive number" : "a non-negative number");
    }
    return *parsed;
}

bool
Boolean(const std::string& key, std::string_view value)
{
    const std::string v = NormalizeKey(value);
    if (v == "1" || v == "true" || v == "yes" || v == "on")
    {
        return true;
    }
    if (v == "0" || v == "false" || v == "no" || v == "off")
    {
        return false;
    }
    BadValue(key, value, "a boolean");
}

} // namespace

const std::vector<std::string>&
ConfigSettings::Keys()
{
    static const std::vector<std::string> keys = {
        "policy",         "k",          "kt",          "lt",           "n",
        "u",              "rate-pps",   "saturated",   "cwmin",        "m",
        "retry-limit",    "slot-us",    "difs-us",     "payload-bits", "mac-header-bits",
        "phy-header-bits", "bitrate",   "duration-slots", "warmup-slots", "seed",
        "replications",   "trace",      "out",
    };
    return keys;
}

void
ConfigSettings::Set(std::string_view raw_key, std::string_view raw_value)
{
    const std::string key = NormalizeKey(Trim(raw_key));
    const std::string_view value = Trim(raw_value);

    if (key == "policy")
    {
        const std::string v = NormalizeKey(value);
        if (v == "dcf")
        {
            m_policy = PolicyKind::Dcf;
        }
        else if (v == "threshold")
        {
            m_policy = PolicyKind::Threshold;
        }
        else if (v == "adaptive")
        {
            m_policy = PolicyKind::Adaptive;
        }
        else
        {
            BadValue(key, value, "one of dcf|threshold|adaptive");
        }
    }
    else if (key == "k")
    {
        m_k = Unsigned<std::uint32_t>(key, value, 1);
    }
    else if (key == "kt")
    {
        m_kt = Unsigned<std::uint32_t>(key, value);
    }
    else if (key == "lt")
    {
        m_lt = Unsigned<std::uint32_t>(key, value);
    }
    else if (key == "n")
    {
        m_n = Unsigned<std::uint32_t>(key, value, 1);
    }
    else if (key == "u")
    {
        m_traffic = OfferedLoad{Real(key, value, false)};
    }
    else if (key == "rate-pps")
    {
        m_traffic = ArrivalRate{Real(key, value, false)};
    }
    else if (key == "saturated")
    {
        m_saturated = Boolean(key, value);
    }
    else if (key == "cwmin")
    {
        m_mac.cw_min = Unsigned<std::uint32_t>(key, value, 1);
    }
    else if (key == "m")
    {
        m_mac.max_backoff_stage = Unsigned<std::uint32_t>(key, value);
    }
    else if (key == "retry-limit")
    {
        m_mac.retry_limit = Unsigned<std::uint32_t>(key, value);
    }
    else if (key == "slot-us")
    {
        m_mac.slot_us = Real(key, value, true);
    }
    else if (key == "difs-us")
    {
        m_mac.difs_us = Real(key, value, true);
    }
    else if (key == "payload-bits")
    {
        m_mac.payload_bits = Unsigned<std::uint64_t>(key, value);
    }
    else if (key == "mac-header-bits")
    {
        m_mac.mac_header_bits = Unsigned<std::uint64_t>(key, value);
    }
    else if (key == "phy-header-bits")
    {
        m_mac.phy_header_bits = Unsigned<std::uint64_t>(key, value);
    }
    else if (key == "bitrate")
    {
        m_mac.bitrate_bps = Real(key, value, true);
    }
    else if (key == "duration-slots")
    {
        m_duration = static_cast<Slot>(Unsigned<std::uint64_t>(key, value, 1));
    }
    else if (key == "warmup-slots")
    {
        m_warmup = static_cast<Slot>(Unsigned<std::uint64_t>(key, value));
    }
    else if (key == "seed")
    {
        m_seed = Unsigned<std::uint64_t>(key, value);
    }
    else if (key == "replications")
    {
        m_replications = Unsigned<std::uint32_t>(key, value, 1);
    }
    else if (key == "trace")
    {
        if (value.empty())
        {
            BadValue(key, value, "a path");
        }
        m_trace = std::string(value);
    }
    else if (key == "out")
    {
        const std::string v = NormalizeKey(value);
        if (v == "csv")
        {
            m_out = OutputFormat::Csv;
        }
        else if (v == "json")
        {
            m_out = OutputFormat::Json;
        }
        else
        {
            BadValue(key, value, "one of csv|json");
        }
    }
    else
    {
        throw ConfigError("unknown field '" + std::string(raw_key) + "'");
    }
}

void
ConfigSettings::Load(std::istream& in, const std::string& origin)
{
    std::string line;
    std::size_t line_no = 0;
    bool traffic_seen = false;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto text = Trim(line);
        if (text.empty() || text.front() == '#')
        {
            continue;
        }
        const auto where = origin + ":" + std::to_string(line_no) + ": ";
        const auto eq = text.find('=');
        if (eq == std::string_view::npos)
        {
            throw ConfigError(where + "expected 'key = value'");
        }
        const std::string key = NormalizeKey(Trim(text.substr(0, eq)));
        if (key == "u" || key == "rate-pps")
        {
            if (traffic_seen)
            {
                throw ConfigError(where + "field '" + key +
                                  "': give only one of u and rate-pps");
            }
            traffic_seen = true;
        }
        try
        {
            Set(key, text.substr(eq + 1));
        }
        catch (const ConfigError& e)
        {
            throw ConfigError(where + e.what());
        }
    }
}

void
ConfigSettings::LoadFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw IoError("cannot open config file '" + path + "'");
    }
    Load(in, path);
}

SimConfig
ConfigSettings::Build() const
{
    SimConfig config;
    config.n_stations = m_n;
    config.mpr_k = m_k;
    switch (m_policy)
    {
    case PolicyKind::Dcf:
        config.policy = BackoffPolicy::Dcf();
        break;
    case PolicyKind::Threshold:
        config.policy = BackoffPolicy::Threshold(m_lt.value_or(m_k - 1));
        break;
    case PolicyKind::Adaptive: {
        const std::uint32_t kt = m_kt.value_or(m_k - 1);
        if (kt >= m_k)
        {
            throw ConfigError("field 'kt': must be < k (kt=" + std::to_string(kt) +
                              ", k=" + std::to_string(m_k) + ")");
        }
        config.policy = BackoffPolicy::Adaptive(m_k, kt);
        break;
    }
    }
    config.mac = m_mac;
    config.traffic = m_traffic;
    config.saturated = m_saturated;
    config.duration_slots = m_duration;
    config.warmup_slots = m_warmup;
    config.seed = m_seed;
    config.Validate();
    return config;
}

std::string
ToString(PolicyKind kind)
{
    switch (kind)
    {
    case PolicyKind::Dcf:
        return "dcf";
    case PolicyKind::Threshold:
        return "threshold";
    case PolicyKind::Adaptive:
        return "adaptive";
    }
    return "?";
}

nlohmann::json
ToJson(const SimConfig& c)
{
    nlohmann::json j;
    j["policy"] = c.policy.Name();
    if (const auto* t = std::get_if<ThresholdBackoff>(&c.policy.Get()))
    {
        j["lt"] = t->lt;
    }
    if (const auto* a = std::get_if<AdaptiveBackoff>(&c.policy.Get()))
    {
        j["kt"] = a->kt;
    }
    j["k"] = c.mpr_k;
    j["n"] = c.n_stations;
    if (const auto* load = std::get_if<OfferedLoad>(&c.traffic))
    {
        j["u"] = load->u;
    }
    else
    {
        j["rate-pps"] = std::get<ArrivalRate>(c.traffic).pps;
    }
    j["arrival_rate_pps"] = RoundSignificant(c.ArrivalRatePps());
    j["saturated"] = c.saturated;
    j["cwmin"] = c.mac.cw_min;
    j["m"] = c.mac.max_backoff_stage;
    j["retry-limit"] = c.mac.retry_limit;
    j["slot-us"] = c.mac.slot_us;
    j["difs-us"] = c.mac.difs_us;
    j["payload-bits"] = c.mac.payload_bits;
    j["mac-header-bits"] = c.mac.mac_header_bits;
    j["phy-header-bits"] = c.mac.phy_header_bits;
    j["bitrate"] = c.mac.bitrate_bps;
    j["duration-slots"] = c.duration_slots;
    j["warmup-slots"] = c.WarmupSlots();
    j["seed"] = c.seed;
    return j;
}

} // namespace mprsim
