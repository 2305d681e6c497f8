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

#include "mprsim/sim_config.hpp"

#include "mprsim/errors.hpp"
#include "mprsim/format.hpp"

#include <cmath>
#include <sstream>

namespace mprsim
{

void
SimConfig::Validate() const
{
    auto require = [](bool ok, const char* field, const std::string& what) {
        if (!ok)
        {
            throw ConfigError(std::string("field '") + field + "': " + what);
        }
    };
    require(n_stations >= 1, "n", "need at least one station");
    require(mpr_k >= 1, "k", "MPR capability must be >= 1");
    if (const auto* adaptive = std::get_if<AdaptiveBackoff>(&policy.Get()))
    {
        require(adaptive->k == mpr_k, "k", "adaptive policy K must equal the channel K");
        require(adaptive->kt < adaptive->k, "kt", "must be < k");
    }
    mac.Validate();
    require(duration_slots > 0, "duration-slots", "must be > 0");
    const Slot warmup = WarmupSlots();
    require(warmup >= 0, "warmup-slots", "must be >= 0");
    require(warmup < duration_slots, "warmup-slots", "must be < duration-slots");
    if (const auto* load = std::get_if<OfferedLoad>(&traffic))
    {
        require(std::isfinite(load->u) && load->u >= 0, "u", "must be a finite value >= 0");
    }
    else
    {
        const double pps = std::get<ArrivalRate>(traffic).pps;
        require(std::isfinite(pps) && pps >= 0, "rate-pps", "must be a finite value >= 0");
    }
}

Slot
SimConfig::WarmupSlots() const
{
    return warmup_slots.value_or(duration_slots / 10);
}

double
SimConfig::ArrivalRatePps() const
{
    if (const auto* load = std::get_if<OfferedLoad>(&traffic))
    {
        return OfferedTrafficToRate(load->u, n_stations, mac);
    }
    return std::get<ArrivalRate>(traffic).pps;
}

double
OfferedTrafficToRate(double u, std::uint32_t n_stations, const MacParams& mac)
{
    if (u == 0.0)
    {
        return 0.0;
    }
    return u * mac.bitrate_bps /
           (static_cast<double>(n_stations) * static_cast<double>(mac.payload_bits));
}

std::string
Fingerprint(const SimConfig& c)
{
    std::ostringstream os;
    os << "policy=" << c.policy.Name();
    if (const auto* t = std::get_if<ThresholdBackoff>(&c.policy.Get()))
    {
        os << ";lt=" << t->lt;
    }
    if (const auto* a = std::get_if<AdaptiveBackoff>(&c.policy.Get()))
    {
        os << ";kt=" << a->kt;
    }
    os << ";n=" << c.n_stations << ";k=" << c.mpr_k;
    if (const auto* load = std::get_if<OfferedLoad>(&c.traffic))
    {
        os << ";u=" << FormatShortest(load->u);
    }
    else
    {
        os << ";rate-pps=" << FormatShortest(std::get<ArrivalRate>(c.traffic).pps);
    }
    os << ";saturated=" << (c.saturated ? 1 : 0) << ";cwmin=" << c.mac.cw_min
       << ";m=" << c.mac.max_backoff_stage << ";retry-limit=" << c.mac.retry_limit
       << ";slot-us=" << FormatShortest(c.mac.slot_us) << ";difs-us=" << FormatShortest(c.mac.difs_us)
       << ";payload-bits=" << c.mac.payload_bits << ";mac-header-bits=" << c.mac.mac_header_bits
       << ";phy-header-bits=" << c.mac.phy_header_bits
       << ";bitrate=" << FormatShortest(c.mac.bitrate_bps) << ";duration-slots=" << c.duration_slots
       << ";warmup-slots=" << c.WarmupSlots();
    return os.str();
}

} // namespace mprsim
