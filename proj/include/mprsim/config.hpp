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

#ifndef MPRSIM_CONFIG_HPP
#define MPRSIM_CONFIG_HPP

#include "mprsim/sim_config.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mprsim
{

enum class PolicyKind
{
    Dcf,
    Threshold,
    Adaptive,
};

enum class OutputFormat
{
    Csv,
    Json,
};

/**
 * Experiment settings as written by a user: flat keys that mirror the CLI
 * flags ("policy", "k", "kt", "u", "rate-pps", "cwmin", ...). Later Set()
 * calls override earlier ones, which is how flags override a config file.
 * Thresholds left unset follow the MPR limit as K - 1 when the config is
 * built, so sweeping k keeps them tied to it.
 */
class ConfigSettings
{
  public:
    // Throws ConfigError("field '<key>': ...") on unknown keys or bad values.
    void Set(std::string_view key, std::string_view value);

    // "key = value" lines, '#' comments. Errors carry "<origin>:<line>:".
    void Load(std::istream& in, const std::string& origin);
    void LoadFile(const std::string& path);

    // Resolved and validated; throws ConfigError.
    SimConfig Build() const;

    PolicyKind Policy() const noexcept { return m_policy; }
    std::uint64_t Seed() const noexcept { return m_seed; }
    std::uint32_t Replications() const noexcept { return m_replications; }
    const std::optional<std::string>& TracePath() const noexcept { return m_trace; }
    const std::optional<OutputFormat>& Output() const noexcept { return m_out; }

    static const std::vector<std::string>& Keys();

  private:
    PolicyKind m_policy = PolicyKind::Adaptive;
    std::uint32_t m_k = 4;
    std::optional<std::uint32_t> m_kt;
    std::optional<std::uint32_t> m_lt;
    std::uint32_t m_n = 30;
    TrafficSource m_traffic = OfferedLoad{0.5};
    bool m_saturated = false;
    MacParams m_mac;
    Slot m_duration = 2'000'000;
    std::optional<Slot> m_warmup;
    std::uint64_t m_seed = 1;
    std::uint32_t m_replications = 1;
    std::optional<std::string> m_trace;
    std::optional<OutputFormat> m_out;
};

std::string ToString(PolicyKind kind);

// Config echo for reports.
nlohmann::json ToJson(const SimConfig& config);

} // namespace mprsim

#endif
