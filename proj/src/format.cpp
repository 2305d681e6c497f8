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

#include "mprsim/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace mprsim
{

std::string
FormatNumber(double value)
{
    if (value == 0.0)
    {
        return "0";
    }
    std::array<char, 64> buf{};
    auto [end, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 6);
    return std::string(buf.data(), ec == std::errc{} ? end : buf.data());
}

std::string
FormatShortest(double value)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ec == std::errc{} ? end : buf.data());
}

double
RoundSignificant(double value)
{
    if (!std::isfinite(value))
    {
        return value;
    }
    const auto text = FormatNumber(value);
    return ParseDouble(text).value_or(value);
}

std::optional<double>
ParseDouble(std::string_view text)
{
    if (!text.empty() && text.front() == '+')
    {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value))
    {
        return std::nullopt;
    }
    return value;
}

std::optional<std::int64_t>
ParseInt(std::string_view text)
{
    if (!text.empty() && text.front() == '+')
    {
        text.remove_prefix(1);
    }
    std::int64_t value = 0;
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (text.empty() || ec != std::errc{} || ptr != last)
    {
        return std::nullopt;
    }
    return value;
}

std::optional<std::uint64_t>
ParseUint(std::string_view text)
{
    std::uint64_t value = 0;
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (text.empty() || ec != std::errc{} || ptr != last)
    {
        return std::nullopt;
    }
    return value;
}

} // namespace mprsim
