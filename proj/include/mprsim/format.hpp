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

#ifndef MPRSIM_FORMAT_HPP
#define MPRSIM_FORMAT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mprsim
{

// Locale-independent number I/O. Output uses 6 significant digits.
std::string FormatNumber(double value);
// Shortest text that parses back to the same double.
std::string FormatShortest(double value);
double RoundSignificant(double value);

std::optional<double> ParseDouble(std::string_view text);
std::optional<std::int64_t> ParseInt(std::string_view text);
std::optional<std::uint64_t> ParseUint(std::string_view text);

} // namespace mprsim

#endif
