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

#ifndef MPRSIM_CHANNEL_HPP
#define MPRSIM_CHANNEL_HPP

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mprsim
{

inline constexpr double kProbabilityTolerance = 1e-9;

/**
 * Reception matrix of a generalized MPR channel.
 *
 * Row i (1-based) holds the probabilities that j = 0..i packets are decoded
 * when i packets are sent concurrently. Entries above the diagonal do not
 * exist. Instances are only obtainable through ValidateMatrix, so every
 * ReceptionMatrix satisfies the range, shape and row-sum invariants.
 */
class ReceptionMatrix
{
  public:
    std::size_t MaxTransmissions() const noexcept { return m_rows.size(); }

    // Row for i concurrent transmissions, 1-based.
    std::span<const double> Row(std::size_t i) const;

    const std::vector<std::vector<double>>& Rows() const noexcept { return m_rows; }

  private:
    explicit ReceptionMatrix(std::vector<std::vector<double>> rows)
        : m_rows(std::move(rows))
    {
    }

    friend ReceptionMatrix ValidateMatrix(std::vector<std::vector<double>> raw);

    std::vector<std::vector<double>> m_rows;
};

// Throws RowLengthError, ProbabilityRangeError, RowSumError, or MatrixError
// when no rows are supplied.
ReceptionMatrix ValidateMatrix(std::vector<std::vector<double>> raw);

// sum_j j * eps_ij. Throws IndexError unless 1 <= i <= MaxTransmissions().
double ExpectedSuccesses(const ReceptionMatrix& matrix, std::size_t i);

enum class TieRule
{
    Minimum,
    Middle,
};

// Equivalent MPR capability: the transmission count maximizing expected
// successes. Ties (within kProbabilityTolerance) resolve per rule; Middle
// picks the lower median of the maximizing set.
std::size_t KEquiv(const ReceptionMatrix& matrix, TieRule rule = TieRule::Minimum);

// k-MPR channel: every packet survives iff at most k are on the air.
constexpr bool KMprSuccess(std::size_t concurrent, std::size_t k) noexcept
{
    return concurrent <= k;
}

// k-MPR channel written out as a generalized matrix with n_max rows.
ReceptionMatrix KMprMatrix(std::size_t k, std::size_t n_max);

struct KMpr
{
    std::size_t k;
};

struct Generalized
{
    ReceptionMatrix matrix;
};

class ChannelModel
{
  public:
    static ChannelModel MakeKMpr(std::size_t k);
    static ChannelModel MakeGeneralized(ReceptionMatrix matrix);

    const std::variant<KMpr, Generalized>& Kind() const noexcept { return m_kind; }

    // k for KMpr, KEquiv for Generalized.
    std::size_t Capability(TieRule rule = TieRule::Minimum) const;

  private:
    explicit ChannelModel(std::variant<KMpr, Generalized> kind)
        : m_kind(std::move(kind))
    {
    }

    std::variant<KMpr, Generalized> m_kind;
};

// Plain text: one row per line, whitespace-separated probabilities, '#'
// starts a comment line. Parse failures raise MatrixError carrying the line
// number.
ReceptionMatrix ParseMatrix(std::istream& in);
ReceptionMatrix LoadMatrixFile(const std::string& path);

} // namespace mprsim

#endif
