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

#include "mprsim/channel.hpp"

#include "mprsim/errors.hpp"
#include "mprsim/format.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace mprsim
{

std::span<const double>
ReceptionMatrix::Row(std::size_t i) const
{
    if (i < 1 || i > m_rows.size())
    {
        throw IndexError("row " + std::to_string(i) + " outside 1.." +
                         std::to_string(m_rows.size()));
    }
    return m_rows[i - 1];
}

ReceptionMatrix
ValidateMatrix(std::vector<std::vector<double>> raw)
{
    if (raw.empty())
    {
        throw MatrixError("reception matrix needs at least one row");
    }
    for (std::size_t r = 0; r < raw.size(); ++r)
    {
        const std::size_t i = r + 1;
        const auto& row = raw[r];
        if (row.size() != i + 1)
        {
            throw RowLengthError("row " + std::to_string(i) + " has " +
                                 std::to_string(row.size()) + " entries, expected " +
                                 std::to_string(i + 1));
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j)
        {
            const double p = row[j];
            if (!(p >= 0.0 && p <= 1.0))
            {
                std::ostringstream os;
                os << "entry (" << i << "," << j << ") = " << p << " outside [0,1]";
                throw ProbabilityRangeError(os.str());
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kProbabilityTolerance)
        {
            std::ostringstream os;
            os.precision(12);
            os << "row " << i << " sums to " << sum << ", expected 1";
            throw RowSumError(os.str());
        }
    }
    return ReceptionMatrix(std::move(raw));
}

double
ExpectedSuccesses(const ReceptionMatrix& matrix, std::size_t i)
{
    const auto row = matrix.Row(i);
    double expected = 0.0;
    for (std::size_t j = 1; j < row.size(); ++j)
    {
        expected += static_cast<double>(j) * row[j];
    }
    return expected;
}

std::size_t
KEquiv(const ReceptionMatrix& matrix, TieRule rule)
{
    const std::size_t n = matrix.MaxTransmissions();
    double best = -1.0;
    for (std::size_t i = 1; i <= n; ++i)
    {
        best = std::max(best, ExpectedSuccesses(matrix, i));
    }
    std::vector<std::size_t> maximizers;
    for (std::size_t i = 1; i <= n; ++i)
    {
        if (best - ExpectedSuccesses(matrix, i) <= kProbabilityTolerance)
        {
            maximizers.push_back(i);
        }
    }
    if (rule == TieRule::Minimum)
    {
        return maximizers.front();
    }
    return maximizers[(maximizers.size() - 1) / 2];
}

ReceptionMatrix
KMprMatrix(std::size_t k, std::size_t n_max)
{
    std::vector<std::vector<double>> rows;
    rows.reserve(n_max);
    for (std::size_t i = 1; i <= n_max; ++i)
    {
        std::vector<double> row(i + 1, 0.0);
        row[KMprSuccess(i, k) ? i : 0] = 1.0;
        rows.push_back(std::move(row));
    }
    return ValidateMatrix(std::move(rows));
}

ChannelModel
ChannelModel::MakeKMpr(std::size_t k)
{
    if (k < 1)
    {
        throw ConfigError("k-MPR channel requires k >= 1");
    }
    return ChannelModel(KMpr{k});
}

ChannelModel
ChannelModel::MakeGeneralized(ReceptionMatrix matrix)
{
    return ChannelModel(Generalized{std::move(matrix)});
}

std::size_t
ChannelModel::Capability(TieRule rule) const
{
    if (const auto* kmpr = std::get_if<KMpr>(&m_kind))
    {
        return kmpr->k;
    }
    return KEquiv(std::get<Generalized>(m_kind).matrix, rule);
}

ReceptionMatrix
ParseMatrix(std::istream& in)
{
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
        {
            continue;
        }
        std::istringstream fields(line);
        std::vector<double> row;
        std::string token;
        while (fields >> token)
        {
            const auto value = ParseDouble(token);
            if (!value)
            {
                throw MatrixError("line " + std::to_string(line_no) + ": '" + token +
                                  "' is not a number");
            }
            row.push_back(*value);
        }
        rows.push_back(std::move(row));
    }
    return ValidateMatrix(std::move(rows));
}

ReceptionMatrix
LoadMatrixFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw IoError("cannot open matrix file '" + path + "'");
    }
    return ParseMatrix(in);
}

} // namespace mprsim
