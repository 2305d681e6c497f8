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

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace mprsim;

namespace
{

// Random lower-triangular matrix whose entries are multiples of 1/8, so row
// sums and expected successes are exact and ties are common.
std::vector<std::vector<double>>
QuantizedMatrix(std::size_t n, std::mt19937& gen)
{
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 1; i <= n; ++i)
    {
        std::vector<int> counts(i + 1, 0);
        std::uniform_int_distribution<std::size_t> pick(0, i);
        for (int unit = 0; unit < 8; ++unit)
        {
            ++counts[pick(gen)];
        }
        std::vector<double> row;
        for (int c : counts)
        {
            row.push_back(c / 8.0);
        }
        rows.push_back(row);
    }
    return rows;
}

std::pair<std::size_t, std::size_t>
BruteForceKEquiv(const std::vector<std::vector<double>>& rows)
{
    std::vector<double> expected;
    for (const auto& row : rows)
    {
        double e = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j)
        {
            e += static_cast<double>(j) * row[j];
        }
        expected.push_back(e);
    }
    const double best = *std::max_element(expected.begin(), expected.end());
    std::vector<std::size_t> ties;
    for (std::size_t i = 0; i < expected.size(); ++i)
    {
        if (expected[i] == best)
        {
            ties.push_back(i + 1);
        }
    }
    return {ties.front(), ties[(ties.size() - 1) / 2]};
}

} // namespace

TEST_CASE("k-MPR success rule")
{
    CHECK(KMprSuccess(4, 4));
    CHECK_FALSE(KMprSuccess(5, 4));
    CHECK(KMprSuccess(1, 1));
    CHECK_FALSE(KMprSuccess(2, 1));
    CHECK(KMprSuccess(0, 1));

    for (std::size_t k = 1; k <= 10; ++k)
    {
        for (std::size_t c = 1; c <= 12; ++c)
        {
            if (KMprSuccess(c, k))
            {
                CHECK(KMprSuccess(c - 1, k));
                CHECK(KMprSuccess(c, k + 1));
            }
        }
    }
}

TEST_CASE("expected successes of a single row")
{
    const auto m = ValidateMatrix({{0.0, 1.0}, {0.1, 0.2, 0.7}});
    CHECK(ExpectedSuccesses(m, 1) == doctest::Approx(1.0));
    CHECK(ExpectedSuccesses(m, 2) == doctest::Approx(1.6));
    CHECK_THROWS_AS(ExpectedSuccesses(m, 0), IndexError);
    CHECK_THROWS_AS(ExpectedSuccesses(m, 3), IndexError);
}

TEST_CASE("K_equiv of small matrices")
{
    const auto m = ValidateMatrix({{0.1, 0.9}, {0.0, 0.2, 0.8}, {0.1, 0.2, 0.3, 0.4}});
    CHECK(ExpectedSuccesses(m, 1) == doctest::Approx(0.9));
    CHECK(ExpectedSuccesses(m, 2) == doctest::Approx(1.8));
    CHECK(ExpectedSuccesses(m, 3) == doctest::Approx(2.0));
    CHECK(KEquiv(m) == 3);

    const auto tie = ValidateMatrix({{0.0, 1.0}, {0.0, 1.0, 0.0}});
    CHECK(KEquiv(tie, TieRule::Minimum) == 1);
    CHECK(KEquiv(tie, TieRule::Middle) == 1);

    // E = 1, 2, 2, 2: maximizers {2, 3, 4}.
    const auto plateau = ValidateMatrix(
        {{0.0, 1.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 1.0, 0.0, 0.0}});
    CHECK(KEquiv(plateau, TieRule::Minimum) == 2);
    CHECK(KEquiv(plateau, TieRule::Middle) == 3);
}

TEST_CASE("K_equiv of the k-MPR matrix is k")
{
    for (std::size_t k = 1; k <= 8; ++k)
    {
        const auto m = KMprMatrix(k, 12);
        CHECK(m.MaxTransmissions() == 12);
        CHECK(KEquiv(m) == k);
        CHECK(KEquiv(m, TieRule::Middle) == k);
        for (std::size_t i = 1; i <= 12; ++i)
        {
            CHECK(ExpectedSuccesses(m, i) == doctest::Approx(i <= k ? double(i) : 0.0));
        }
        CHECK(ChannelModel::MakeKMpr(k).Capability() == k);
        CHECK(ChannelModel::MakeGeneralized(m).Capability() == k);
    }
}

TEST_CASE("K_equiv agrees with brute force on random matrices")
{
    std::mt19937 gen(2024);
    std::uniform_int_distribution<std::size_t> size(1, 8);
    for (int trial = 0; trial < 1000; ++trial)
    {
        const auto rows = QuantizedMatrix(size(gen), gen);
        const auto [minimum, middle] = BruteForceKEquiv(rows);
        const auto m = ValidateMatrix(rows);
        CHECK(KEquiv(m, TieRule::Minimum) == minimum);
        CHECK(KEquiv(m, TieRule::Middle) == middle);
    }
}

TEST_CASE("matrix validation")
{
    CHECK_THROWS_AS(ValidateMatrix({}), MatrixError);
    CHECK_THROWS_AS(ValidateMatrix({{0.0, 1.0}, {0.5, 0.5}}), RowLengthError);
    CHECK_THROWS_AS(ValidateMatrix({{-0.1, 1.1}}), ProbabilityRangeError);
    CHECK_THROWS_AS(ValidateMatrix({{0.5, 0.4}}), RowSumError);
    CHECK_NOTHROW(ValidateMatrix({{0.5, 0.5 + 1e-10}}));

    const auto m = KMprMatrix(3, 6);
    CHECK(ValidateMatrix(m.Rows()).Rows() == m.Rows());
    CHECK(m.Row(2).size() == 3);
    CHECK_THROWS_AS(m.Row(0), IndexError);
    CHECK_THROWS_AS(m.Row(7), IndexError);
}

TEST_CASE("matrix parsing")
{
    std::istringstream ok("# two rows\n0.1 0.9\n\n0 0.2 0.8\n");
    const auto m = ParseMatrix(ok);
    CHECK(m.MaxTransmissions() == 2);
    CHECK(ExpectedSuccesses(m, 2) == doctest::Approx(1.8));

    std::istringstream bad("0.1 0.9\n0 x 0.8\n");
    try
    {
        ParseMatrix(bad);
        FAIL("expected a parse error");
    }
    catch (const MatrixError& e)
    {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    std::istringstream short_row("0.1 0.9\n1.0 0.0\n");
    CHECK_THROWS_AS(ParseMatrix(short_row), RowLengthError);
    CHECK_THROWS_AS(LoadMatrixFile("/nonexistent/matrix.txt"), IoError);
}
