// SPDX-License-Identifier: Apache-2.0
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


#include "debit/rate_lp.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace debit;

namespace {

Allocation random_allocation(const SystemParams& p, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int K = p.num_users;
    Allocation a = Allocation::zeros(K);
    a.time_split = 0.05 + 0.9 * u(rng);
    a.power_split = u(rng);
    for (int k = 0; k < K; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double first = std::min(p.peak_power, p.power(k) / a.time_split) * u(rng);
        const double fe = u(rng);
        a.energy_power[i] = first * fe;
        a.info_power_1[i] = first * (1.0 - fe);
        a.info_power_2[i] = (p.power(k) - a.time_split * first) / (1.0 - a.time_split);
    }
    a.relay_gain = 1.0; // callers make the relay budget tight for their channel
    return a;
}

} // namespace

TEST_SUITE("rate_lp")
{
    TEST_CASE("lazy cuts reach the vertex optimum for three users")
    {
        std::mt19937_64 rng(77);
        for (int trial = 0; trial < 20; ++trial) {
            const SystemParams p = reference_params(3);
            const ChannelState ch = sample_channels(p, static_cast<std::uint64_t>(trial) + 100);
            Allocation a = random_allocation(p, rng);
            a.relay_gain = p.relay_power / oracle::relay_used(a, ch, p);
            const RateRegion region(a, ch, p);
            const RateLpResult r = maximize_sum_rate(region);
            REQUIRE(r.status == numeric::SolveStatus::optimal);
            const double expected = oracle::max_sum_rate(a, ch, p);
            CHECK(r.sum_rate == doctest::Approx(expected).epsilon(1e-9));
            CHECK(max_rate_region_violation(region, r.rates) <= 1e-9);
        }
    }

    TEST_CASE("restricted family agrees with full enumeration")
    {
        std::mt19937_64 rng(5);
        for (int K : {5, 8}) {
            const SystemParams p = reference_params(K);
            for (int trial = 0; trial < 5; ++trial) {
                const ChannelState ch = sample_channels(p, static_cast<std::uint64_t>(1000 * K + trial));
                Allocation a = random_allocation(p, rng);
                a.relay_gain = p.relay_power / oracle::relay_used(a, ch, p);
                const RateRegion region(a, ch, p);
                RateLpOptions full;
                RateLpOptions restricted;
                restricted.mode = RateBoundMode::restricted_family;
                const RateLpResult f = maximize_sum_rate(region, full);
                const RateLpResult r = maximize_sum_rate(region, restricted);
                REQUIRE(f.status == numeric::SolveStatus::optimal);
                REQUIRE(r.status == numeric::SolveStatus::optimal);
                CHECK(r.sum_rate == doctest::Approx(f.sum_rate).epsilon(1e-8));
                CHECK(max_rate_region_violation(region, r.rates) <= 1e-8);
            }
        }
    }

    TEST_CASE("rates are nonnegative and sum to the reported value")
    {
        std::mt19937_64 rng(9);
        const SystemParams p = reference_params(6);
        const ChannelState ch = sample_channels(p, 4);
        Allocation a = random_allocation(p, rng);
        a.relay_gain = p.relay_power / oracle::relay_used(a, ch, p);
        const RateLpResult r = maximize_sum_rate(RateRegion(a, ch, p));
        double sum = 0.0;
        for (double v : r.rates) {
            CHECK(v >= -1e-12);
            sum += v;
        }
        CHECK(sum == doctest::Approx(r.sum_rate).epsilon(1e-12));
        CHECK(r.rows > 0);
    }

    TEST_CASE("zero relay gain gives zero rates")
    {
        const SystemParams p = reference_params(3);
        const ChannelState ch = sample_channels(p, 1);
        Allocation a = Allocation::zeros(3);
        a.time_split = 0.0;
        a.info_power_2.assign(3, 1.0);
        const RateLpResult r = maximize_sum_rate(RateRegion(a, ch, p));
        REQUIRE(r.status == numeric::SolveStatus::optimal);
        CHECK(r.sum_rate == doctest::Approx(0.0));
    }
}
