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


#include "debit/optimizers.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace debit;

namespace {

Targets harvest_target(double watts)
{
    Targets t;
    t.harvest = watts;
    return t;
}

Targets rate_target(double bps)
{
    Targets t;
    t.sum_rate = bps;
    return t;
}

double coherent_harvest(const SystemParams& p, const ChannelState& ch, double power)
{
    const double s = std::accumulate(ch.magnitudes.begin(), ch.magnitudes.end(), 0.0);
    return p.efficiency * power * s * s;
}

// Fraction of the weakest achievable harvest that a sum-rate problem can ask for.
double mid_harvest(const SystemParams& p, const ChannelState& ch)
{
    return 0.3 * coherent_harvest(p, ch, p.peak_power) * (p.min_user_power() / p.peak_power);
}

} // namespace

TEST_SUITE("optimizers")
{
    TEST_CASE("energy-first scheme without a harvest target spends everything on information")
    {
        const SystemParams p = reference_params(4);
        const ChannelState ch = sample_channels(p, 3);
        const Solution s = solve_p2_suboptimal(p, ch, Targets{});
        REQUIRE(s.feasible);
        CHECK(s.alloc.time_split == 0.0);
        for (int k = 0; k < 4; ++k) {
            CHECK(s.alloc.info_power_2[static_cast<std::size_t>(k)] == doctest::Approx(p.power(k)).epsilon(1e-14));
        }
        CHECK(s.harvested == 0.0);
    }

    TEST_CASE("energy-first time split in closed form")
    {
        SystemParams p = reference_params(3);
        const std::vector<double> mags{0.5, 0.3, 0.2};
        const ChannelState ch = ChannelState::from_magnitudes(mags);
        // eta * P_peak * (sum |h|)^2 = 7, so 0.07 W needs one percent of the phase.
        const Solution s = solve_p2_suboptimal(p, ch, harvest_target(0.07));
        REQUIRE(s.feasible);
        CHECK(s.alloc.time_split == doctest::Approx(0.01).epsilon(1e-12));
        CHECK(s.harvested == doctest::Approx(0.07).epsilon(1e-10));
        CHECK(s.alloc.power_split == 1.0);
        const double p2 = (1.0 - 0.01 * 10.0) / 0.99;
        CHECK(s.alloc.info_power_2[0] == doctest::Approx(p2).epsilon(1e-12));
    }

    TEST_CASE("energy-first scheme reports an unreachable target as zero rates")
    {
        const SystemParams p = reference_params(3);
        const std::vector<double> mags{0.5, 0.3, 0.2};
        const ChannelState ch = ChannelState::from_magnitudes(mags);
        // alpha would be 0.2, above P / P_peak = 0.1.
        const Solution s = solve_p2_suboptimal(p, ch, harvest_target(1.4));
        CHECK_FALSE(s.feasible);
        CHECK(s.sum_rate == 0.0);
        for (double r : s.rates) {
            CHECK(r == 0.0);
        }
        CHECK_FALSE(s.diagnostics.note.empty());
        CHECK_THROWS_AS(suboptimal_allocation(p, ch, 0.2), std::invalid_argument);
    }

    TEST_CASE("optimal sum-rate dominates the energy-first scheme")
    {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const SystemParams p = reference_params(3);
            const ChannelState ch = sample_channels(p, seed);
            const Targets t = harvest_target(mid_harvest(p, ch));
            const Solution opt = solve_p1_sum_rate(p, ch, t);
            const Solution sub = solve_p2_suboptimal(p, ch, t);
            REQUIRE(opt.feasible);
            REQUIRE(sub.feasible);
            CHECK(opt.sum_rate >= sub.sum_rate - 1e-3);
            CHECK(certify(opt, p, ch, t, Objective::sum_rate).worst() <= 1e-6);
        }
    }

    TEST_CASE("optimal sum-rate is at least a fine symmetric grid")
    {
        const SystemParams p = reference_params(3);
        const ChannelState ch = sample_channels(p, 11);
        const Targets t = harvest_target(mid_harvest(p, ch));
        const double grid = oracle::p1_symmetric_grid(p, ch, t.harvest, 12);
        REQUIRE(grid > 0.0);
        const Solution opt = solve_p1_sum_rate(p, ch, t);
        REQUIRE(opt.feasible);
        CHECK(opt.sum_rate >= grid - 1e-3);
    }

    TEST_CASE("two users with equal channels get equal treatment")
    {
        const SystemParams p = reference_params(2);
        const double m = std::sqrt(p.avg_channel_gain);
        const std::vector<double> mags{m, m};
        const ChannelState ch = ChannelState::from_magnitudes(mags);
        const Targets t = harvest_target(0.2 * coherent_harvest(p, ch, p.peak_power) * 0.1);
        const Solution s = solve_p1_sum_rate(p, ch, t);
        REQUIRE(s.feasible);
        const Allocation& a = s.alloc;
        const double total1 = a.energy_power[0] + a.info_power_1[0];
        const double total2 = a.energy_power[1] + a.info_power_1[1];
        CHECK(std::abs(total1 - total2) <= 1e-4 * std::max(1.0, total1));
        CHECK(std::abs(a.info_power_2[0] - a.info_power_2[1]) <= 1e-4 * std::max(1.0, a.info_power_2[0]));
    }

    TEST_CASE("optimal harvest without a rate target is full coherent transfer")
    {
        const SystemParams p = reference_params(4);
        const ChannelState ch = sample_channels(p, 5);
        const Solution s = solve_p3_harvest(p, ch, Targets{});
        REQUIRE(s.feasible);
        // Any alpha in [P / P_peak, 1] attains it, so only the value is pinned.
        CHECK(s.harvested == doctest::Approx(coherent_harvest(p, ch, p.power(0))).epsilon(1e-6));
        CHECK(s.alloc.power_split == doctest::Approx(1.0).epsilon(1e-9));
    }

    TEST_CASE("optimal harvest dominates and shrinks as the rate target grows")
    {
        const SystemParams p = reference_params(3);
        const ChannelState ch = sample_channels(p, 2);
        const double top = solve_p2_suboptimal(p, ch, Targets{}).sum_rate;
        double previous = INFINITY;
        for (int i = 0; i < 10; ++i) {
            const Targets t = rate_target(top * i / 10.0);
            const Solution opt = solve_p3_harvest(p, ch, t);
            const Solution sub = solve_p4_suboptimal(p, ch, t);
            REQUIRE(opt.feasible);
            REQUIRE(sub.feasible);
            CHECK(opt.harvested >= sub.harvested * (1.0 - 1e-6));
            CHECK(opt.harvested <= previous * (1.0 + 1e-6));
            CHECK(certify(opt, p, ch, t, Objective::harvest).worst() <= 1e-6);
            previous = opt.harvested;
        }
    }

    TEST_CASE("suboptimal harvest uses the largest time split when the rate target is zero")
    {
        const SystemParams p = reference_params(4);
        const ChannelState ch = sample_channels(p, 8);
        const Solution s = solve_p4_suboptimal(p, ch, Targets{});
        REQUIRE(s.feasible);
        CHECK(s.alloc.time_split == doctest::Approx(0.1).epsilon(1e-14));
    }

    TEST_CASE("suboptimal harvest matches a dense scan of the time split")
    {
        const SystemParams p = reference_params(3);
        const ChannelState ch = sample_channels(p, 4);
        const double top = solve_p2_suboptimal(p, ch, Targets{}).sum_rate;
        const Targets t = rate_target(0.9 * top);
        const Solution s = solve_p4_suboptimal(p, ch, t);
        REQUIRE(s.feasible);

        const int n = 10000;
        double best_alpha = -1.0;
        for (int i = 0; i <= n; ++i) {
            const double alpha = 0.1 * i / n;
            const Solution e = evaluate_allocation(suboptimal_allocation(p, ch, alpha), p, ch);
            if (e.sum_rate >= t.sum_rate) {
                best_alpha = alpha;
            }
        }
        REQUIRE(best_alpha >= 0.0);
        CHECK(std::abs(s.alloc.time_split - best_alpha) <= 1e-4);
    }

    TEST_CASE("suboptimal time split falls as the rate target rises")
    {
        const SystemParams p = reference_params(4);
        const ChannelState ch = sample_channels(p, 6);
        const double top = solve_p2_suboptimal(p, ch, Targets{}).sum_rate;
        double previous = INFINITY;
        for (int i = 0; i <= 10; ++i) {
            const Solution s = solve_p4_suboptimal(p, ch, rate_target(top * i / 10.0));
            REQUIRE(s.feasible);
            CHECK(s.alloc.time_split <= previous);
            previous = s.alloc.time_split;
        }
        const Solution beyond = solve_p4_suboptimal(p, ch, rate_target(top * 1.5));
        CHECK_FALSE(beyond.feasible);
        CHECK(beyond.sum_rate == 0.0);
        CHECK(beyond.harvested == 0.0);
    }

    TEST_CASE("power splitting baseline")
    {
        const SystemParams p = reference_params(4);
        const ChannelState ch = sample_channels(p, 9);

        SUBCASE("no harvest target means no splitting")
        {
            const Solution s = solve_baseline_swipt(p, ch, Targets{}, BaselineMode::sum_rate);
            REQUIRE(s.feasible);
            CHECK(s.alloc.power_split == 0.0);
            CHECK(s.alloc.time_split == 1.0);
        }
        SUBCASE("split ratio meets the harvest target exactly")
        {
            double received = 0.0;
            for (int k = 0; k < 4; ++k) {
                received += p.power(k) * ch.power_gain(k);
            }
            const double target = 0.4 * p.efficiency * received;
            const Solution s = solve_baseline_swipt(p, ch, harvest_target(target), BaselineMode::sum_rate);
            REQUIRE(s.feasible);
            CHECK(std::abs(s.harvested - target) <= 1e-9 * target);
            CHECK(certify(s, p, ch, harvest_target(target), Objective::sum_rate).worst() <= 1e-6);
        }
        SUBCASE("harvest mode never beats the energy-first scheme")
        {
            const double top = solve_baseline_swipt(p, ch, Targets{}, BaselineMode::sum_rate).sum_rate;
            for (double f : {0.0, 0.3, 0.6, 0.9}) {
                const Targets t = rate_target(f * top);
                const Solution b = solve_baseline_swipt(p, ch, t, BaselineMode::harvest);
                const Solution e = solve_p4_suboptimal(p, ch, t);
                REQUIRE(b.feasible);
                REQUIRE(e.feasible);
                CHECK(b.harvested <= e.harvested * (1.0 + 1e-9));
                CHECK(b.sum_rate >= t.sum_rate - 1e-9);
            }
        }
    }

    TEST_CASE("baseline without splitting equals the energy-first scheme without an energy subphase")
    {
        // With the first-subphase noise equal to the relay noise the two schemes coincide.
        SystemParams p = reference_params(3);
        p.antenna_noise = 4e-8;
        p.conversion_noise = 6e-8;
        p.relay_noise = 1e-7;
        const ChannelState ch = sample_channels(p, 12);
        const Solution b = solve_baseline_swipt(p, ch, Targets{}, BaselineMode::sum_rate);
        const Solution e = solve_p2_suboptimal(p, ch, Targets{});
        CHECK(b.sum_rate == doctest::Approx(e.sum_rate).epsilon(1e-9));
    }

    TEST_CASE("solutions are invariant to a common rescaling of channel and noise")
    {
        SystemParams p = reference_params(3);
        const ChannelState ch = sample_channels(p, 21);
        const Targets t = harvest_target(mid_harvest(p, ch));
        const Solution a = solve_p2_suboptimal(p, ch, t);

        // Gains up by c, every receiver noise up by c^2 and relay power down by c^2: same SNRs.
        const double c = 3.0;
        SystemParams q = p;
        q.antenna_noise *= c * c;
        q.conversion_noise *= c * c;
        q.user_noise *= c * c;
        q.relay_noise *= c * c;
        q.avg_channel_gain *= c * c;
        std::vector<double> scaled = ch.magnitudes;
        for (double& m : scaled) {
            m *= c;
        }
        const ChannelState ch2 = ChannelState::from_magnitudes(scaled);
        const Solution b = solve_p2_suboptimal(q, ch2, harvest_target(t.harvest * c * c));
        REQUIRE(a.feasible);
        REQUIRE(b.feasible);
        CHECK(b.sum_rate == doctest::Approx(a.sum_rate).epsilon(1e-9));
        CHECK(b.alloc.time_split == doctest::Approx(a.alloc.time_split).epsilon(1e-9));
    }

    TEST_CASE("optimal schemes refuse more users than full enumeration allows")
    {
        const SystemParams p = reference_params(11);
        const ChannelState ch = sample_channels(p, 1);
        CHECK_THROWS_AS(solve_p1_sum_rate(p, ch, Targets{}), CapacityError);
        CHECK_THROWS_AS(solve_p3_harvest(p, ch, Targets{}), CapacityError);
    }

    TEST_CASE("infeasible optimal problems report zero rates")
    {
        const SystemParams p = reference_params(3);
        const ChannelState ch = sample_channels(p, 7);
        const Targets t = harvest_target(2.0 * coherent_harvest(p, ch, p.power(0)));
        const Solution s = solve_p1_sum_rate(p, ch, t);
        CHECK_FALSE(s.feasible);
        CHECK(s.sum_rate == 0.0);
        CHECK(certify(s, p, ch, t, Objective::sum_rate).consistency == 0.0);

        const double top = solve_p2_suboptimal(p, ch, Targets{}).sum_rate;
        const Solution h = solve_p3_harvest(p, ch, rate_target(10.0 * top));
        CHECK_FALSE(h.feasible);
        CHECK(h.sum_rate == 0.0);
    }
}
