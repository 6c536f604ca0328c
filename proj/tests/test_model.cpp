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

#include "debit/model.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace debit;

TEST_SUITE("model")
{
    TEST_CASE("dBm conversions")
    {
        CHECK(to_watts(Dbm{30.0}) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(to_watts(Dbm{-40.0}) == doctest::Approx(1e-7).epsilon(1e-14));
        CHECK(to_watts(Dbm{-43.0}) == doctest::Approx(5.0119e-8).epsilon(1e-4));
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-120.0, 60.0);
        for (int i = 0; i < 1000; ++i) {
            const double w = to_watts(Dbm{u(rng)});
            CHECK(std::abs(to_watts(to_dbm(w)) - w) <= 1e-12 * w);
        }
        CHECK(db_to_ratio(10.0) == doctest::Approx(10.0));
        CHECK(ratio_to_db(100.0) == doctest::Approx(20.0));
    }

    TEST_CASE("reference network")
    {
        CHECK(gain_from_distance(10.0) == doctest::Approx(1e-5).epsilon(1e-12));
        const SystemParams p = reference_params(8);
        CHECK(p.num_users == 8);
        CHECK(p.user_power.size() == 8);
        CHECK(p.power(3) == doctest::Approx(1.0));
        CHECK(p.relay_power == doctest::Approx(8.0));
        CHECK(p.peak_power == doctest::Approx(10.0));
        CHECK(p.antenna_noise == doctest::Approx(5.0119e-8).epsilon(1e-4));
        CHECK(p.conversion_noise == doctest::Approx(5.0119e-8).epsilon(1e-4));
        CHECK(p.relay_noise == doctest::Approx(1e-7));
        CHECK(p.user_noise == doctest::Approx(1e-7));
        CHECK(p.efficiency == 0.7);
        CHECK(p.avg_channel_gain == doctest::Approx(1e-5));
        CHECK(p.phase_duration == 1.0);
        CHECK_NOTHROW(p.validate());

        const SystemParams q = p.with_users(12);
        CHECK(q.num_users == 12);
        CHECK(q.user_power.size() == 12);
        CHECK(q.relay_power == p.relay_power);
    }

    TEST_CASE("parameter validation")
    {
        SystemParams p = reference_params(4);
        p.num_users = 1;
        p.user_power.resize(1);
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p = reference_params(4);
        p.user_power.pop_back();
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p = reference_params(4);
        p.efficiency = 1.5;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p = reference_params(4);
        p.user_noise = 0.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p = reference_params(4);
        p.peak_power = 0.5;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        p = reference_params(4);
        p.avg_channel_gain = -1.0;
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);

        Targets t;
        t.harvest = -1.0;
        CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    }

    TEST_CASE("derived targets are computed on demand")
    {
        const SystemParams p = reference_params(8);
        Targets t{to_watts(Dbm{-12.0}), 2.5};
        CHECK(t.xi0() == doctest::Approx(31.0));
        CHECK(t.nu0(p) == doctest::Approx(31.0 * 1e-7 / 1e-5));
        CHECK(t.c0(p) == doctest::Approx(std::sqrt(to_watts(Dbm{-12.0}) / 0.7)));
        t.sum_rate = 0.5;
        CHECK(t.xi0() == doctest::Approx(1.0));
    }

    TEST_CASE("channel sampling is deterministic and sorted")
    {
        const SystemParams p = reference_params(8);
        const ChannelState a = sample_channels(p, 42);
        const ChannelState b = sample_channels(p, 42);
        const ChannelState c = sample_channels(p, 43);
        REQUIRE(a.num_users() == 8);
        CHECK(a.gains == b.gains);
        CHECK(a.magnitudes == b.magnitudes);
        CHECK(a.sort_order == b.sort_order);
        CHECK(a.gains != c.gains);
        for (int k = 0; k < 8; ++k) {
            CHECK(a.magnitude(k) == doctest::Approx(std::abs(a.gains[static_cast<std::size_t>(k)])));
        }
        for (std::size_t i = 1; i < a.sort_order.size(); ++i) {
            CHECK(a.magnitude(a.sort_order[i - 1]) <= a.magnitude(a.sort_order[i]));
        }
    }

    TEST_CASE("ties sort by user index")
    {
        const std::vector<double> m{2.0, 1.0, 2.0, 1.0};
        const ChannelState ch = ChannelState::from_magnitudes(m);
        CHECK(ch.sort_order == std::vector<int>{1, 3, 0, 2});
    }

    TEST_CASE("weakest gain")
    {
        const std::vector<double> m{3.0, 1.0, 2.0};
        CHECK(sorted_min_gain(ChannelState::from_magnitudes(m)) == doctest::Approx(1.0));
        const std::vector<double> same{0.7, 0.7, 0.7};
        CHECK(sorted_min_gain(ChannelState::from_magnitudes(same)) == doctest::Approx(0.49));
        const ChannelState ch = sample_channels(reference_params(8), 9);
        double brute = INFINITY;
        for (const auto& h : ch.gains) {
            brute = std::min(brute, std::norm(h));
        }
        CHECK(sorted_min_gain(ch) == doctest::Approx(brute).epsilon(1e-14));
    }

    TEST_CASE("Rayleigh moments")
    {
        // 10^6 magnitudes: four users over 250000 draws.
        const SystemParams p = reference_params(4);
        const double G = p.avg_channel_gain;
        double power = 0.0;
        double amp = 0.0;
        double amp2 = 0.0;
        const int draws = 250000;
        for (int s = 0; s < draws; ++s) {
            const ChannelState ch = sample_channels(p, static_cast<std::uint64_t>(s));
            for (int k = 0; k < 4; ++k) {
                power += ch.power_gain(k);
                amp += ch.magnitude(k);
                amp2 += ch.magnitude(k) * ch.magnitude(k);
            }
        }
        const double n = 4.0 * draws;
        const double mean = amp / n;
        CHECK(std::abs(power / n - G) <= 0.01 * G);
        CHECK(std::abs(mean - std::sqrt(std::numbers::pi * G / 4.0)) <= 0.01 * mean);
        const double var = amp2 / n - mean * mean;
        CHECK(std::abs(var - (4.0 - std::numbers::pi) * G / 4.0) <= 0.02 * var);
    }
}
