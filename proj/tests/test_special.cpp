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

#include "debit/special_functions.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace debit::special;

TEST_SUITE("special")
{
    TEST_CASE("normal CDF")
    {
        CHECK(normal_cdf(0.0) == 0.5);
        CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021).epsilon(1e-7));
        for (double x : {1e-6, 0.3, 1.0, 2.5, 6.0, 12.0}) {
            CHECK(std::abs(normal_cdf(-x) - (1.0 - normal_cdf(x))) <= 1e-14);
            CHECK(normal_sf(x) == doctest::Approx(normal_cdf(-x)).epsilon(1e-14));
        }
        // The upper tail keeps relative accuracy far out.
        CHECK(normal_sf(20.0) == doctest::Approx(2.7536241186062337e-89).epsilon(1e-12));
        for (double x : {-4.0, -0.7, 0.01, 3.3}) {
            CHECK(std::abs(normal_cdf(x) - oracle::normal_cdf(x)) <= 1e-12);
        }
    }

    TEST_CASE("exponential integral")
    {
        CHECK(exp_integral_e1(1.0) == doctest::Approx(0.2193839).epsilon(1e-7));
        CHECK(exp_integral_e1(0.001) == doctest::Approx(6.33154).epsilon(1e-6));
        CHECK_THROWS_AS(exp_integral_e1(0.0), std::domain_error);
        CHECK_THROWS_AS(exp_integral_e1(-1.0), std::domain_error);
        for (double x : {1e-5, 0.2, 0.99, 1.01, 4.0, 40.0}) {
            CHECK(exp_integral_e1(x) < std::exp(-x) / x);
            CHECK(std::abs(exp_integral_e1(x) - oracle::exp_integral_e1(x)) <= 1e-10);
        }
        // d/dx E1 = -exp(-x)/x, checked by central differences.
        for (double x : {0.05, 0.5, 1.0, 3.0, 10.0}) {
            const double h = 1e-5 * x;
            const double fd = (exp_integral_e1(x + h) - exp_integral_e1(x - h)) / (2.0 * h);
            const double exact = -std::exp(-x) / x;
            CHECK(std::abs(fd - exact) <= 1e-6 * std::abs(exact));
        }
    }

    TEST_CASE("truncated normal mean")
    {
        CHECK(std::abs(g_function(2.0 - 10.0 * 0.5, 2.0, 0.5) - 2.0) <= 1e-9);
        CHECK(g_function(0.0, 0.0, 1.0) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-12));
        CHECK(g_function(0.0, 0.0, 1.0) == doctest::Approx(0.7978846).epsilon(1e-7));
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int i = 0; i < 200; ++i) {
            const double mu = u(rng);
            const double sigma = 0.1 + std::abs(u(rng));
            const double zeta = mu + sigma * u(rng) * 4.0;
            const double g = g_function(zeta, mu, sigma);
            CHECK(g >= std::max(zeta, mu) - 1e-12 * (1.0 + std::abs(g)));
        }
        CHECK_THROWS_AS(g_function(100.0, 0.0, 1.0), std::overflow_error);
        const oracle::McEstimate mc = oracle::truncated_normal_mean(0.3, -0.2, 1.3, 200000, 5);
        CHECK(std::abs(g_function(0.3, -0.2, 1.3) - mc.mean) <= 4.0 * mc.stderr_of_mean);
    }
}
