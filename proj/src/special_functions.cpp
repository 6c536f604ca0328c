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

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace debit::special {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double exp_integral_e1(double x)
{
    if (!(x > 0.0)) {
        throw std::domain_error("E1 is defined for positive arguments only");
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    constexpr double eps = 1e-16;
    if (x <= 1.0) {
        // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
        double sum = 0.0;
        double term = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= -x / k;
            const double add = term / k;
            sum += add;
            if (std::abs(add) < eps * std::abs(sum)) {
                break;
            }
        }
        return -std::numbers::egamma - std::log(x) - sum;
    }
    constexpr double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps) {
            break;
        }
    }
    return h * std::exp(-x);
}

double g_function(double zeta, double mu, double sigma)
{
    if (!(sigma > 0.0)) {
        throw std::domain_error("g_function needs a positive standard deviation");
    }
    const double z = (zeta - mu) / sigma;
    const double tail = normal_sf(z);
    if (!(tail >= 1e-300)) {
        throw std::overflow_error("g_function: truncation keeps less than 1e-300 of the probability mass");
    }
    const double density = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return mu + sigma * density / tail;
}

} // namespace debit::special
