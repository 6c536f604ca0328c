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

#include "debit/performance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace debit {

double capacity(double x) { return 0.5 * std::log1p(x) / std::numbers::ln2; }

double harvested_power(const Allocation& alloc, const ChannelState& channels, double efficiency)
{
    double coherent = 0.0;
    double incoherent = 0.0;
    for (int k = 0; k < channels.num_users(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        coherent += std::sqrt(std::max(alloc.energy_power[i], 0.0)) * channels.magnitude(k);
        incoherent += alloc.info_power_1[i] * channels.power_gain(k);
    }
    return alloc.time_split * alloc.power_split * efficiency * (coherent * coherent + incoherent);
}

double first_subphase_noise(double power_split, const SystemParams& params)
{
    return (1.0 - power_split) * params.antenna_noise + params.conversion_noise;
}

double relay_power_used(const Allocation& alloc, const ChannelState& channels, const SystemParams& params)
{
    double rx1 = 0.0;
    double rx2 = 0.0;
    for (int k = 0; k < channels.num_users(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        rx1 += alloc.info_power_1[i] * channels.power_gain(k);
        rx2 += alloc.info_power_2[i] * channels.power_gain(k);
    }
    const double alpha = alloc.time_split;
    const double theta = alloc.power_split;
    return alloc.relay_gain
        * (alpha * ((1.0 - theta) * rx1 + first_subphase_noise(theta, params))
           + (1.0 - alpha) * (rx2 + params.relay_noise));
}

RateRegion::RateRegion(const Allocation& alloc, const ChannelState& channels, const SystemParams& params)
    : num_users_(channels.num_users()), alpha_(alloc.time_split)
{
    const auto n = static_cast<std::size_t>(num_users_);
    w1_.resize(n);
    w2_.resize(n);
    a1_.resize(n);
    a2_.resize(n);
    const double omega = alloc.relay_gain;
    const double theta = alloc.power_split;
    const double noise1 = first_subphase_noise(theta, params);
    for (int k = 0; k < num_users_; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double g = channels.power_gain(k);
        w1_[i] = g * alloc.info_power_1[i];
        w2_[i] = g * alloc.info_power_2[i];
        a1_[i] = (1.0 - theta) * omega * g / (omega * g * noise1 + params.user_noise);
        a2_[i] = omega * g / (omega * g * params.relay_noise + params.user_noise);
    }
}

double RateRegion::bound(int k, UserMask subset) const
{
    if (k < 0 || k >= num_users_) {
        throw std::invalid_argument("rate bound: unknown receiver " + std::to_string(k));
    }
    if (subset & user_bit(k)) {
        throw std::invalid_argument("rate bound: receiver " + std::to_string(k) + " is inside its own cut");
    }
    if (num_users_ < 32 && (subset >> num_users_) != 0U) {
        throw std::invalid_argument("rate bound: subset names an unknown user");
    }
    double s1 = 0.0;
    double s2 = 0.0;
    for (UserMask rest = subset; rest != 0U; rest &= rest - 1U) {
        const auto m = static_cast<std::size_t>(std::countr_zero(rest));
        s1 += w1_[m];
        s2 += w2_[m];
    }
    const auto i = static_cast<std::size_t>(k);
    return alpha_ * capacity(a1_[i] * s1) + (1.0 - alpha_) * capacity(a2_[i] * s2);
}

double rate_k_S(const Allocation& alloc, const ChannelState& channels, const SystemParams& params,
                int k, UserMask subset)
{
    return RateRegion(alloc, channels, params).bound(k, subset);
}

RateBoundSet build_rate_bounds(const RateRegion& region, RateBoundMode mode)
{
    const int K = region.num_users();
    RateBoundSet set;
    set.num_users = K;
    set.mode = mode;
    const double alpha = region.time_split();
    const auto& a1 = region.first_scale();
    const auto& a2 = region.second_scale();

    if (mode == RateBoundMode::full_enumeration) {
        if (K > max_full_enumeration_users) {
            throw CapacityError("full rate-region enumeration supports at most "
                                + std::to_string(max_full_enumeration_users) + " users, got "
                                + std::to_string(K));
        }
        const UserMask full = all_users(K);
        std::vector<double> s1(static_cast<std::size_t>(full) + 1U, 0.0);
        std::vector<double> s2(s1.size(), 0.0);
        for (UserMask mask = 1; mask <= full; ++mask) {
            const UserMask low = mask & (~mask + 1U);
            const auto m = static_cast<std::size_t>(std::countr_zero(mask));
            s1[mask] = s1[mask ^ low] + region.first_weight()[m];
            s2[mask] = s2[mask ^ low] + region.second_weight()[m];
        }
        set.bounds.reserve(static_cast<std::size_t>(K) * ((std::size_t{1} << (K - 1)) - 1U));
        for (int k = 0; k < K; ++k) {
            const auto i = static_cast<std::size_t>(k);
            for (UserMask mask = 1; mask <= full; ++mask) {
                if (mask & user_bit(k)) {
                    continue;
                }
                const double value = alpha * capacity(a1[i] * s1[mask]) + (1.0 - alpha) * capacity(a2[i] * s2[mask]);
                set.bounds.push_back({k, mask, value});
            }
        }
        return set;
    }

    if (K > 31) {
        throw CapacityError("rate bounds support at most 31 users");
    }
    for (int k = 0; k < K; ++k) {
        const auto i = static_cast<std::size_t>(k);
        std::vector<int> others;
        for (int m = 0; m < K; ++m) {
            if (m != k) {
                others.push_back(m);
            }
        }
        // Descending received information power at receiver k; ties by index.
        std::stable_sort(others.begin(), others.end(), [&](int a, int b) {
            const auto ia = static_cast<std::size_t>(a);
            const auto ib = static_cast<std::size_t>(b);
            const double wa = alpha * a1[i] * region.first_weight()[ia] + (1.0 - alpha) * a2[i] * region.second_weight()[ia];
            const double wb = alpha * a1[i] * region.first_weight()[ib] + (1.0 - alpha) * a2[i] * region.second_weight()[ib];
            return wa > wb;
        });
        std::vector<UserMask> masks;
        for (int m : others) {
            masks.push_back(user_bit(m));
        }
        UserMask prefix = 0;
        for (std::size_t j = 0; j < others.size(); ++j) {
            prefix |= user_bit(others[j]);
            if (j >= 1) {
                masks.push_back(prefix);
            }
        }
        std::sort(masks.begin(), masks.end());
        masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
        for (UserMask mask : masks) {
            set.bounds.push_back({k, mask, region.bound(k, mask)});
        }
    }
    return set;
}

RateBoundSet build_rate_bounds(const Allocation& alloc, const ChannelState& channels,
                               const SystemParams& params, RateBoundMode mode)
{
    return build_rate_bounds(RateRegion(alloc, channels, params), mode);
}

double sic_sum_rate(const Allocation& alloc, const ChannelState& channels, const SystemParams& params)
{
    const int K = channels.num_users();
    const int weakest = channels.sort_order[0];
    const int second = channels.sort_order[1];
    const UserMask everyone_else = all_users(K) & ~user_bit(weakest);
    const double cut = rate_k_S(alloc, channels, params, weakest, everyone_else);

    double interference1 = 0.0;
    double interference2 = 0.0;
    for (std::size_t n = 2; n < channels.sort_order.size(); ++n) {
        const int m = channels.sort_order[n];
        const auto i = static_cast<std::size_t>(m);
        interference1 += channels.power_gain(m) * alloc.info_power_1[i];
        interference2 += channels.power_gain(m) * alloc.info_power_2[i];
    }
    const double omega = alloc.relay_gain;
    const double theta = alloc.power_split;
    const double alpha = alloc.time_split;
    const double g2 = channels.power_gain(second);
    const double g1 = channels.power_gain(weakest);
    const auto w = static_cast<std::size_t>(weakest);
    const double sinr1 = (1.0 - theta) * omega * g2 * g1 * alloc.info_power_1[w]
        / (omega * g2 * ((1.0 - theta) * interference1 + first_subphase_noise(theta, params)) + params.user_noise);
    const double sinr2 = omega * g2 * g1 * alloc.info_power_2[w]
        / (omega * g2 * (interference2 + params.relay_noise) + params.user_noise);
    return cut + alpha * capacity(sinr1) + (1.0 - alpha) * capacity(sinr2);
}

double AllocationCheck::worst() const
{
    return std::max({budget_violation, peak_violation, relay_violation, range_violation});
}

AllocationCheck check_allocation(const Allocation& alloc, const ChannelState& channels,
                                 const SystemParams& params)
{
    AllocationCheck c;
    const double alpha = alloc.time_split;
    auto outside_unit = [](double v) { return std::max({0.0, -v, v - 1.0}); };
    c.range_violation = std::max({outside_unit(alpha), outside_unit(alloc.power_split), std::max(0.0, -alloc.relay_gain)});
    for (int k = 0; k < params.num_users; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double pe = alloc.energy_power[i];
        const double p1 = alloc.info_power_1[i];
        const double p2 = alloc.info_power_2[i];
        const double budget = params.power(k);
        c.range_violation = std::max({c.range_violation, -pe / budget, -p1 / budget, -p2 / budget});
        const double spent = alpha * (pe + p1) + (1.0 - alpha) * p2;
        c.budget_violation = std::max(c.budget_violation, std::abs(spent - budget) / budget);
        c.peak_violation = std::max(c.peak_violation, (pe + p1 - params.peak_power) / params.peak_power);
    }
    c.relay_violation = std::max(0.0, (relay_power_used(alloc, channels, params) - params.relay_power) / params.relay_power);
    return c;
}

void validate_allocation(const Allocation& alloc, const ChannelState& channels,
                         const SystemParams& params, double tol)
{
    const auto n = static_cast<std::size_t>(params.num_users);
    if (alloc.energy_power.size() != n || alloc.info_power_1.size() != n || alloc.info_power_2.size() != n
        || channels.num_users() != params.num_users) {
        throw std::invalid_argument("allocation: dimensions do not match the network");
    }
    const AllocationCheck c = check_allocation(alloc, channels, params);
    if (c.budget_violation > tol) {
        throw std::invalid_argument("allocation: per-user average power budget not met");
    }
    if (c.peak_violation > tol) {
        throw std::invalid_argument("allocation: peak power exceeded");
    }
    if (c.relay_violation > tol) {
        throw std::invalid_argument("allocation: relay power budget exceeded");
    }
    if (c.range_violation > tol) {
        throw std::invalid_argument("allocation: value outside its admissible range");
    }
}

} // namespace debit
