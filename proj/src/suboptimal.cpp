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
#include "debit/rate_lp.hpp"
#include "debit/scalar_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace debit {

namespace {

double sum_magnitudes(const ChannelState& channels)
{
    return std::accumulate(channels.magnitudes.begin(), channels.magnitudes.end(), 0.0);
}

double largest_suboptimal_alpha(const SystemParams& params)
{
    return std::min(1.0, params.min_user_power() / params.peak_power);
}

// Sum-rate target check with a relative slack that absorbs LP round-off.
bool meets_rate(double sum_rate, double target)
{
    return sum_rate >= target - 1e-12 * std::max(1.0, target);
}

void zero_rates(Solution& s)
{
    s.feasible = false;
    s.rates.assign(static_cast<std::size_t>(s.alloc.num_users()), 0.0);
    s.sum_rate = 0.0;
}

Allocation baseline_allocation(const SystemParams& params, const ChannelState& channels, double theta)
{
    const int K = params.num_users;
    Allocation a = Allocation::zeros(K);
    a.time_split = 1.0;
    a.power_split = theta;
    double received = 0.0;
    for (int k = 0; k < K; ++k) {
        a.info_power_1[static_cast<std::size_t>(k)] = params.power(k);
        received += params.power(k) * channels.power_gain(k);
    }
    a.relay_gain = params.relay_power / ((1.0 - theta) * received + first_subphase_noise(theta, params));
    return a;
}

} // namespace

Allocation suboptimal_allocation(const SystemParams& params, const ChannelState& channels, double alpha_sub)
{
    const int K = params.num_users;
    if (alpha_sub < 0.0 || alpha_sub > largest_suboptimal_alpha(params) * (1.0 + 1e-12)) {
        throw std::invalid_argument("suboptimal allocation: alpha_sub outside [0, min P_k / P_peak]");
    }
    Allocation a = Allocation::zeros(K);
    a.time_split = alpha_sub;
    a.power_split = 1.0;
    double received = 0.0;
    for (int k = 0; k < K; ++k) {
        const auto i = static_cast<std::size_t>(k);
        a.energy_power[i] = params.peak_power;
        a.info_power_2[i] = alpha_sub < 1.0 ? std::max(0.0, (params.power(k) - alpha_sub * params.peak_power) / (1.0 - alpha_sub)) : 0.0;
        received += a.info_power_2[i] * channels.power_gain(k);
    }
    // Relay budget made tight including the conversion noise of the first subphase.
    a.relay_gain = params.relay_power
        / (alpha_sub * first_subphase_noise(1.0, params) + (1.0 - alpha_sub) * (received + params.relay_noise));
    return a;
}

Solution evaluate_allocation(const Allocation& alloc, const SystemParams& params, const ChannelState& channels)
{
    Solution s;
    s.alloc = alloc;
    const RateRegion region(alloc, channels, params);
    RateLpOptions opt;
    opt.mode = params.num_users <= max_full_enumeration_users ? RateBoundMode::full_enumeration
                                                              : RateBoundMode::restricted_family;
    const RateLpResult lp = maximize_sum_rate(region, opt);
    if (lp.status != numeric::SolveStatus::optimal) {
        throw std::runtime_error("rate LP failed with status " + numeric::to_string(lp.status));
    }
    s.rates = lp.rates;
    s.sum_rate = lp.sum_rate;
    s.harvested = harvested_power(alloc, channels, params.efficiency);
    s.feasible = true;
    s.diagnostics.lp_solves = 1;
    return s;
}

Solution solve_p2_suboptimal(const SystemParams& params, const ChannelState& channels, const Targets& targets)
{
    params.validate();
    targets.validate();
    const double alpha_max = largest_suboptimal_alpha(params);
    const double coherent = sum_magnitudes(channels);
    const double denom = params.efficiency * params.peak_power * coherent * coherent;
    const double alpha = targets.harvest == 0.0 ? 0.0 : (denom > 0.0 ? targets.harvest / denom : INFINITY);

    if (!(alpha <= alpha_max)) {
        Solution s;
        s.alloc = suboptimal_allocation(params, channels, alpha_max);
        s.harvested = harvested_power(s.alloc, channels, params.efficiency);
        zero_rates(s);
        s.diagnostics.scheme = "p2";
        s.diagnostics.note = "harvest target above the energy-first maximum";
        return s;
    }
    Solution s = evaluate_allocation(suboptimal_allocation(params, channels, alpha), params, channels);
    s.diagnostics.scheme = "p2";
    return s;
}

Solution solve_p4_suboptimal(const SystemParams& params, const ChannelState& channels, const Targets& targets)
{
    params.validate();
    targets.validate();
    const double alpha_max = largest_suboptimal_alpha(params);
    std::size_t lps = 0;
    auto solve_at = [&](double alpha) {
        ++lps;
        return evaluate_allocation(suboptimal_allocation(params, channels, alpha), params, channels);
    };

    Solution best = solve_at(alpha_max);
    if (!meets_rate(best.sum_rate, targets.sum_rate)) {
        Solution at_zero = solve_at(0.0);
        if (!meets_rate(at_zero.sum_rate, targets.sum_rate)) {
            at_zero.harvested = 0.0;
            zero_rates(at_zero);
            at_zero.diagnostics.scheme = "p4";
            at_zero.diagnostics.lp_solves = lps;
            at_zero.diagnostics.note = "sum-rate target unreachable even without an energy subphase";
            return at_zero;
        }
        // Harvest grows with alpha while the sum-rate shrinks; find the knee.
        const numeric::Bracket knee = numeric::bisect_root(
            [&](double alpha) { return meets_rate(solve_at(alpha).sum_rate, targets.sum_rate) ? -1.0 : 1.0; },
            0.0, alpha_max, 1e-11 * std::max(alpha_max, 1e-300));
        best = solve_at(knee.lo);
        if (!meets_rate(best.sum_rate, targets.sum_rate)) {
            best = std::move(at_zero);
        }
    }
    best.diagnostics.scheme = "p4";
    best.diagnostics.lp_solves = lps;
    return best;
}

Solution solve_baseline_swipt(const SystemParams& params, const ChannelState& channels, const Targets& targets,
                              BaselineMode mode)
{
    params.validate();
    targets.validate();
    double received = 0.0;
    for (int k = 0; k < params.num_users; ++k) {
        received += params.power(k) * channels.power_gain(k);
    }
    const double full_harvest = params.efficiency * received; // alpha = theta = 1
    Solution s;
    if (mode == BaselineMode::sum_rate) {
        const double theta = targets.harvest == 0.0 ? 0.0 : (full_harvest > 0.0 ? targets.harvest / full_harvest : INFINITY);
        if (!(theta <= 1.0)) {
            s.alloc = baseline_allocation(params, channels, 1.0);
            s.harvested = harvested_power(s.alloc, channels, params.efficiency);
            zero_rates(s);
            s.diagnostics.note = "harvest target above the power-splitting maximum";
        } else {
            s = evaluate_allocation(baseline_allocation(params, channels, theta), params, channels);
        }
        s.diagnostics.scheme = "baseline";
        return s;
    }

    std::size_t lps = 0;
    auto solve_at = [&](double theta) {
        ++lps;
        return evaluate_allocation(baseline_allocation(params, channels, theta), params, channels);
    };
    s = solve_at(1.0);
    if (!meets_rate(s.sum_rate, targets.sum_rate)) {
        Solution at_zero = solve_at(0.0);
        if (!meets_rate(at_zero.sum_rate, targets.sum_rate)) {
            at_zero.harvested = 0.0;
            zero_rates(at_zero);
            at_zero.diagnostics.scheme = "baseline";
            at_zero.diagnostics.lp_solves = lps;
            at_zero.diagnostics.note = "sum-rate target unreachable by power splitting";
            return at_zero;
        }
        const numeric::Bracket knee = numeric::bisect_root(
            [&](double theta) { return meets_rate(solve_at(theta).sum_rate, targets.sum_rate) ? -1.0 : 1.0; },
            0.0, 1.0, 1e-11);
        s = solve_at(knee.lo);
        if (!meets_rate(s.sum_rate, targets.sum_rate)) {
            s = std::move(at_zero);
        }
    }
    s.diagnostics.scheme = "baseline";
    s.diagnostics.lp_solves = lps;
    return s;
}

double Certificate::worst() const
{
    return std::max({budget, peak, relay, range, rate_region, harvest_target, rate_target, consistency});
}

Certificate certify(const Solution& solution, const SystemParams& params, const ChannelState& channels,
                    const Targets& targets, Objective objective)
{
    Certificate c;
    const AllocationCheck check = check_allocation(solution.alloc, channels, params);
    c.budget = check.budget_violation;
    c.peak = check.peak_violation;
    c.relay = check.relay_violation;
    c.range = check.range_violation;

    const double sum = std::accumulate(solution.rates.begin(), solution.rates.end(), 0.0);
    c.consistency = std::abs(sum - solution.sum_rate);
    if (!solution.feasible) {
        for (double r : solution.rates) {
            c.consistency = std::max(c.consistency, std::abs(r));
        }
        return c;
    }
    const double evaluated = harvested_power(solution.alloc, channels, params.efficiency);
    c.consistency = std::max(c.consistency, std::abs(evaluated - solution.harvested) / std::max(evaluated, 1e-300));

    const RateRegion region(solution.alloc, channels, params);
    const int K = params.num_users;
    if (K <= max_full_enumeration_users) {
        c.rate_region = std::max(0.0, max_rate_region_violation(region, solution.rates));
    } else {
        std::mt19937_64 rng(0xce27ULL);
        std::uniform_int_distribution<UserMask> pick(1, all_users(K) - 1U);
        for (int s = 0; s < 4096; ++s) {
            const UserMask mask = pick(rng);
            double lhs = 0.0;
            for (int m = 0; m < K; ++m) {
                if (mask & user_bit(m)) {
                    lhs += solution.rates[static_cast<std::size_t>(m)];
                }
            }
            for (int k = 0; k < K; ++k) {
                if (!(mask & user_bit(k))) {
                    c.rate_region = std::max(c.rate_region, lhs - region.bound(k, mask));
                }
            }
        }
    }
    if (objective == Objective::sum_rate && targets.harvest > 0.0) {
        c.harvest_target = std::max(0.0, (targets.harvest - evaluated) / targets.harvest);
    }
    if (objective == Objective::harvest) {
        c.rate_target = std::max(0.0, targets.sum_rate - sum);
    }
    return c;
}

} // namespace debit
