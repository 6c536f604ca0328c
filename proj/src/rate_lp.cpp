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

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

namespace debit {

namespace {

using numeric::LinearProgram;
using numeric::Relation;
using numeric::SolveStatus;

struct Cut {
    double excess;
    UserMask subset;
    int user;
};

// Users sorted by their SINR scales, weakest first.
std::vector<int> weakest_first(const RateRegion& region)
{
    std::vector<int> order(static_cast<std::size_t>(region.num_users()));
    std::iota(order.begin(), order.end(), 0);
    const auto& a1 = region.first_scale();
    const auto& a2 = region.second_scale();
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        const auto i = static_cast<std::size_t>(x);
        const auto j = static_cast<std::size_t>(y);
        return a2[i] != a2[j] ? a2[i] < a2[j] : a1[i] < a1[j];
    });
    return order;
}

int weakest_outside(const std::vector<int>& order, UserMask subset)
{
    for (int k : order) {
        if (!(subset & user_bit(k))) {
            return k;
        }
    }
    return -1;
}

double subset_sum(const std::vector<double>& v, UserMask subset)
{
    double s = 0.0;
    for (UserMask rest = subset; rest != 0U; rest &= rest - 1U) {
        s += v[static_cast<std::size_t>(std::countr_zero(rest))];
    }
    return s;
}

numeric::LinearConstraint cut_row(std::size_t n, UserMask subset, double bound)
{
    std::vector<double> row(n, 0.0);
    for (UserMask rest = subset; rest != 0U; rest &= rest - 1U) {
        row[static_cast<std::size_t>(std::countr_zero(rest))] = 1.0;
    }
    return {std::move(row), Relation::less_equal, bound};
}

// Every violated cut under full enumeration, evaluated with subset-sum tables.
std::vector<Cut> separate_full(const RateRegion& region, const std::vector<int>& order,
                               const std::vector<double>& rates, double tol)
{
    const int K = region.num_users();
    const UserMask full = all_users(K);
    const std::size_t size = static_cast<std::size_t>(full) + 1U;
    std::vector<double> sr(size, 0.0), s1(size, 0.0), s2(size, 0.0);
    std::vector<Cut> cuts;
    const double alpha = region.time_split();
    for (UserMask mask = 1; mask < full; ++mask) {
        const UserMask low = mask & (~mask + 1U);
        const auto m = static_cast<std::size_t>(std::countr_zero(mask));
        sr[mask] = sr[mask ^ low] + rates[m];
        s1[mask] = s1[mask ^ low] + region.first_weight()[m];
        s2[mask] = s2[mask ^ low] + region.second_weight()[m];
        if (sr[mask] <= tol) {
            continue;
        }
        const auto k = static_cast<std::size_t>(weakest_outside(order, mask));
        const double bound = alpha * capacity(region.first_scale()[k] * s1[mask])
            + (1.0 - alpha) * capacity(region.second_scale()[k] * s2[mask]);
        const double excess = sr[mask] - bound;
        if (excess > tol) {
            cuts.push_back({excess, mask, static_cast<int>(k)});
        }
    }
    return cuts;
}

} // namespace

RateLpResult maximize_sum_rate(const RateRegion& region, const RateLpOptions& options)
{
    const int K = region.num_users();
    if (options.mode == RateBoundMode::full_enumeration && K > max_full_enumeration_users) {
        throw CapacityError("rate LP: full enumeration supports at most " + std::to_string(max_full_enumeration_users)
                            + " users, got " + std::to_string(K));
    }
    if (K > 31) {
        throw CapacityError("rate LP supports at most 31 users");
    }
    const auto n = static_cast<std::size_t>(K);
    const std::vector<int> order = weakest_first(region);
    const std::size_t per_round = options.cuts_per_round > 0 ? options.cuts_per_round : 2 * n;

    LinearProgram lp(n);
    lp.objective.assign(n, 1.0);
    lp.lower.assign(n, 0.0);
    lp.upper.assign(n, 0.0);
    for (int m = 0; m < K; ++m) {
        const int k = weakest_outside(order, user_bit(m));
        lp.upper[static_cast<std::size_t>(m)] = region.bound(k, user_bit(m));
    }
    // A mask is never added twice: a row already in the LP that still looks
    // violated only carries round-off.
    std::unordered_set<UserMask> present;
    for (int k = 0; k < K; ++k) {
        const UserMask others = all_users(K) & ~user_bit(k);
        if (present.insert(others).second) {
            lp.constraints.push_back(cut_row(n, others, region.bound(k, others)));
        }
    }
    numeric::IncrementalLp engine(lp);
    std::size_t rows = lp.constraints.size();

    // Restricted mode draws rows from the restricted family, then audits.
    std::vector<RateBound> pool;
    std::vector<char> used;
    if (options.mode == RateBoundMode::restricted_family) {
        pool = build_rate_bounds(region, RateBoundMode::restricted_family).bounds;
        used.assign(pool.size(), 0);
    }

    RateLpResult result;
    std::mt19937_64 audit_rng(options.audit_seed);
    while (true) {
        const numeric::SolverReport rep = engine.solve();
        ++result.rounds;
        if (rep.status != SolveStatus::optimal) {
            result.status = rep.status;
            return result;
        }
        const std::vector<double>& r = rep.solution;
        std::vector<Cut> cuts;
        if (options.mode == RateBoundMode::full_enumeration) {
            cuts = separate_full(region, order, r, options.tol);
        } else {
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (used[i]) {
                    continue;
                }
                const double excess = subset_sum(r, pool[i].subset) - pool[i].value;
                if (excess > options.tol) {
                    cuts.push_back({excess, pool[i].subset, pool[i].user});
                    used[i] = 1;
                }
            }
            if (cuts.empty()) {
                std::uniform_int_distribution<UserMask> pick(1, all_users(K) - 1U);
                for (std::size_t s = 0; s < options.audit_samples; ++s) {
                    const UserMask mask = pick(audit_rng);
                    const int k = weakest_outside(order, mask);
                    const double excess = subset_sum(r, mask) - region.bound(k, mask);
                    if (excess > options.tol) {
                        cuts.push_back({excess, mask, k});
                    }
                }
                result.audit_additions += std::min(cuts.size(), per_round);
            }
        }
        double leftover = 0.0;
        std::erase_if(cuts, [&](const Cut& c) {
            const bool known = present.contains(c.subset);
            leftover = known ? std::max(leftover, c.excess) : leftover;
            return known;
        });
        result.max_violation = leftover;
        if (cuts.empty()) {
            result.status = SolveStatus::optimal;
            result.rates = r;
            result.sum_rate = std::accumulate(r.begin(), r.end(), 0.0);
            result.rows = rows;
            return result;
        }
        std::stable_sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) { return a.excess > b.excess; });
        cuts.resize(std::min(cuts.size(), per_round));
        for (const Cut& c : cuts) {
            if (!present.insert(c.subset).second) {
                continue;
            }
            engine.add_row(cut_row(n, c.subset, region.bound(c.user, c.subset)));
            ++rows;
        }
    }
}

double max_rate_region_violation(const RateRegion& region, const std::vector<double>& rates)
{
    const int K = region.num_users();
    if (K > max_full_enumeration_users) {
        throw CapacityError("rate-region check supports at most " + std::to_string(max_full_enumeration_users) + " users");
    }
    double worst = 0.0;
    for (double r : rates) {
        worst = std::max(worst, -r);
    }
    const UserMask full = all_users(K);
    for (int k = 0; k < K; ++k) {
        for (UserMask mask = 1; mask <= full; ++mask) {
            if (mask & user_bit(k)) {
                continue;
            }
            worst = std::max(worst, subset_sum(rates, mask) - region.bound(k, mask));
        }
    }
    return worst;
}

} // namespace debit
