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

#ifndef DEBIT_PERFORMANCE_HPP
#define DEBIT_PERFORMANCE_HPP

#include "debit/model.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace debit {

/// Subset of users encoded as a bitmask over user indices.
using UserMask = std::uint32_t;

constexpr UserMask user_bit(int k) { return UserMask{1} << k; }
constexpr UserMask all_users(int num_users) { return (UserMask{1} << num_users) - 1U; }

/// Largest network for which every cut rate can be enumerated.
inline constexpr int max_full_enumeration_users = 16;

/// Thrown when full enumeration is requested beyond max_full_enumeration_users.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// 0.5 log2(1 + x), evaluated through log1p.
double capacity(double x);

/// Power reaching the harvester during the first subphase.
double harvested_power(const Allocation& alloc, const ChannelState& channels, double efficiency);

/// Relay transmit power implied by the allocation; feasible when <= P_R.
double relay_power_used(const Allocation& alloc, const ChannelState& channels, const SystemParams& params);

/// Noise entering the first-subphase information path: (1-theta) sigma_a^2 + sigma_b^2.
double first_subphase_noise(double power_split, const SystemParams& params);

/// R_{k,S}: the rate user k can decode from the users in S across both subphases.
/// Throws std::invalid_argument when k is in S or S names an unknown user.
double rate_k_S(const Allocation& alloc, const ChannelState& channels, const SystemParams& params,
                int k, UserMask subset);

/// Every cut rate R_{k,S} of one allocation, evaluated on demand. Building one
/// costs O(K); each bound costs O(|S|).
class RateRegion {
public:
    RateRegion(const Allocation& alloc, const ChannelState& channels, const SystemParams& params);

    int num_users() const { return num_users_; }
    double bound(int k, UserMask subset) const;

    /// Per-user weights and per-receiver SINR scales: the cut rate is
    /// alpha C(first_scale[k] * sum_S first_weight) + (1-alpha) C(second_scale[k] * sum_S second_weight).
    double time_split() const { return alpha_; }
    const std::vector<double>& first_weight() const { return w1_; }
    const std::vector<double>& second_weight() const { return w2_; }
    const std::vector<double>& first_scale() const { return a1_; }
    const std::vector<double>& second_scale() const { return a2_; }

private:
    int num_users_;
    double alpha_;
    std::vector<double> w1_, w2_, a1_, a2_;
};

enum class RateBoundMode { full_enumeration, restricted_family };

struct RateBound {
    int user;        // receiver k
    UserMask subset; // S, never containing k
    double value;    // R_{k,S}
};

/// Materialized rate-region constraints sum_{m in S} R_m <= R_{k,S}.
struct RateBoundSet {
    int num_users = 0;
    RateBoundMode mode = RateBoundMode::full_enumeration;
    std::vector<RateBound> bounds;
};

/// Full mode stores all K (2^(K-1) - 1) bounds and needs K <= 16 (CapacityError
/// otherwise). Restricted mode stores singletons, the complete sets S_k and, per
/// receiver, the nested subsets obtained by adding users in descending order of
/// received information power.
RateBoundSet build_rate_bounds(const RateRegion& region, RateBoundMode mode);
RateBoundSet build_rate_bounds(const Allocation& alloc, const ChannelState& channels,
                               const SystemParams& params, RateBoundMode mode);

/// Sum-rate of successive interference cancellation with the common decoding
/// order of the sorted channels: the weakest user's complete cut plus the rate
/// the weakest user gets when the second-weakest receiver decodes it first.
double sic_sum_rate(const Allocation& alloc, const ChannelState& channels, const SystemParams& params);

/// Constraint residuals of an allocation, each normalized by its budget.
struct AllocationCheck {
    double budget_violation = 0.0; // max_k |alpha(p_E+p_1) + (1-alpha)p_2 - P_k| / P_k
    double peak_violation = 0.0;   // max_k max(0, p_E+p_1-P_peak) / P_peak
    double relay_violation = 0.0;  // max(0, used - P_R) / P_R
    double range_violation = 0.0;  // negative powers, splits outside [0,1], negative gain

    double worst() const;
};

AllocationCheck check_allocation(const Allocation& alloc, const ChannelState& channels,
                                 const SystemParams& params);

/// Throws std::invalid_argument when any residual of check_allocation exceeds tol.
void validate_allocation(const Allocation& alloc, const ChannelState& channels,
                         const SystemParams& params, double tol = 1e-9);

} // namespace debit

#endif // DEBIT_PERFORMANCE_HPP
