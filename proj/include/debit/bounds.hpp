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

#ifndef DEBIT_BOUNDS_HPP
#define DEBIT_BOUNDS_HPP

#include "debit/model.hpp"
#include "debit/optimizers.hpp"

#include <string>

// Closed-form performance bounds for the symmetric network (P_k = P for all
// users, taken from the first user's budget).

namespace debit::analysis {

/// Large-K approximations of the energy-first scheme.
struct BoundInputs {
    double mu_h = 0.0;     // E|h_k|
    double sigma_h = 0.0;  // std |h_k|
    double c0 = 0.0;
    double xi0 = 0.0;
    double nu0 = 0.0;
    double d1 = 0.0;       // approx. of (sum |h_k|)^2 given feasibility
    double d2 = 0.0;       // approx. of sum |h_k|^2 given feasibility
    double alpha0 = 0.0;
    double omega0 = 0.0;
    double p2_0 = 0.0;
    double p_fs = 0.0;     // probability that the energy-first scheme is feasible
    bool feasible = true;  // alpha0 < min(1, P / P_peak)
};

BoundInputs bound_inputs(const SystemParams& params, const Targets& targets);

struct BoundValue {
    double value = 0.0;
    bool feasible = true;
    bool small_network = false; // K < 8: outside the regime the bound is meant for
    std::string warning;
};

/// Probability that sum_k |h_k| reaches c0, from the central limit theorem.
double feasibility_probability(const SystemParams& params, const Targets& targets);

/// Per-realization sum-rate bound of the energy-first scheme: the weakest
/// receiver decoding everything. Zero for an infeasible solution.
double weakest_receiver_bound(const Solution& energy_first, const ChannelState& channels, const SystemParams& params);

/// Average sum-rate lower bound for large K.
BoundValue avg_sum_rate_lower_bound(const SystemParams& params, const Targets& targets);

enum class Asymptote {
    large_k,            // target-free approximation for large K
    scaled_relay_limit, // its limit when P_R = K P
    fixed_relay_limit,  // its limit when P_R stays fixed
};

std::string to_string(Asymptote variant);

/// Throws std::domain_error for scaled_relay_limit unless P_R = K P.
double asymptotic_sum_rate(const SystemParams& params, const Targets& targets, Asymptote variant);

enum class HarvestBoundForm { exact, simplified };

/// Average harvested-power lower bound under a sum-rate target; the
/// simplified form replaces E1(x) by 1/x and is never larger.
BoundValue avg_harvest_lower_bound(const SystemParams& params, const Targets& targets,
                                HarvestBoundForm form = HarvestBoundForm::exact);

} // namespace debit::analysis

#endif // DEBIT_BOUNDS_HPP
