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

#ifndef DEBIT_OPTIMIZERS_HPP
#define DEBIT_OPTIMIZERS_HPP

#include "debit/model.hpp"
#include "debit/performance.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace debit {

struct SolveDiagnostics {
    std::string scheme;
    std::size_t inner_solves = 0;   // convex programs solved at fixed (alpha, theta, omega)
    std::size_t lp_solves = 0;      // rate-region LPs outside the convex programs
    std::size_t cutting_rounds = 0; // LPs inside the cutting-plane solver
    std::string note;               // why a solution is infeasible, or which incumbent won
};

struct Solution {
    Allocation alloc;
    std::vector<double> rates;
    double sum_rate = 0.0;
    double harvested = 0.0;
    bool feasible = false;
    SolveDiagnostics diagnostics;
};

/// Resolution and tolerances of the (alpha, theta, omega) search shared by the
/// optimal schemes. The coarse stage scans alpha_points x theta_points cells
/// with a golden search over log(omega) in each; the refine stage then runs
/// coordinate-wise golden searches around the incumbent with halving windows.
struct SearchConfig {
    int alpha_points = 6;
    int theta_points = 3;
    double omega_tol = 0.02;     // golden bracket width on the normalized omega axis
    int refine_rounds = 5;
    double search_tol = 1e-3;    // cutting-plane tolerance while searching
    double polish_tol = 1e-8;    // cutting-plane tolerance for the returned point
    std::size_t max_cut_rounds = 500;

    /// Plain exhaustive grid with n+1 points per axis and no refinement.
    static SearchConfig exhaustive(int n);
};

/// Largest full-enumeration size accepted by the optimal schemes.
inline constexpr int max_optimal_users = 10;

/// Sum-rate maximization under a harvested-power target (optimal scheme).
/// Requires K <= 10.
Solution solve_p1_sum_rate(const SystemParams& params, const ChannelState& channels, const Targets& targets,
                           const SearchConfig& config = {});

/// Energy-first suboptimal scheme: closed-form alpha, powers and relay gain,
/// then the rate LP.
Solution solve_p2_suboptimal(const SystemParams& params, const ChannelState& channels, const Targets& targets);

/// Harvested-power maximization under a sum-rate target (optimal scheme).
/// Requires K <= 10.
Solution solve_p3_harvest(const SystemParams& params, const ChannelState& channels, const Targets& targets,
                          const SearchConfig& config = {});

/// Suboptimal harvested-power maximization: largest alpha_sub whose rate LP
/// still meets the sum-rate target.
Solution solve_p4_suboptimal(const SystemParams& params, const ChannelState& channels, const Targets& targets);

enum class BaselineMode { sum_rate, harvest };

/// Conventional power-splitting SWIPT: no energy symbols (p_E = 0) and no
/// energy subphase (alpha = 1).
Solution solve_baseline_swipt(const SystemParams& params, const ChannelState& channels, const Targets& targets,
                              BaselineMode mode);

/// Allocation of the energy-first scheme for a given alpha_sub, before rates.
/// Needs alpha_sub <= min_k P_k / P_peak.
Allocation suboptimal_allocation(const SystemParams& params, const ChannelState& channels, double alpha_sub);

/// Completes an allocation with LP-optimal rates and its harvested power.
Solution evaluate_allocation(const Allocation& alloc, const SystemParams& params, const ChannelState& channels);

enum class Objective { sum_rate, harvest };

/// Residuals of a solution checked against the model by direct evaluation.
struct Certificate {
    double budget = 0.0;       // relative
    double peak = 0.0;         // relative
    double relay = 0.0;        // relative
    double range = 0.0;
    double rate_region = 0.0;  // bits/s/Hz
    double harvest_target = 0.0; // relative shortfall below P_EH^0 (sum-rate problems)
    double rate_target = 0.0;    // shortfall below R_sum^0 (harvest problems)
    double consistency = 0.0;    // |sum R - sum_rate| and relative |harvested - evaluated|

    double worst() const;
};

Certificate certify(const Solution& solution, const SystemParams& params, const ChannelState& channels,
                    const Targets& targets, Objective objective);

} // namespace debit

#endif // DEBIT_OPTIMIZERS_HPP
