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

#ifndef DEBIT_RATE_LP_HPP
#define DEBIT_RATE_LP_HPP

#include "debit/linear_program.hpp"
#include "debit/performance.hpp"

#include <cstdint>
#include <vector>

// Sum-rate maximization over the multi-access rate region of a fixed
// allocation. Rows are generated lazily: only cuts violated by the current LP
// point are added, and the tightest receiver of a cut is always the weakest
// user outside it because both SINR scales increase with the channel gain.

namespace debit {

struct RateLpOptions {
    RateBoundMode mode = RateBoundMode::full_enumeration;
    double tol = 1e-10;               // accepted cut violation in bits/s/Hz
    std::size_t audit_samples = 1000; // restricted mode only
    std::uint64_t audit_seed = 0x5eedULL;
    std::size_t cuts_per_round = 0;   // 0 picks 2K
};

struct RateLpResult {
    numeric::SolveStatus status = numeric::SolveStatus::infeasible;
    std::vector<double> rates;
    double sum_rate = 0.0;
    double max_violation = 0.0; // largest cut excess found by the final check
    std::size_t rows = 0;
    std::size_t rounds = 0;
    std::size_t audit_additions = 0; // restricted mode: rows added after audits
};

RateLpResult maximize_sum_rate(const RateRegion& region, const RateLpOptions& options = {});

/// Largest excess sum_{m in S} R_m - R_{k,S} over every receiver k and cut S,
/// evaluated directly (no dominance shortcuts). K <= 16.
double max_rate_region_violation(const RateRegion& region, const std::vector<double>& rates);

} // namespace debit

#endif // DEBIT_RATE_LP_HPP
