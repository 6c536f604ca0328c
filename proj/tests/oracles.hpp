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

#ifndef DEBIT_TESTS_ORACLES_HPP
#define DEBIT_TESTS_ORACLES_HPP

// Independent reference implementations used only by the tests. None of them
// calls into the library's solvers or physical-layer evaluators.

#include "debit/model.hpp"

#include <cstdint>
#include <vector>

namespace oracle {

/// Phi(x) by 50-digit double-exponential quadrature of the normal density.
double normal_cdf(double x);
/// E1(x) by 50-digit double-exponential quadrature.
double exp_integral_e1(double x);

/// max c.x subject to A x <= b, by enumerating every vertex (all square
/// subsystems). Returns -infinity when no vertex is feasible. Small n only.
struct VertexResult {
    double value;
    std::vector<double> x;
    std::size_t vertices;
};
VertexResult lp_vertex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                           const std::vector<double>& c, double feas_tol = 1e-9);

/// Direct evaluation of the physical model from its defining formulas.
double capacity(double x);
double harvested(const debit::Allocation& a, const debit::ChannelState& ch, double eta);
double relay_used(const debit::Allocation& a, const debit::ChannelState& ch, const debit::SystemParams& p);
/// Cut rate of receiver k decoding the users whose bit is set in subset.
double cut_rate(const debit::Allocation& a, const debit::ChannelState& ch, const debit::SystemParams& p, int k,
                std::uint32_t subset);
/// Largest sum-rate over the rate region of an allocation, by vertex
/// enumeration over every cut constraint. K <= 4.
double max_sum_rate(const debit::Allocation& a, const debit::ChannelState& ch, const debit::SystemParams& p);

/// Lower bound on the optimal sum-rate under a harvest target, from a dense
/// grid over symmetric allocations: time split, power split, share of the
/// budget spent in the first subphase and energy fraction of it, with the
/// relay gain set to its largest admissible value. n points per axis.
double p1_symmetric_grid(const debit::SystemParams& p, const debit::ChannelState& ch, double harvest_target, int n);

/// Mean of N(mu, sigma^2) conditioned on exceeding zeta, by rejection
/// sampling; returns the mean and its standard error.
struct McEstimate {
    double mean;
    double stderr_of_mean;
};
McEstimate truncated_normal_mean(double zeta, double mu, double sigma, std::size_t samples, std::uint64_t seed);

} // namespace oracle

#endif // DEBIT_TESTS_ORACLES_HPP
