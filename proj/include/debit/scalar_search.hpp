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

#ifndef DEBIT_SCALAR_SEARCH_HPP
#define DEBIT_SCALAR_SEARCH_HPP

#include <cstddef>
#include <functional>

namespace debit::numeric {

enum class ScalarMethod { golden, grid_refine };

struct ScalarResult {
    double x = 0.0;
    double value = 0.0;
    std::size_t evaluations = 0;
};

struct ScalarOptions {
    ScalarMethod method = ScalarMethod::golden;
    double tol = 1e-8;          // bracket width at termination
    std::size_t grid_points = 16; // grid_refine only
};

/// Maximizes f over [lo, hi]. Golden section is exact for unimodal f; for other
/// f the best point seen is returned. grid_refine scans grid_points equally
/// spaced points then runs golden section on the cells around the best one.
/// Endpoints are always evaluated, so boundary maxima are found exactly.
ScalarResult scalar_maximize(const std::function<double(double)>& f, double lo, double hi,
                             const ScalarOptions& options = {});

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
};

/// Bisection for a sign change of a monotone f on [lo, hi]; returns a bracket
/// of width <= tol. Throws std::invalid_argument when f(lo) and f(hi) share a
/// strict sign. An exact zero at an endpoint returns a degenerate bracket.
Bracket bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);

} // namespace debit::numeric

#endif // DEBIT_SCALAR_SEARCH_HPP
