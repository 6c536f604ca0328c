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

#include "debit/scalar_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace debit::numeric {

namespace {

constexpr double inv_phi = 0.6180339887498949;

struct Best {
    double x = 0.0;
    double value = -INFINITY;
    std::size_t evals = 0;

    double eval(const std::function<double(double)>& f, double at)
    {
        const double v = f(at);
        ++evals;
        // Ties keep the smaller argument for determinism.
        if (v > value || (v == value && at < x)) {
            value = v;
            x = at;
        }
        return v;
    }
};

void golden(const std::function<double(double)>& f, double a, double b, double tol, Best& best)
{
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = best.eval(f, c);
    double fd = best.eval(f, d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = best.eval(f, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = best.eval(f, d);
        }
    }
}

} // namespace

ScalarResult scalar_maximize(const std::function<double(double)>& f, double lo, double hi,
                             const ScalarOptions& options)
{
    if (!(lo <= hi)) {
        throw std::invalid_argument("scalar_maximize: empty interval");
    }
    Best best;
    best.eval(f, lo);
    if (hi == lo) {
        return {best.x, best.value, best.evals};
    }
    best.eval(f, hi);
    const double tol = std::max(options.tol, 0.0);
    if (options.method == ScalarMethod::golden) {
        golden(f, lo, hi, tol, best);
    } else {
        const std::size_t n = std::max<std::size_t>(options.grid_points, 3);
        const double step = (hi - lo) / static_cast<double>(n - 1);
        std::vector<double> values(n);
        values.front() = f(lo);
        values.back() = f(hi);
        best.evals += 2;
        std::size_t arg = values.front() >= values.back() ? 0 : n - 1;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double at = lo + step * static_cast<double>(i);
            values[i] = best.eval(f, at);
            if (values[i] > values[arg]) {
                arg = i;
            }
        }
        const double a = lo + step * static_cast<double>(arg == 0 ? 0 : arg - 1);
        const double b = std::min(hi, lo + step * static_cast<double>(std::min(arg + 1, n - 1)));
        golden(f, a, b, tol, best);
    }
    return {best.x, best.value, best.evals};
}

Bracket bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol)
{
    if (!(lo <= hi)) {
        throw std::invalid_argument("bisect_root: empty interval");
    }
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) {
        return {lo, lo};
    }
    if (fhi == 0.0) {
        return {hi, hi};
    }
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw std::invalid_argument("bisect_root: f has the same sign at both ends of the interval");
    }
    const bool rising = flo < 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double fm = f(mid);
        if (fm == 0.0) {
            return {mid, mid};
        }
        if ((fm < 0.0) == rising) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

} // namespace debit::numeric
