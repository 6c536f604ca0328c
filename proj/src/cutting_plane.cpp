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

#include "debit/cutting_plane.hpp"

#include <algorithm>
#include <cmath>

namespace debit::numeric {

double SmoothConstraint::separate(std::span<const double> x, std::size_t max_cuts,
                                  std::vector<LinearConstraint>& cuts) const
{
    const double g = value_(x);
    if (g <= 0.0) {
        return 0.0;
    }
    if (max_cuts > 0) {
        std::vector<double> grad(x.size(), 0.0);
        gradient_(x, grad);
        double rhs = -g;
        for (std::size_t j = 0; j < x.size(); ++j) {
            rhs += grad[j] * x[j];
        }
        cuts.push_back({std::move(grad), Relation::less_equal, rhs});
    }
    return g;
}

namespace {

double family_violation(std::span<const ConvexConstraintFamily* const> families, std::span<const double> x)
{
    std::vector<LinearConstraint> none;
    double worst = 0.0;
    for (const ConvexConstraintFamily* fam : families) {
        worst = std::max(worst, fam->separate(x, 0, none));
    }
    return worst;
}

bool any_violated(std::span<const ConvexConstraintFamily* const> families, std::span<const double> x)
{
    return std::any_of(families.begin(), families.end(), [&](const ConvexConstraintFamily* f) { return f->violated(x); });
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        s += a[j] * b[j];
    }
    return s;
}

struct PooledCut {
    LinearConstraint row;
    std::size_t handle = 0;
    std::size_t age = 0;
};

} // namespace

CuttingPlaneReport solve_concave_program(const LinearProgram& base,
                                         std::span<const ConvexConstraintFamily* const> families,
                                         const CuttingPlaneOptions& options,
                                         std::span<const LinearConstraint> seed_cuts)
{
    base.validate();
    CuttingPlaneReport out;
    LinearProgram lp = base;
    const std::size_t n = lp.num_vars();
    if (lp.lower.empty()) {
        lp.lower.assign(n, 0.0);
    }
    if (lp.upper.empty()) {
        lp.upper.assign(n, infinity);
    }
    std::vector<char> boxed_lo(n, 0);
    std::vector<char> boxed_hi(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(lp.lower[j])) {
            lp.lower[j] = -options.box;
            boxed_lo[j] = 1;
        }
        if (!std::isfinite(lp.upper[j])) {
            lp.upper[j] = options.box;
            boxed_hi[j] = 1;
        }
    }
    IncrementalLp engine(lp, options.lp);
    std::vector<PooledCut> pool;
    for (const auto& c : seed_cuts) {
        const std::size_t h = engine.add_row(c);
        pool.push_back({c, h, 0});
    }

    // An interior point is only usable if it really is strictly inside.
    std::vector<double> anchor = options.interior;
    if (anchor.size() != n || any_violated(families, anchor)
        || constraint_violation(base, anchor) > options.lp.tol) {
        anchor.clear();
    }
    std::vector<double> incumbent;
    double incumbent_value = -infinity;
    std::vector<double> probe(n);

    std::vector<LinearConstraint> fresh;
    while (true) {
        SolverReport rep = engine.solve();
        ++out.rounds;
        if (rep.status != SolveStatus::optimal) {
            out.report = std::move(rep);
            return out;
        }
        out.upper_bound = rep.objective_value;

        // Age cuts by their slack at the new iterate.
        for (auto& c : pool) {
            const double lhs = dot(c.row.coeffs, rep.solution);
            const double scale = std::max(1.0, std::abs(c.row.rhs));
            c.age = lhs < c.row.rhs - 1e-7 * scale ? c.age + 1 : 0;
        }

        fresh.clear();
        double worst = 0.0;
        for (const ConvexConstraintFamily* fam : families) {
            worst = std::max(worst, fam->separate(rep.solution, options.cuts_per_round, fresh));
        }
        out.convex_violation = worst;

        if (!anchor.empty() && worst > options.tol) {
            // Walk from the anchor toward the iterate to the boundary.
            double lo = 0.0;
            double hi = 1.0;
            const double step_tol = std::clamp(0.1 * options.tol, 1e-12, 1e-3);
            while (hi - lo > step_tol) {
                const double mid = 0.5 * (lo + hi);
                for (std::size_t j = 0; j < n; ++j) {
                    probe[j] = anchor[j] + mid * (rep.solution[j] - anchor[j]);
                }
                (any_violated(families, probe) ? hi : lo) = mid;
            }
            for (std::size_t j = 0; j < n; ++j) {
                probe[j] = anchor[j] + lo * (rep.solution[j] - anchor[j]);
            }
            const double value = dot(base.objective, probe);
            if (value > incumbent_value) {
                incumbent_value = value;
                incumbent = probe;
            }
            for (std::size_t j = 0; j < n; ++j) {
                probe[j] = anchor[j] + hi * (rep.solution[j] - anchor[j]);
            }
            for (const ConvexConstraintFamily* fam : families) {
                fam->separate(probe, options.cuts_per_round, fresh);
            }
        }

        const double gap_scale = std::max(1.0, std::abs(rep.objective_value));
        const bool converged = worst <= options.tol;
        const bool closed = !incumbent.empty() && rep.objective_value - incumbent_value <= options.tol * gap_scale;
        if (converged || closed || fresh.empty() || out.rounds >= options.max_rounds) {
            if (closed && !converged) {
                rep.solution = incumbent;
                rep.objective_value = incumbent_value;
                worst = family_violation(families, incumbent);
                out.convex_violation = worst;
            }
            if (converged || closed) {
                bool on_box = false;
                for (std::size_t j = 0; j < n; ++j) {
                    const double slack = 1e-9 * options.box;
                    on_box = on_box || (boxed_lo[j] && rep.solution[j] <= -options.box + slack)
                        || (boxed_hi[j] && rep.solution[j] >= options.box - slack);
                }
                rep.status = on_box ? SolveStatus::unbounded : SolveStatus::optimal;
            } else {
                rep.status = SolveStatus::iteration_limit;
            }
            rep.max_constraint_violation = std::max(constraint_violation(base, rep.solution), worst);
            out.report = std::move(rep);
            for (const auto& c : pool) {
                out.active_cuts.push_back(c.row);
            }
            return out;
        }
        std::vector<std::size_t> aged;
        for (const auto& c : pool) {
            if (c.age >= options.max_cut_age) {
                aged.push_back(c.handle);
            }
        }
        if (!aged.empty()) {
            const std::vector<std::size_t> gone = engine.remove_rows(aged);
            std::erase_if(pool, [&](const PooledCut& c) {
                return std::find(gone.begin(), gone.end(), c.handle) != gone.end();
            });
        }
        for (auto& c : fresh) {
            const std::size_t h = engine.add_row(c);
            pool.push_back({std::move(c), h, 0});
        }
        out.cuts += fresh.size();
    }
}

} // namespace debit::numeric
