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

#ifndef DEBIT_CUTTING_PLANE_HPP
#define DEBIT_CUTTING_PLANE_HPP

#include "debit/linear_program.hpp"

#include <functional>
#include <span>
#include <vector>

namespace debit::numeric {

/// A family of convex constraints g_i(x) <= 0, possibly exponentially large,
/// accessed only through separation. Violations must be reported on the scale
/// the caller wants the tolerance applied to.
class ConvexConstraintFamily {
public:
    virtual ~ConvexConstraintFamily() = default;

    /// Returns max_i g_i(x) (or 0 when every member is satisfied) and appends,
    /// for up to max_cuts violated members, a linear inequality coeffs . x <= rhs
    /// that every point with g_i <= 0 satisfies and that x itself violates.
    virtual double separate(std::span<const double> x, std::size_t max_cuts,
                            std::vector<LinearConstraint>& cuts) const = 0;

    /// True when some member is violated at x. Implementations may stop at the
    /// first violated member.
    virtual bool violated(std::span<const double> x) const
    {
        std::vector<LinearConstraint> none;
        return separate(x, 0, none) > 0.0;
    }

    /// Appends tangent inequalities of up to max_cuts members that are
    /// tightest at x, whether or not x violates them. Used to warm-start a
    /// solve from a nearby point. The default adds nothing.
    virtual void support(std::span<const double> /*x*/, std::size_t /*max_cuts*/,
                         std::vector<LinearConstraint>& /*cuts*/) const
    {
    }
};

/// Single differentiable convex constraint given by value and gradient.
class SmoothConstraint final : public ConvexConstraintFamily {
public:
    using Value = std::function<double(std::span<const double>)>;
    using Gradient = std::function<void(std::span<const double>, std::span<double>)>;

    SmoothConstraint(Value value, Gradient gradient) : value_(std::move(value)), gradient_(std::move(gradient)) {}

    double separate(std::span<const double> x, std::size_t max_cuts,
                    std::vector<LinearConstraint>& cuts) const override;

private:
    Value value_;
    Gradient gradient_;
};

struct CuttingPlaneOptions {
    double tol = 1e-7;            // accepted constraint violation at the LP iterate
    std::size_t max_rounds = 500; // cutting rounds (one LP per round)
    std::size_t cuts_per_round = 4; // per family, at the iterate and at the boundary point
    /// Variables with an infinite bound are boxed at +/- this value while
    /// cutting; an answer on the artificial box is reported unbounded.
    double box = 1e6;
    /// Cuts left slack for this many consecutive rounds are dropped from the LP.
    std::size_t max_cut_age = 3;
    /// Optional point strictly inside every family and satisfying the base
    /// rows. When given, cuts are also taken where the segment from it to the
    /// LP iterate leaves the feasible set, and the best such boundary point is
    /// kept as a feasible incumbent.
    std::vector<double> interior;
    LpOptions lp{};
};

struct CuttingPlaneReport {
    SolverReport report;          // returned point, violation measured on the true constraints
    std::size_t rounds = 0;
    std::size_t cuts = 0;
    double convex_violation = 0.0;
    double upper_bound = 0.0;     // last relaxation value, an upper bound on the optimum
    std::vector<LinearConstraint> active_cuts; // cuts in the final relaxation, reusable as a warm start
};

/// Maximizes the linear objective of base subject to its rows and to every
/// family, by Kelley cutting planes. Returns optimal once the LP iterate
/// violates no family by more than tol, or, with an interior point, once the
/// feasible incumbent is within tol (relative) of the relaxation bound; the
/// incumbent is then returned. An infeasible relaxation proves the program
/// infeasible. Extra cuts (valid inequalities) may seed the model.
CuttingPlaneReport solve_concave_program(const LinearProgram& base,
                                         std::span<const ConvexConstraintFamily* const> families,
                                         const CuttingPlaneOptions& options = {},
                                         std::span<const LinearConstraint> seed_cuts = {});

} // namespace debit::numeric

#endif // DEBIT_CUTTING_PLANE_HPP
