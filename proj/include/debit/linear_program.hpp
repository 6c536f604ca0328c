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

#ifndef DEBIT_LINEAR_PROGRAM_HPP
#define DEBIT_LINEAR_PROGRAM_HPP

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace debit::numeric {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

enum class Relation { less_equal, equal, greater_equal };

struct LinearConstraint {
    std::vector<double> coeffs;
    Relation relation = Relation::less_equal;
    double rhs = 0.0;
};

/// maximize objective . x subject to the constraints and lower <= x <= upper.
/// Empty bound vectors mean [0, +inf) for every variable.
struct LinearProgram {
    std::vector<double> objective;
    std::vector<LinearConstraint> constraints;
    std::vector<double> lower;
    std::vector<double> upper;

    explicit LinearProgram(std::size_t num_vars = 0);

    std::size_t num_vars() const { return objective.size(); }
    void add(std::vector<double> coeffs, Relation rel, double rhs);
    /// Throws std::invalid_argument on inconsistent dimensions or lo > hi.
    void validate() const;
};

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(SolveStatus status);

struct SolverReport {
    SolveStatus status = SolveStatus::infeasible;
    double objective_value = 0.0;
    std::vector<double> solution;
    /// Largest violation over rows and bounds; each row residual is divided by
    /// max(1, |rhs|, max |coeff|).
    double max_constraint_violation = 0.0;
    std::size_t iterations = 0;
};

struct LpOptions {
    double tol = 1e-9;
    std::size_t max_iterations = 0; // 0 picks 50 (rows + columns) + 1000
    /// Degenerate pivots tolerated under largest-coefficient pricing before the
    /// solver switches to lowest-index pricing for the rest of the phase.
    std::size_t degenerate_switch = 50;
};

/// Two-phase dense-tableau primal simplex. Rows are equilibrated before the
/// solve; pivot choices are deterministic.
SolverReport solve_lp(const LinearProgram& lp, const LpOptions& options = {});

/// Linear program that keeps its final tableau. Inequality rows added after a
/// solve are absorbed by dual simplex pivots from the previous optimal basis;
/// rows whose slack is basic can be dropped without pivoting. Any numerical
/// trouble falls back to a cold solve of the current program.
class IncrementalLp {
public:
    explicit IncrementalLp(LinearProgram lp, const LpOptions& options = {});
    ~IncrementalLp();
    IncrementalLp(IncrementalLp&&) noexcept;
    IncrementalLp& operator=(IncrementalLp&&) noexcept;

    /// Appends an inequality row (not an equality) and returns its handle.
    std::size_t add_row(LinearConstraint row);
    /// Drops a row added earlier if it is currently inactive (slack basic).
    /// Returns false, keeping the row, otherwise.
    bool remove_row(std::size_t handle);
    /// Batch form of remove_row; returns the handles actually removed.
    std::vector<std::size_t> remove_rows(std::span<const std::size_t> handles);
    /// Re-optimizes; the first call, and any call after a non-optimal one,
    /// solves from scratch.
    SolverReport solve();
    /// Current program, including added rows still present.
    const LinearProgram& program() const;

private:
    struct State;
    std::unique_ptr<State> state_;
};

/// Row-relative violation measure used by SolverReport, exposed for callers
/// that certify points themselves.
double constraint_violation(const LinearProgram& lp, const std::vector<double>& x);

} // namespace debit::numeric

#endif // DEBIT_LINEAR_PROGRAM_HPP
