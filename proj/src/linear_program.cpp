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

#include "debit/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace debit::numeric {

LinearProgram::LinearProgram(std::size_t num_vars) : objective(num_vars, 0.0) {}

void LinearProgram::add(std::vector<double> coeffs, Relation rel, double rhs)
{
    constraints.push_back({std::move(coeffs), rel, rhs});
}

void LinearProgram::validate() const
{
    const std::size_t n = num_vars();
    if (!lower.empty() && lower.size() != n) {
        throw std::invalid_argument("linear program: lower bound vector has the wrong length");
    }
    if (!upper.empty() && upper.size() != n) {
        throw std::invalid_argument("linear program: upper bound vector has the wrong length");
    }
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = lower.empty() ? 0.0 : lower[j];
        const double hi = upper.empty() ? infinity : upper[j];
        if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == infinity || hi == -infinity) {
            throw std::invalid_argument("linear program: invalid bounds for variable " + std::to_string(j));
        }
        if (!std::isfinite(objective[j])) {
            throw std::invalid_argument("linear program: non-finite objective coefficient");
        }
    }
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const auto& c = constraints[i];
        if (c.coeffs.size() != n) {
            throw std::invalid_argument("linear program: constraint " + std::to_string(i) + " has the wrong length");
        }
        if (!std::isfinite(c.rhs) || !std::all_of(c.coeffs.begin(), c.coeffs.end(), [](double v) { return std::isfinite(v); })) {
            throw std::invalid_argument("linear program: non-finite data in constraint " + std::to_string(i));
        }
    }
}

std::string to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration-limit";
    }
    return "unknown";
}

double constraint_violation(const LinearProgram& lp, const std::vector<double>& x)
{
    double worst = 0.0;
    for (const auto& c : lp.constraints) {
        double lhs = 0.0;
        double scale = std::max(1.0, std::abs(c.rhs));
        for (std::size_t j = 0; j < x.size(); ++j) {
            lhs += c.coeffs[j] * x[j];
            scale = std::max(scale, std::abs(c.coeffs[j]));
        }
        double v = 0.0;
        switch (c.relation) {
        case Relation::less_equal: v = lhs - c.rhs; break;
        case Relation::greater_equal: v = c.rhs - lhs; break;
        case Relation::equal: v = std::abs(lhs - c.rhs); break;
        }
        worst = std::max(worst, v / scale);
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double lo = lp.lower.empty() ? 0.0 : lp.lower[j];
        const double hi = lp.upper.empty() ? infinity : lp.upper[j];
        if (std::isfinite(lo)) {
            worst = std::max(worst, (lo - x[j]) / std::max(1.0, std::abs(lo)));
        }
        if (std::isfinite(hi)) {
            worst = std::max(worst, (x[j] - hi) / std::max(1.0, std::abs(hi)));
        }
    }
    return worst;
}

namespace {

// How an original variable is expressed through nonnegative tableau columns:
// x = offset + sign * y[col] - (neg_col >= 0 ? y[neg_col] : 0).
struct VarMap {
    double offset = 0.0;
    double sign = 1.0;
    int col = -1;
    int neg_col = -1;
};

constexpr std::size_t none = static_cast<std::size_t>(-1);

// Dense simplex tableau. Rows are stored with spare column capacity so that
// slack columns for new cuts can be appended without moving the data.
class Tableau {
public:
    Tableau() = default;
    Tableau(std::size_t rows, std::size_t cols)
        : m_(rows), n_(cols), cap_(cols), t_(rows * cols, 0.0), rhs_(rows, 0.0), basis_(rows, 0)
    {
    }

    double& at(std::size_t i, std::size_t j) { return t_[i * cap_ + j]; }
    double at(std::size_t i, std::size_t j) const { return t_[i * cap_ + j]; }
    double& rhs(std::size_t i) { return rhs_[i]; }
    double rhs(std::size_t i) const { return rhs_[i]; }
    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    std::vector<std::size_t>& basis() { return basis_; }
    const std::vector<std::size_t>& basis() const { return basis_; }

    // v += f * row i, with v laid out as columns followed by the rhs.
    void axpy_row(std::vector<double>& v, std::size_t i, double f) const
    {
        const double* row = &t_[i * cap_];
        for (std::size_t j = 0; j < n_; ++j) {
            v[j] += f * row[j];
        }
        v[n_] += f * rhs_[i];
    }

    void pivot(std::size_t r, std::size_t e, std::vector<double>& cost)
    {
        double* pr = &t_[r * cap_];
        const double inv = 1.0 / pr[e];
        for (std::size_t j = 0; j < n_; ++j) {
            pr[j] *= inv;
        }
        rhs_[r] *= inv;
        pr[e] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) {
                continue;
            }
            double* row = &t_[i * cap_];
            const double f = row[e];
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < n_; ++j) {
                row[j] -= f * pr[j];
            }
            rhs_[i] -= f * rhs_[r];
            row[e] = 0.0;
        }
        const double f = cost[e];
        if (f != 0.0) {
            axpy_row(cost, r, -f);
            cost[e] = 0.0;
        }
        basis_[r] = e;
    }

    // New zero column after the existing ones.
    void append_column()
    {
        if (n_ == cap_) {
            reshape(std::max<std::size_t>(2 * cap_, 16));
        }
        for (std::size_t i = 0; i < m_; ++i) {
            t_[i * cap_ + n_] = 0.0;
        }
        ++n_;
    }

    // entries: n_ coefficients followed by the rhs.
    void append_row(const std::vector<double>& entries, std::size_t basic)
    {
        t_.resize((m_ + 1) * cap_, 0.0);
        std::copy_n(entries.begin(), n_, &t_[m_ * cap_]);
        rhs_.push_back(entries[n_]);
        basis_.push_back(basic);
        ++m_;
    }

    // Removes the flagged rows and columns in one pass; basis entries are
    // renumbered, so no removed column may be basic in a kept row.
    void erase(const std::vector<char>& drop_row, const std::vector<char>& drop_col)
    {
        std::vector<std::size_t> renum(n_, 0);
        std::size_t nc = 0;
        for (std::size_t j = 0; j < n_; ++j) {
            renum[j] = nc;
            nc += drop_col[j] ? 0U : 1U;
        }
        std::size_t mr = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (drop_row[i]) {
                continue;
            }
            const double* src = &t_[i * cap_];
            double* dst = &t_[mr * cap_];
            for (std::size_t j = 0; j < n_; ++j) {
                if (!drop_col[j]) {
                    dst[renum[j]] = src[j];
                }
            }
            rhs_[mr] = rhs_[i];
            basis_[mr] = renum[basis_[i]];
            ++mr;
        }
        m_ = mr;
        n_ = nc;
        t_.resize(m_ * cap_);
        rhs_.resize(m_);
        basis_.resize(m_);
    }

private:
    void reshape(std::size_t cap)
    {
        std::vector<double> t(m_ * cap, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            std::copy_n(&t_[i * cap_], n_, &t[i * cap]);
        }
        t_ = std::move(t);
        cap_ = cap;
    }

    std::size_t m_ = 0, n_ = 0, cap_ = 0;
    std::vector<double> t_;
    std::vector<double> rhs_;
    std::vector<std::size_t> basis_;
};

enum class PhaseResult { optimal, unbounded, iteration_limit };

// Maximizes the phase objective whose reduced costs are held in cost (last
// entry is minus the objective value). Columns flagged in blocked never enter.
PhaseResult run_phase(Tableau& tab, std::vector<double>& cost, const std::vector<char>& blocked,
                      const LpOptions& options, std::size_t max_iter, std::size_t& iterations)
{
    const std::size_t n = tab.cols();
    const std::size_t m = tab.rows();
    double cost_scale = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        cost_scale = std::max(cost_scale, std::abs(cost[j]));
    }
    const double dual_tol = 1e-11 * cost_scale;
    const double pivot_tol = 1e-11;
    bool lowest_index = false;
    std::size_t degenerate = 0;

    while (true) {
        std::size_t enter = n;
        double best = dual_tol;
        for (std::size_t j = 0; j < n; ++j) {
            if (blocked[j] || cost[j] <= dual_tol) {
                continue;
            }
            if (lowest_index) {
                enter = j;
                break;
            }
            if (cost[j] > best) {
                best = cost[j];
                enter = j;
            }
        }
        if (enter == n) {
            return PhaseResult::optimal;
        }
        if (iterations >= max_iter) {
            return PhaseResult::iteration_limit;
        }

        // Harris two-pass ratio test: relax the bound by a small feasibility
        // tolerance, then pick the largest pivot among rows within the relaxed step.
        double col_scale = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            col_scale = std::max(col_scale, std::abs(tab.at(i, enter)));
        }
        const double piv_min = std::max(pivot_tol, 1e-9 * col_scale);
        const double feas_tol = 1e-10;
        double relaxed = infinity;
        for (std::size_t i = 0; i < m; ++i) {
            const double a = tab.at(i, enter);
            if (a > piv_min) {
                relaxed = std::min(relaxed, (std::max(tab.rhs(i), 0.0) + feas_tol) / a);
            }
        }
        std::size_t leave = m;
        double best_ratio = infinity;
        double best_pivot = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double a = tab.at(i, enter);
            if (a <= piv_min) {
                continue;
            }
            const double ratio = std::max(tab.rhs(i), 0.0) / a;
            if (ratio > relaxed) {
                continue;
            }
            const bool better = leave == m ||
                                (lowest_index ? tab.basis()[i] < tab.basis()[leave] : a > best_pivot);
            if (better) {
                leave = i;
                best_ratio = ratio;
                best_pivot = a;
            }
        }
        if (leave == m) {
            return PhaseResult::unbounded;
        }
        if (best_ratio <= 1e-12) {
            if (++degenerate > options.degenerate_switch) {
                lowest_index = true;
            }
        } else {
            degenerate = 0;
        }
        tab.pivot(leave, enter, cost);
        ++iterations;
    }
}

// Dual simplex from a dual feasible basis (no positive reduced cost): drive
// negative basic values out until the basis is primal feasible.
PhaseResult run_dual(Tableau& tab, std::vector<double>& cost, const std::vector<char>& blocked,
                     std::size_t max_iter, std::size_t& iterations, bool& infeasible)
{
    const std::size_t n = tab.cols();
    const std::size_t m = tab.rows();
    const double feas_tol = 1e-10;
    infeasible = false;
    while (true) {
        std::size_t leave = m;
        double most = -feas_tol;
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.rhs(i) < most) {
                most = tab.rhs(i);
                leave = i;
            }
        }
        if (leave == m) {
            return PhaseResult::optimal;
        }
        if (iterations >= max_iter) {
            return PhaseResult::iteration_limit;
        }
        double row_scale = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!blocked[j]) {
                row_scale = std::max(row_scale, std::abs(tab.at(leave, j)));
            }
        }
        const double piv_min = std::max(1e-11, 1e-9 * row_scale);
        const double dual_tol = 1e-11;
        // Harris two-pass ratio test on the reduced costs.
        double relaxed = infinity;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = tab.at(leave, j);
            if (!blocked[j] && a < -piv_min) {
                relaxed = std::min(relaxed, (std::max(-cost[j], 0.0) + dual_tol) / -a);
            }
        }
        std::size_t enter = n;
        double best = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double a = tab.at(leave, j);
            if (blocked[j] || a >= -piv_min) {
                continue;
            }
            if (std::max(-cost[j], 0.0) / -a <= relaxed && -a > best) {
                best = -a;
                enter = j;
            }
        }
        if (enter == n) {
            infeasible = true;
            return PhaseResult::optimal;
        }
        tab.pivot(leave, enter, cost);
        ++iterations;
    }
}

} // namespace

struct IncrementalLp::State {
    LinearProgram lp;
    LpOptions options;
    std::vector<VarMap> map;
    std::size_t nstruct = 0;
    Tableau tab;
    std::vector<double> cost;
    std::vector<char> blocked;
    std::vector<std::size_t> slack_of; // per constraint of lp, none for equalities
    std::vector<std::size_t> handle_of; // per constraint of lp, none for base rows
    std::size_t next_handle = 0;
    bool warm = false; // tableau holds an optimal basis of lp

    std::size_t max_iter() const
    {
        return options.max_iterations > 0 ? options.max_iterations : 50 * (tab.rows() + tab.cols()) + 1000;
    }

    // Row of a constraint in tableau columns: returns false if it has no
    // nonzero coefficient, in which case only b matters.
    bool to_columns(const LinearConstraint& c, std::vector<double>& a, double& b) const
    {
        a.assign(nstruct, 0.0);
        b = c.rhs;
        for (std::size_t j = 0; j < map.size(); ++j) {
            const double coef = c.coeffs[j];
            if (coef == 0.0) {
                continue;
            }
            const VarMap& v = map[j];
            b -= coef * v.offset;
            a[static_cast<std::size_t>(v.col)] += coef * v.sign;
            if (v.neg_col >= 0) {
                a[static_cast<std::size_t>(v.neg_col)] -= coef;
            }
        }
        double scale = 0.0;
        for (double v : a) {
            scale = std::max(scale, std::abs(v));
        }
        if (scale == 0.0) {
            return false;
        }
        for (double& v : a) {
            v /= scale;
        }
        b /= scale;
        return true;
    }

    SolveStatus cold(std::size_t& iterations);
    SolverReport report(PhaseResult res, std::size_t iterations) const;
};

SolveStatus IncrementalLp::State::cold(std::size_t& iterations)
{
    warm = false;
    const std::size_t n = lp.num_vars();
    struct Row {
        std::vector<double> a;
        Relation rel;
        double b;
        std::size_t constraint; // index into lp.constraints, none for bound rows
    };

    map.assign(n, VarMap{});
    std::size_t ncols = 0;
    std::vector<std::pair<std::size_t, double>> upper_rows; // (column, width)
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = lp.lower.empty() ? 0.0 : lp.lower[j];
        const double hi = lp.upper.empty() ? infinity : lp.upper[j];
        VarMap& v = map[j];
        if (std::isfinite(lo)) {
            v.offset = lo;
            v.col = static_cast<int>(ncols++);
            if (std::isfinite(hi)) {
                upper_rows.emplace_back(static_cast<std::size_t>(v.col), hi - lo);
            }
        } else if (std::isfinite(hi)) {
            v.offset = hi;
            v.sign = -1.0;
            v.col = static_cast<int>(ncols++);
        } else {
            v.col = static_cast<int>(ncols++);
            v.neg_col = static_cast<int>(ncols++);
        }
    }
    nstruct = ncols;

    std::vector<Row> rows;
    auto push_row = [&](std::vector<double> a, Relation rel, double b, std::size_t constraint) {
        if (b < 0.0) {
            for (double& v : a) {
                v = -v;
            }
            b = -b;
            if (rel == Relation::less_equal) {
                rel = Relation::greater_equal;
            } else if (rel == Relation::greater_equal) {
                rel = Relation::less_equal;
            }
        }
        rows.push_back({std::move(a), rel, b, constraint});
    };
    slack_of.assign(lp.constraints.size(), none);
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        const auto& c = lp.constraints[i];
        std::vector<double> a;
        double b = 0.0;
        if (!to_columns(c, a, b)) {
            const double slack = 1e-12 * std::max(1.0, std::abs(b));
            const bool ok = (c.relation == Relation::less_equal && b >= -slack)
                || (c.relation == Relation::greater_equal && b <= slack)
                || (c.relation == Relation::equal && std::abs(b) <= slack);
            if (!ok) {
                return SolveStatus::infeasible;
            }
            continue;
        }
        push_row(std::move(a), c.relation, b, i);
    }
    for (const auto& [col, width] : upper_rows) {
        std::vector<double> a(nstruct, 0.0);
        a[col] = 1.0;
        push_row(std::move(a), Relation::less_equal, width, none);
    }

    const std::size_t m = rows.size();
    std::size_t nslack = 0;
    std::size_t nart = 0;
    for (const auto& r : rows) {
        nslack += r.rel != Relation::equal ? 1U : 0U;
        nart += r.rel != Relation::less_equal ? 1U : 0U;
    }
    const std::size_t total = nstruct + nslack + nart;
    tab = Tableau(m, total);
    std::vector<char> is_art(total, 0);
    {
        std::size_t s = nstruct;
        std::size_t a = nstruct + nslack;
        for (std::size_t i = 0; i < m; ++i) {
            const Row& r = rows[i];
            for (std::size_t j = 0; j < nstruct; ++j) {
                tab.at(i, j) = r.a[j];
            }
            tab.rhs(i) = r.b;
            if (r.rel != Relation::equal && r.constraint != none) {
                slack_of[r.constraint] = s;
            }
            if (r.rel == Relation::less_equal) {
                tab.at(i, s) = 1.0;
                tab.basis()[i] = s++;
            } else {
                if (r.rel == Relation::greater_equal) {
                    tab.at(i, s++) = -1.0;
                }
                tab.at(i, a) = 1.0;
                is_art[a] = 1;
                tab.basis()[i] = a++;
            }
        }
    }

    blocked.assign(total, 0);
    if (nart > 0) {
        cost.assign(total + 1, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (is_art[tab.basis()[i]]) {
                tab.axpy_row(cost, i, 1.0);
            }
        }
        for (std::size_t j = 0; j < total; ++j) {
            if (is_art[j]) {
                cost[j] = 0.0;
            }
        }
        const PhaseResult res = run_phase(tab, cost, blocked, options, max_iter(), iterations);
        if (res == PhaseResult::iteration_limit) {
            return SolveStatus::iteration_limit;
        }
        double rhs_scale = 1.0;
        for (const auto& r : rows) {
            rhs_scale = std::max(rhs_scale, r.b);
        }
        if (cost[total] > options.tol * rhs_scale) {
            return SolveStatus::infeasible;
        }
        // Pivot remaining zero-level artificials out where possible; rows
        // without a usable entry are redundant and keep their artificial at 0.
        std::vector<double> dummy(total + 1, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (!is_art[tab.basis()[i]]) {
                continue;
            }
            std::size_t best = total;
            double mag = 1e-7;
            for (std::size_t j = 0; j < total; ++j) {
                if (!is_art[j] && std::abs(tab.at(i, j)) > mag) {
                    mag = std::abs(tab.at(i, j));
                    best = j;
                }
            }
            if (best < total) {
                tab.rhs(i) = 0.0; // level is below tolerance after phase one
                tab.pivot(i, best, dummy);
            }
        }
        blocked = is_art;
    }

    cost.assign(total + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const VarMap& v = map[j];
        cost[static_cast<std::size_t>(v.col)] += lp.objective[j] * v.sign;
        if (v.neg_col >= 0) {
            cost[static_cast<std::size_t>(v.neg_col)] -= lp.objective[j];
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double cb = cost[tab.basis()[i]];
        if (cb == 0.0) {
            continue;
        }
        tab.axpy_row(cost, i, -cb);
        cost[tab.basis()[i]] = 0.0;
    }
    const PhaseResult res = run_phase(tab, cost, blocked, options, max_iter(), iterations);
    switch (res) {
    case PhaseResult::optimal: warm = true; return SolveStatus::optimal;
    case PhaseResult::unbounded: return SolveStatus::unbounded;
    case PhaseResult::iteration_limit: return SolveStatus::iteration_limit;
    }
    return SolveStatus::iteration_limit;
}

SolverReport IncrementalLp::State::report(PhaseResult res, std::size_t iterations) const
{
    SolverReport out;
    out.iterations = iterations;
    const std::size_t n = lp.num_vars();
    std::vector<double> y(tab.cols(), 0.0);
    for (std::size_t i = 0; i < tab.rows(); ++i) {
        y[tab.basis()[i]] = std::max(tab.rhs(i), 0.0);
    }
    out.solution.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const VarMap& v = map[j];
        double x = v.offset + v.sign * y[static_cast<std::size_t>(v.col)];
        if (v.neg_col >= 0) {
            x -= y[static_cast<std::size_t>(v.neg_col)];
        }
        out.solution[j] = x;
    }
    for (std::size_t j = 0; j < n; ++j) {
        out.objective_value += lp.objective[j] * out.solution[j];
    }
    out.max_constraint_violation = constraint_violation(lp, out.solution);
    switch (res) {
    case PhaseResult::optimal: out.status = SolveStatus::optimal; break;
    case PhaseResult::unbounded: out.status = SolveStatus::unbounded; break;
    case PhaseResult::iteration_limit: out.status = SolveStatus::iteration_limit; break;
    }
    return out;
}

IncrementalLp::IncrementalLp(LinearProgram lp, const LpOptions& options) : state_(std::make_unique<State>())
{
    lp.validate();
    if (lp.lower.empty()) {
        lp.lower.assign(lp.num_vars(), 0.0);
    }
    if (lp.upper.empty()) {
        lp.upper.assign(lp.num_vars(), infinity);
    }
    state_->lp = std::move(lp);
    state_->options = options;
    state_->handle_of.assign(state_->lp.constraints.size(), none);
}

IncrementalLp::~IncrementalLp() = default;
IncrementalLp::IncrementalLp(IncrementalLp&&) noexcept = default;
IncrementalLp& IncrementalLp::operator=(IncrementalLp&&) noexcept = default;

const LinearProgram& IncrementalLp::program() const { return state_->lp; }

std::size_t IncrementalLp::add_row(LinearConstraint row)
{
    State& st = *state_;
    if (row.relation == Relation::equal) {
        throw std::invalid_argument("incremental linear program: only inequality rows can be added");
    }
    if (row.coeffs.size() != st.lp.num_vars() || !std::isfinite(row.rhs)) {
        throw std::invalid_argument("incremental linear program: malformed row");
    }
    const std::size_t handle = st.next_handle++;
    st.lp.constraints.push_back(row);
    st.handle_of.push_back(handle);
    st.slack_of.push_back(none);
    if (!st.warm) {
        return handle;
    }
    std::vector<double> a;
    double b = 0.0;
    if (!st.to_columns(row, a, b)) {
        st.warm = false; // let the cold path judge a coefficient-free row
        return handle;
    }
    const double sign = row.relation == Relation::less_equal ? 1.0 : -1.0;
    Tableau& tab = st.tab;
    tab.append_column();
    const std::size_t slack = tab.cols() - 1;
    st.cost.insert(st.cost.end() - 1, 0.0);
    st.blocked.push_back(0);
    std::vector<double> entries(tab.cols() + 1, 0.0);
    for (std::size_t j = 0; j < st.nstruct; ++j) {
        entries[j] = sign * a[j];
    }
    entries[slack] = 1.0;
    entries[tab.cols()] = sign * b;
    // Express the row in the current nonbasic columns.
    for (std::size_t i = 0; i < tab.rows(); ++i) {
        const double f = entries[tab.basis()[i]];
        if (f == 0.0) {
            continue;
        }
        tab.axpy_row(entries, i, -f);
        entries[tab.basis()[i]] = 0.0;
    }
    tab.append_row(entries, slack);
    st.slack_of.back() = slack;
    return handle;
}

std::vector<std::size_t> IncrementalLp::remove_rows(std::span<const std::size_t> handles)
{
    State& st = *state_;
    std::vector<std::size_t> removed;
    std::vector<char> drop_constraint(st.lp.constraints.size(), 0);
    std::vector<char> drop_row(st.tab.rows(), 0);
    std::vector<char> drop_col(st.tab.cols(), 0);
    std::vector<std::size_t> row_of_col;
    if (st.warm) {
        row_of_col.assign(st.tab.cols(), none);
        for (std::size_t i = 0; i < st.tab.rows(); ++i) {
            row_of_col[st.tab.basis()[i]] = i;
        }
    }
    for (std::size_t h : handles) {
        const auto it = std::find(st.handle_of.begin(), st.handle_of.end(), h);
        if (it == st.handle_of.end()) {
            continue;
        }
        const auto idx = static_cast<std::size_t>(it - st.handle_of.begin());
        if (st.warm) {
            const std::size_t slack = st.slack_of[idx];
            if (slack == none || row_of_col[slack] == none) {
                continue; // active rows stay
            }
            drop_row[row_of_col[slack]] = 1;
            drop_col[slack] = 1;
        }
        drop_constraint[idx] = 1;
        removed.push_back(h);
    }
    if (removed.empty()) {
        return removed;
    }
    if (st.warm) {
        st.tab.erase(drop_row, drop_col);
        std::vector<std::size_t> renum(drop_col.size(), 0);
        std::size_t nc = 0;
        for (std::size_t j = 0; j < drop_col.size(); ++j) {
            renum[j] = nc;
            if (!drop_col[j]) {
                st.cost[nc] = st.cost[j];
                st.blocked[nc] = st.blocked[j];
                ++nc;
            }
        }
        st.cost[nc] = st.cost[drop_col.size()];
        st.cost.resize(nc + 1);
        st.blocked.resize(nc);
        for (std::size_t& sl : st.slack_of) {
            if (sl != none) {
                sl = renum[sl];
            }
        }
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < drop_constraint.size(); ++i) {
        if (drop_constraint[i]) {
            continue;
        }
        if (k != i) {
            st.lp.constraints[k] = std::move(st.lp.constraints[i]);
            st.handle_of[k] = st.handle_of[i];
            st.slack_of[k] = st.slack_of[i];
        }
        ++k;
    }
    st.lp.constraints.resize(k);
    st.handle_of.resize(k);
    st.slack_of.resize(k);
    return removed;
}

bool IncrementalLp::remove_row(std::size_t handle)
{
    const std::size_t one[1] = {handle};
    return !remove_rows(one).empty();
}

SolverReport IncrementalLp::solve()
{
    State& st = *state_;
    std::size_t iterations = 0;
    if (st.warm) {
        bool infeasible = false;
        PhaseResult res = run_dual(st.tab, st.cost, st.blocked, st.max_iter(), iterations, infeasible);
        if (res == PhaseResult::optimal && !infeasible) {
            for (std::size_t i = 0; i < st.tab.rows(); ++i) {
                if (st.tab.rhs(i) < 0.0) {
                    st.tab.rhs(i) = 0.0;
                }
            }
            res = run_phase(st.tab, st.cost, st.blocked, st.options, st.max_iter(), iterations);
            if (res == PhaseResult::optimal) {
                SolverReport out = st.report(res, iterations);
                if (out.max_constraint_violation <= st.options.tol) {
                    return out;
                }
            }
        }
        // Infeasibility claims and numerical drift are settled by a cold solve.
    }
    const SolveStatus status = st.cold(iterations);
    if (status == SolveStatus::optimal) {
        return st.report(PhaseResult::optimal, iterations);
    }
    if (status == SolveStatus::unbounded || status == SolveStatus::iteration_limit) {
        SolverReport out = st.report(status == SolveStatus::unbounded ? PhaseResult::unbounded : PhaseResult::iteration_limit,
                                     iterations);
        out.status = status;
        return out;
    }
    SolverReport out;
    out.status = status;
    out.iterations = iterations;
    return out;
}

SolverReport solve_lp(const LinearProgram& lp, const LpOptions& options)
{
    return IncrementalLp(lp, options).solve();
}

} // namespace debit::numeric
