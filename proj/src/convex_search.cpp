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

// Optimal schemes: a search over (alpha, theta, omega) wrapped around the
// convex program that remains once those three are fixed.

#include "debit/cutting_plane.hpp"
#include "debit/optimizers.hpp"
#include "debit/rate_lp.hpp"
#include "debit/scalar_search.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace debit {

namespace {

using numeric::ConvexConstraintFamily;
using numeric::LinearConstraint;
using numeric::LinearProgram;
using numeric::Relation;
using numeric::SolveStatus;

constexpr double half_inv_ln2 = 0.5 / std::numbers::ln2;

enum class Goal { sum_rate, harvest };

struct Point {
    double alpha = 0.0;
    double theta = 0.0;
    double omega = 0.0;
};

// Instance data reused by every inner solve.
struct Instance {
    const SystemParams& params;
    const ChannelState& channels;
    const Targets& targets;
    int K;
    double coherent; // sum_k |h_k|
    double received; // sum_k P_k |h_k|^2

    Instance(const SystemParams& p, const ChannelState& c, const Targets& t)
        : params(p), channels(c), targets(t), K(p.num_users),
          coherent(std::accumulate(c.magnitudes.begin(), c.magnitudes.end(), 0.0)), received(0.0)
    {
        for (int k = 0; k < K; ++k) {
            received += p.power(k) * c.power_gain(k);
        }
    }

    // Smallest second-subphase power allowed by the peak constraint.
    double min_p2(int k, double alpha) const
    {
        if (alpha >= 1.0) {
            return 0.0;
        }
        return std::max(0.0, (params.power(k) - alpha * params.peak_power) / (1.0 - alpha));
    }

    // Harvest with theta = 1 and every spare watt on the energy symbol.
    double max_harvest(double alpha) const
    {
        double s = 0.0;
        for (int k = 0; k < K; ++k) {
            s += channels.magnitude(k) * std::sqrt(std::min(alpha * params.peak_power, params.power(k)));
        }
        return params.efficiency * s * s;
    }

    // Largest omega for which some allocation meets the relay budget.
    double omega_cap(double alpha, double theta) const
    {
        double rx2 = 0.0;
        for (int k = 0; k < K; ++k) {
            rx2 += min_p2(k, alpha) * channels.power_gain(k);
        }
        return params.relay_power
            / (alpha * first_subphase_noise(theta, params) + (1.0 - alpha) * (rx2 + params.relay_noise));
    }

    // Relay gain that is tight when the whole budget carries information.
    double omega_full(double alpha, double theta) const
    {
        return params.relay_power
            / (alpha * ((1.0 - theta) * received + first_subphase_noise(theta, params))
               + (1.0 - alpha) * (received + params.relay_noise));
    }
};

// Variable layout of the inner program: p1 | p2 | R | (t).
struct Layout {
    int K;
    std::size_t p1(int k) const { return static_cast<std::size_t>(k); }
    std::size_t p2(int k) const { return static_cast<std::size_t>(K + k); }
    std::size_t rate(int k) const { return static_cast<std::size_t>(2 * K + k); }
    std::size_t epigraph() const { return static_cast<std::size_t>(3 * K); }
};

// Rate-region cuts sum_{m in S} R_m <= R_{k,S}(p1, p2) with the weakest
// receiver outside S, which is the binding one for every S.
class RateFamily final : public ConvexConstraintFamily {
public:
    RateFamily(const Instance& inst, const Point& pt) : layout_{inst.K}, alpha_(pt.alpha)
    {
        Allocation probe = Allocation::zeros(inst.K);
        probe.time_split = pt.alpha;
        probe.power_split = pt.theta;
        probe.relay_gain = pt.omega;
        const RateRegion region(probe, inst.channels, inst.params);
        a1_ = region.first_scale();
        a2_ = region.second_scale();
        gain_.resize(static_cast<std::size_t>(inst.K));
        for (int k = 0; k < inst.K; ++k) {
            gain_[static_cast<std::size_t>(k)] = inst.channels.power_gain(k);
        }
        order_.resize(static_cast<std::size_t>(inst.K));
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](int x, int y) {
            const auto i = static_cast<std::size_t>(x);
            const auto j = static_cast<std::size_t>(y);
            return a2_[i] != a2_[j] ? a2_[i] < a2_[j] : a1_[i] < a1_[j];
        });
        const UserMask full = all_users(inst.K);
        receiver_.resize(static_cast<std::size_t>(full) + 1U);
        for (UserMask mask = 1; mask < full; ++mask) {
            for (int k : order_) {
                if (!(mask & user_bit(k))) {
                    receiver_[mask] = k;
                    break;
                }
            }
        }
    }

    double separate(std::span<const double> x, std::size_t max_cuts, std::vector<LinearConstraint>& cuts) const override
    {
        sweep(x);
        double worst = 0.0;
        found_.clear();
        for (std::size_t mask = 1; mask + 1 < sr_.size(); ++mask) {
            const double excess = sr_[mask] - bound_[mask];
            if (excess > 0.0) {
                worst = std::max(worst, excess);
                found_.push_back({excess, static_cast<UserMask>(mask)});
            }
        }
        emit(x.size(), max_cuts, cuts);
        return worst;
    }

    bool violated(std::span<const double> x) const override
    {
        const UserMask full = all_users(layout_.K);
        const std::size_t size = static_cast<std::size_t>(full) + 1U;
        sr_.resize(size);
        s1_.resize(size);
        s2_.resize(size);
        sr_[0] = s1_[0] = s2_[0] = 0.0;
        for (UserMask mask = 1; mask < full; ++mask) {
            const UserMask low = mask & (~mask + 1U);
            const int m = std::countr_zero(mask);
            const auto mi = static_cast<std::size_t>(m);
            sr_[mask] = sr_[mask ^ low] + x[layout_.rate(m)];
            s1_[mask] = s1_[mask ^ low] + gain_[mi] * std::max(0.0, x[layout_.p1(m)]);
            s2_[mask] = s2_[mask ^ low] + gain_[mi] * std::max(0.0, x[layout_.p2(m)]);
            const auto k = static_cast<std::size_t>(receiver_[mask]);
            if (sr_[mask] > alpha_ * capacity(a1_[k] * s1_[mask]) + (1.0 - alpha_) * capacity(a2_[k] * s2_[mask])) {
                return true;
            }
        }
        return false;
    }

    void support(std::span<const double> x, std::size_t max_cuts, std::vector<LinearConstraint>& cuts) const override
    {
        sweep(x);
        found_.clear();
        for (std::size_t mask = 1; mask + 1 < sr_.size(); ++mask) {
            found_.push_back({sr_[mask] - bound_[mask], static_cast<UserMask>(mask)});
        }
        emit(x.size(), max_cuts, cuts);
    }

private:
    // Subset sums of rates and received powers plus each cut's rate bound.
    void sweep(std::span<const double> x) const
    {
        const UserMask full = all_users(layout_.K);
        const std::size_t size = static_cast<std::size_t>(full) + 1U;
        sr_.assign(size, 0.0);
        s1_.assign(size, 0.0);
        s2_.assign(size, 0.0);
        bound_.assign(size, 0.0);
        for (UserMask mask = 1; mask < full; ++mask) {
            const UserMask low = mask & (~mask + 1U);
            const int m = std::countr_zero(mask);
            const auto mi = static_cast<std::size_t>(m);
            sr_[mask] = sr_[mask ^ low] + x[layout_.rate(m)];
            s1_[mask] = s1_[mask ^ low] + gain_[mi] * std::max(0.0, x[layout_.p1(m)]);
            s2_[mask] = s2_[mask ^ low] + gain_[mi] * std::max(0.0, x[layout_.p2(m)]);
            const auto k = static_cast<std::size_t>(receiver_[mask]);
            bound_[mask] = alpha_ * capacity(a1_[k] * s1_[mask]) + (1.0 - alpha_) * capacity(a2_[k] * s2_[mask]);
        }
    }

    // Tangent cuts for the max_cuts entries of found_ with the largest score.
    void emit(std::size_t n, std::size_t max_cuts, std::vector<LinearConstraint>& cuts) const
    {
        const std::size_t take = std::min(found_.size(), max_cuts);
        std::partial_sort(found_.begin(), found_.begin() + static_cast<std::ptrdiff_t>(take), found_.end(),
                          [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
        for (std::size_t c = 0; c < take; ++c) {
            const UserMask mask = found_[c].second;
            const auto k = static_cast<std::size_t>(receiver_[mask]);
            const double s1 = s1_[mask];
            const double s2 = s2_[mask];
            const double c1 = alpha_ * half_inv_ln2 * a1_[k] / (1.0 + a1_[k] * s1);
            const double c2 = (1.0 - alpha_) * half_inv_ln2 * a2_[k] / (1.0 + a2_[k] * s2);
            LinearConstraint cut{std::vector<double>(n, 0.0), Relation::less_equal, bound_[mask] - c1 * s1 - c2 * s2};
            for (UserMask rest = mask; rest != 0U; rest &= rest - 1U) {
                const int m = std::countr_zero(rest);
                const auto mi = static_cast<std::size_t>(m);
                cut.coeffs[layout_.rate(m)] = 1.0;
                cut.coeffs[layout_.p1(m)] = -c1 * gain_[mi];
                cut.coeffs[layout_.p2(m)] = -c2 * gain_[mi];
            }
            cuts.push_back(std::move(cut));
        }
    }

    Layout layout_;
    double alpha_;
    std::vector<double> a1_, a2_, gain_;
    std::vector<int> order_;
    std::vector<int> receiver_;
    mutable std::vector<double> sr_, s1_, s2_, bound_;
    mutable std::vector<std::pair<double, UserMask>> found_;
};

// Harvested power H(x) = alpha theta eta [(sum sqrt(p_E)|h|)^2 + sum p1 |h|^2]
// with p_E eliminated through the budget equality. In target form the member
// is 1 - H/P0 <= 0; in epigraph form it is t - H/scale <= 0.
class HarvestFamily final : public ConvexConstraintFamily {
public:
    HarvestFamily(const Instance& inst, const Point& pt, bool epigraph, double scale)
        : inst_(inst), layout_{inst.K}, alpha_(pt.alpha), theta_(pt.theta), epigraph_(epigraph), scale_(scale)
    {
    }

    double energy_power(std::span<const double> x, int k) const
    {
        const double pe = (inst_.params.power(k) - alpha_ * x[layout_.p1(k)] - (1.0 - alpha_) * x[layout_.p2(k)]) / alpha_;
        return std::max(pe, 0.0);
    }

    double separate(std::span<const double> x, std::size_t max_cuts, std::vector<LinearConstraint>& cuts) const override
    {
        const double gain = alpha_ * theta_ * inst_.params.efficiency;
        double s = 0.0;
        const double v = violation(x, s);
        if (v <= 0.0 || gain <= 0.0 || max_cuts == 0) {
            return std::max(v, 0.0);
        }
        // Tangent of the coherent term at p_E floored by delta. The floor is the
        // largest one that still costs at most half of the violation, which
        // keeps the cut well scaled when some p_E sit at zero.
        const double c = inst_.coherent;
        const double b = 0.5 * v * scale_ / gain;
        const double u = b / (s + std::sqrt(s * s + b));
        const double delta = c > 0.0 ? std::max((u / c) * (u / c), 1e-300) : 1e-12;
        cuts.push_back(tangent(x, delta));
        return v;
    }

    bool violated(std::span<const double> x) const override
    {
        double s = 0.0;
        return violation(x, s) > 0.0;
    }

    void support(std::span<const double> x, std::size_t max_cuts, std::vector<LinearConstraint>& cuts) const override
    {
        if (max_cuts == 0 || alpha_ * theta_ <= 0.0) {
            return;
        }
        cuts.push_back(tangent(x, 1e-9 * inst_.params.min_user_power()));
    }

private:
    // Member value at x; s receives sum sqrt(p_E)|h|.
    double violation(std::span<const double> x, double& s) const
    {
        const double gain = alpha_ * theta_ * inst_.params.efficiency;
        s = 0.0;
        double lin = 0.0;
        for (int k = 0; k < inst_.K; ++k) {
            s += std::sqrt(energy_power(x, k)) * inst_.channels.magnitude(k);
            lin += std::max(0.0, x[layout_.p1(k)]) * inst_.channels.power_gain(k);
        }
        const double h = gain * (s * s + lin);
        return (epigraph_ ? x[layout_.epigraph()] : 1.0) - h / scale_;
    }

    LinearConstraint tangent(std::span<const double> x, double delta) const
    {
        const int K = inst_.K;
        const double gain = alpha_ * theta_ * inst_.params.efficiency;
        double st = 0.0;
        std::vector<double> pt(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k) {
            pt[static_cast<std::size_t>(k)] = std::max(energy_power(x, k), delta);
            st += std::sqrt(pt[static_cast<std::size_t>(k)]) * inst_.channels.magnitude(k);
        }
        LinearConstraint cut{std::vector<double>(x.size(), 0.0), Relation::less_equal, 0.0};
        const double te = theta_ * inst_.params.efficiency;
        double rhs = 0.0;
        for (int k = 0; k < K; ++k) {
            const double d = st * inst_.channels.magnitude(k) / std::sqrt(pt[static_cast<std::size_t>(k)]);
            cut.coeffs[layout_.p1(k)] = gain * (d - inst_.channels.power_gain(k)) / scale_;
            cut.coeffs[layout_.p2(k)] = te * (1.0 - alpha_) * d / scale_;
            rhs += te * d * inst_.params.power(k) / scale_;
        }
        if (epigraph_) {
            cut.coeffs[layout_.epigraph()] = 1.0;
            cut.rhs = rhs;
        } else {
            cut.rhs = rhs - 1.0;
        }
        return cut;
    }

    const Instance& inst_;
    Layout layout_;
    double alpha_, theta_;
    bool epigraph_;
    double scale_;
};

struct InnerResult {
    bool feasible = false;
    double value = 0.0; // sum-rate, or harvest in watts
    std::vector<double> x;
    std::size_t rounds = 0;
};

// A point strictly inside the harvest and rate families, or empty. Powers are
// a fraction of each user's spare budget; rates are a shrunk sum-rate optimal
// vector of the region those powers induce.
std::vector<double> interior_point(const Instance& inst, Goal goal, const Point& pt, double harvest_scale)
{
    const int K = inst.K;
    const Layout lay{K};
    const auto& params = inst.params;
    const double alpha = pt.alpha;
    const std::size_t n = static_cast<std::size_t>(3 * K) + (goal == Goal::harvest ? 1U : 0U);
    static constexpr std::array<double, 5> rate_first{0.9, 0.5, 0.2, 0.05, 0.01};
    static constexpr std::array<double, 5> harvest_first{0.01, 0.05, 0.2, 0.5, 0.9};
    const auto& fractions = goal == Goal::sum_rate ? harvest_first : rate_first;

    const double w = pt.omega / params.relay_power;
    double fixed = w * (alpha * first_subphase_noise(pt.theta, params) + (1.0 - alpha) * params.relay_noise);
    for (int k = 0; k < K; ++k) {
        fixed += w * (1.0 - alpha) * inst.min_p2(k, alpha) * inst.channels.power_gain(k);
    }
    if (fixed >= 1.0) {
        return {};
    }

    for (double f : fractions) {
        Allocation a = Allocation::zeros(K);
        a.time_split = alpha;
        a.power_split = pt.theta;
        a.relay_gain = pt.omega;
        double load = 0.0;
        for (int k = 0; k < K; ++k) {
            const auto ki = static_cast<std::size_t>(k);
            const double lo = inst.min_p2(k, alpha);
            const double spare = params.power(k) - (1.0 - alpha) * lo;
            const double share = alpha < 1.0 ? 0.5 : 1.0;
            a.info_power_1[ki] = f * share * spare / alpha;
            a.info_power_2[ki] = alpha < 1.0 ? lo + f * 0.5 * spare / (1.0 - alpha) : 0.0;
            const double g = inst.channels.power_gain(k);
            load += w * (alpha * (1.0 - pt.theta) * a.info_power_1[ki] + (1.0 - alpha) * (a.info_power_2[ki] - lo)) * g;
        }
        // Shrink the variable part until the relay keeps some headroom.
        const double room = 0.5 * (1.0 - fixed);
        const double shrink = load > room ? room / load : 1.0;
        double harvest_lin = 0.0;
        double coherent = 0.0;
        for (int k = 0; k < K; ++k) {
            const auto ki = static_cast<std::size_t>(k);
            const double lo = inst.min_p2(k, alpha);
            a.info_power_1[ki] *= shrink;
            a.info_power_2[ki] = lo + shrink * (a.info_power_2[ki] - lo);
            const double pe = std::max(0.0, (params.power(k) - alpha * a.info_power_1[ki] - (1.0 - alpha) * a.info_power_2[ki]) / alpha);
            coherent += std::sqrt(pe) * inst.channels.magnitude(k);
            harvest_lin += a.info_power_1[ki] * inst.channels.power_gain(k);
        }
        const double harvest = alpha * pt.theta * params.efficiency * (coherent * coherent + harvest_lin);
        if (goal == Goal::sum_rate && inst.targets.harvest > 0.0 && !(harvest > inst.targets.harvest * (1.0 + 1e-9))) {
            continue;
        }
        if (goal == Goal::harvest && !(harvest > 0.0)) {
            continue;
        }
        const RateLpResult lpr = maximize_sum_rate(RateRegion(a, inst.channels, params));
        if (lpr.status != SolveStatus::optimal || !(lpr.sum_rate > 0.0)) {
            continue;
        }
        double keep = 0.5;
        if (goal == Goal::harvest) {
            const double need = inst.targets.sum_rate / lpr.sum_rate;
            if (!(need < 1.0 - 1e-9)) {
                continue;
            }
            keep = 0.5 * (1.0 + need);
        }
        std::vector<double> x(n, 0.0);
        for (int k = 0; k < K; ++k) {
            const auto ki = static_cast<std::size_t>(k);
            x[lay.p1(k)] = a.info_power_1[ki];
            x[lay.p2(k)] = a.info_power_2[ki];
            x[lay.rate(k)] = keep * lpr.rates[ki];
        }
        if (goal == Goal::harvest) {
            x[lay.epigraph()] = 0.5 * harvest / harvest_scale;
        }
        return x;
    }
    return {};
}

// Convex program at fixed (alpha, theta, omega). Needs 0 < alpha.
// A nonempty warm point seeds the relaxation with tangents taken there.
InnerResult solve_inner(const Instance& inst, Goal goal, const Point& pt, double tol, std::size_t max_rounds,
                        double harvest_scale, std::span<const double> warm = {})
{
    const int K = inst.K;
    const Layout lay{K};
    const std::size_t n = static_cast<std::size_t>(3 * K) + (goal == Goal::harvest ? 1U : 0U);
    const double alpha = pt.alpha;
    const auto& params = inst.params;

    LinearProgram lp(n);
    lp.lower.assign(n, 0.0);
    lp.upper.assign(n, numeric::infinity);
    Allocation probe = Allocation::zeros(K);
    probe.time_split = alpha;
    probe.power_split = pt.theta;
    probe.relay_gain = pt.omega;
    const RateRegion scales(probe, inst.channels, params);
    const double a1max = *std::max_element(scales.first_scale().begin(), scales.first_scale().end());
    const double a2max = *std::max_element(scales.second_scale().begin(), scales.second_scale().end());

    for (int k = 0; k < K; ++k) {
        // p1 <= P/alpha and p2 <= P/(1-alpha) follow from the budget row, so
        // only the peak-driven floor on p2 and the rate caps are stated.
        const double Pk = params.power(k);
        lp.lower[lay.p2(k)] = inst.min_p2(k, alpha);
        if (alpha >= 1.0) {
            lp.upper[lay.p2(k)] = 0.0;
        }
        const double g = inst.channels.power_gain(k);
        const double p2max = alpha < 1.0 ? Pk / (1.0 - alpha) : 0.0;
        lp.upper[lay.rate(k)] = alpha * capacity(a1max * g * Pk / alpha) + (1.0 - alpha) * capacity(a2max * g * p2max);
        std::vector<double> row(n, 0.0);
        row[lay.p1(k)] = alpha;
        row[lay.p2(k)] = 1.0 - alpha;
        lp.add(std::move(row), Relation::less_equal, Pk);
    }
    {
        std::vector<double> row(n, 0.0);
        const double w = pt.omega / params.relay_power;
        for (int k = 0; k < K; ++k) {
            const double g = inst.channels.power_gain(k);
            row[lay.p1(k)] = w * alpha * (1.0 - pt.theta) * g;
            row[lay.p2(k)] = w * (1.0 - alpha) * g;
        }
        const double noise = w * (alpha * first_subphase_noise(pt.theta, params) + (1.0 - alpha) * params.relay_noise);
        lp.add(std::move(row), Relation::less_equal, 1.0 - noise);
    }
    std::vector<const ConvexConstraintFamily*> families;
    const RateFamily rates(inst, pt);
    families.push_back(&rates);
    std::optional<HarvestFamily> harvest;
    if (goal == Goal::sum_rate) {
        for (int k = 0; k < K; ++k) {
            lp.objective[lay.rate(k)] = 1.0;
        }
        if (inst.targets.harvest > 0.0) {
            harvest.emplace(inst, pt, false, inst.targets.harvest);
        }
    } else {
        lp.objective[lay.epigraph()] = 1.0;
        lp.upper[lay.epigraph()] = pt.theta * inst.max_harvest(alpha) / harvest_scale;
        std::vector<double> row(n, 0.0);
        for (int k = 0; k < K; ++k) {
            row[lay.rate(k)] = 1.0;
        }
        lp.add(std::move(row), Relation::greater_equal, inst.targets.sum_rate);
        harvest.emplace(inst, pt, true, harvest_scale);
    }
    if (harvest) {
        families.push_back(&*harvest);
    }

    numeric::CuttingPlaneOptions opt;
    opt.tol = tol;
    opt.max_rounds = max_rounds;
    opt.interior = interior_point(inst, goal, pt, harvest_scale);
    std::vector<LinearConstraint> seeds;
    if (!warm.empty()) {
        std::vector<double> w(warm.begin(), warm.end());
        w.resize(n, 0.0);
        rates.support(w, static_cast<std::size_t>(2 * K), seeds);
        if (harvest) {
            harvest->support(w, 1, seeds);
        }
    }
    const numeric::CuttingPlaneReport rep = numeric::solve_concave_program(lp, families, opt, seeds);
    InnerResult out;
    out.rounds = rep.rounds;
    if (rep.report.status != SolveStatus::optimal) {
        return out;
    }
    out.feasible = true;
    out.x = rep.report.solution;
    out.value = goal == Goal::sum_rate ? rep.report.objective_value : rep.report.objective_value * harvest_scale;
    return out;
}

// Allocation encoded by an inner solution, with omega trimmed if LP round-off
// pushed the relay a hair over budget.
Allocation to_allocation(const Instance& inst, const Point& pt, const std::vector<double>& x)
{
    const int K = inst.K;
    const Layout lay{K};
    Allocation a = Allocation::zeros(K);
    a.time_split = pt.alpha;
    a.power_split = pt.theta;
    a.relay_gain = pt.omega;
    for (int k = 0; k < K; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double Pk = inst.params.power(k);
        a.info_power_1[i] = std::clamp(x[lay.p1(k)], 0.0, Pk / pt.alpha);
        a.info_power_2[i] = pt.alpha < 1.0 ? std::max(x[lay.p2(k)], 0.0) : 0.0;
        a.energy_power[i] = std::max(0.0, (Pk - pt.alpha * a.info_power_1[i] - (1.0 - pt.alpha) * a.info_power_2[i]) / pt.alpha);
    }
    const double used = relay_power_used(a, inst.channels, inst.params);
    if (used > inst.params.relay_power) {
        a.relay_gain *= inst.params.relay_power / used;
    }
    return a;
}

// Pure information exchange: no energy subphase at all.
Allocation information_only(const Instance& inst)
{
    Allocation a = Allocation::zeros(inst.K);
    for (int k = 0; k < inst.K; ++k) {
        a.info_power_2[static_cast<std::size_t>(k)] = inst.params.power(k);
    }
    a.relay_gain = inst.params.relay_power / (inst.received + inst.params.relay_noise);
    return a;
}

// Candidate ordering: larger objective (with hysteresis), then smaller alpha,
// then smaller theta.
bool better(const Solution& a, const Solution& b, Objective obj)
{
    if (!a.feasible || !b.feasible) {
        return a.feasible && !b.feasible;
    }
    const double va = obj == Objective::sum_rate ? a.sum_rate : a.harvested;
    const double vb = obj == Objective::sum_rate ? b.sum_rate : b.harvested;
    const double hyst = 1e-9 * std::max(1.0, std::abs(vb));
    if (va > vb + hyst) {
        return true;
    }
    if (va < vb - hyst) {
        return false;
    }
    if (a.alloc.time_split != b.alloc.time_split) {
        return a.alloc.time_split < b.alloc.time_split;
    }
    return a.alloc.power_split < b.alloc.power_split;
}

class Search {
public:
    Search(const Instance& inst, Goal goal, const SearchConfig& cfg) : inst_(inst), goal_(goal), cfg_(cfg)
    {
        const auto& t = inst.targets;
        if (goal == Goal::sum_rate && t.harvest > 0.0) {
            // Smallest alpha whose best-case harvest reaches the target.
            alpha_lo_ = numeric::bisect_root([&](double a) { return inst.max_harvest(a) - t.harvest; }, 0.0, 1.0, 1e-13).hi;
        }
        harvest_scale_ = std::max(inst.max_harvest(1.0), 1e-300);
    }

    Point map(const std::array<double, 3>& z) const
    {
        Point pt;
        if (goal_ == Goal::sum_rate) {
            pt.alpha = alpha_lo_ + (1.0 - alpha_lo_) * z[0] * z[0];
            const double target = inst_.targets.harvest;
            const double theta_min = target > 0.0 ? std::min(1.0, target / inst_.max_harvest(pt.alpha)) : 0.0;
            pt.theta = theta_min + z[1] * (1.0 - theta_min);
        } else {
            pt.alpha = z[0];
            pt.theta = z[1];
        }
        pt.alpha = std::clamp(pt.alpha, 0.0, 1.0);
        pt.theta = std::clamp(pt.theta, 0.0, 1.0);
        const double hi = inst_.omega_cap(pt.alpha, pt.theta);
        const double lo = std::min(0.5 * inst_.omega_full(pt.alpha, pt.theta), hi);
        pt.omega = std::exp(std::log(lo) + z[2] * (std::log(hi) - std::log(lo)));
        return pt;
    }

    // Search objective: the inner optimum, or a negative infeasibility score.
    double value(const std::array<double, 3>& z)
    {
        if (auto it = cache_.find(z); it != cache_.end()) {
            return it->second;
        }
        const Point pt = map(z);
        double v = -1e6;
        if (pt.alpha > 0.0) {
            const InnerResult r = solve_inner(inst_, goal_, pt, cfg_.search_tol, cfg_.max_cut_rounds, harvest_scale_, warm_);
            ++diag_.inner_solves;
            diag_.cutting_rounds += r.rounds;
            if (r.feasible) {
                warm_ = r.x;
                v = goal_ == Goal::sum_rate ? r.value : r.value / harvest_scale_;
            } else if (goal_ == Goal::harvest) {
                // Guide the search toward points that can carry the rate target.
                Targets relaxed{0.0, 0.0};
                const Instance probe(inst_.params, inst_.channels, relaxed);
                const InnerResult m = solve_inner(probe, Goal::sum_rate, pt, cfg_.search_tol, cfg_.max_cut_rounds, 1.0);
                ++diag_.inner_solves;
                diag_.cutting_rounds += m.rounds;
                const double reach = m.feasible ? m.value : 0.0;
                v = -1e-6 - std::max(0.0, inst_.targets.sum_rate - reach) / std::max(inst_.targets.sum_rate, 1e-12);
            }
        }
        cache_.emplace(z, v);
        return v;
    }

    double line(std::array<double, 3>& z, int axis, double lo, double hi, double tol)
    {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 1.0);
        std::array<double, 3> probe = z;
        numeric::ScalarOptions opt;
        opt.tol = tol;
        const numeric::ScalarResult r = numeric::scalar_maximize(
            [&](double s) {
                probe[static_cast<std::size_t>(axis)] = s;
                return value(probe);
            },
            lo, hi, opt);
        const double current = value(z);
        if (r.value > current) {
            z[static_cast<std::size_t>(axis)] = r.x;
            return r.value;
        }
        return current;
    }

    std::array<double, 3> run()
    {
        const int na = std::max(cfg_.alpha_points, 2);
        const int nb = std::max(cfg_.theta_points, 2);
        std::array<double, 3> best{0.0, 0.0, 0.0};
        double best_value = -INFINITY;
        for (int ia = 0; ia < na; ++ia) {
            for (int ib = 0; ib < nb; ++ib) {
                std::array<double, 3> z{static_cast<double>(ia) / (na - 1), static_cast<double>(ib) / (nb - 1), 0.0};
                const double v = line(z, 2, 0.0, 1.0, cfg_.omega_tol);
                if (v > best_value) {
                    best_value = v;
                    best = z;
                }
            }
        }
        std::array<double, 3> width{1.0 / (na - 1), 1.0 / (nb - 1), 0.25};
        for (int round = 0; round < cfg_.refine_rounds; ++round) {
            const double before = best_value;
            for (int axis = 0; axis < 3; ++axis) {
                const auto a = static_cast<std::size_t>(axis);
                best_value = line(best, axis, best[a] - width[a], best[a] + width[a], width[a] / 16.0);
            }
            for (double& w : width) {
                w *= 0.5;
            }
            if (round > 0 && best_value - before <= 1e-9 * std::max(1.0, std::abs(before))) {
                break;
            }
        }
        return best;
    }

    Solution finish(const std::array<double, 3>& z)
    {
        const Point pt = map(z);
        Solution s;
        if (pt.alpha <= 0.0) {
            return s;
        }
        const InnerResult r = solve_inner(inst_, goal_, pt, cfg_.polish_tol, cfg_.max_cut_rounds, harvest_scale_, warm_);
        ++diag_.inner_solves;
        diag_.cutting_rounds += r.rounds;
        if (!r.feasible) {
            return s;
        }
        s = evaluate_allocation(to_allocation(inst_, pt, r.x), inst_.params, inst_.channels);
        const double slack = 1e-7;
        if (goal_ == Goal::sum_rate) {
            s.feasible = s.harvested >= inst_.targets.harvest * (1.0 - slack);
        } else {
            s.feasible = s.sum_rate >= inst_.targets.sum_rate - slack * std::max(1.0, inst_.targets.sum_rate);
        }
        return s;
    }

    SolveDiagnostics& diagnostics() { return diag_; }

private:
    const Instance& inst_;
    Goal goal_;
    SearchConfig cfg_;
    double alpha_lo_ = 0.0;
    double harvest_scale_ = 1.0;
    std::map<std::array<double, 3>, double> cache_;
    std::vector<double> warm_; // last feasible inner solution
    SolveDiagnostics diag_;
};

void require_optimal_size(const SystemParams& params)
{
    if (params.num_users > max_optimal_users) {
        throw CapacityError("optimal schemes support at most " + std::to_string(max_optimal_users)
                            + " users (full rate-region enumeration); got " + std::to_string(params.num_users));
    }
}

Solution pick(std::vector<std::pair<std::string, Solution>>& candidates, Objective obj, SolveDiagnostics diag)
{
    std::size_t arg = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (better(candidates[i].second, candidates[arg].second, obj)) {
            arg = i;
        }
    }
    Solution out = std::move(candidates[arg].second);
    diag.note = "incumbent: " + candidates[arg].first;
    for (const auto& c : candidates) {
        diag.lp_solves += c.second.diagnostics.lp_solves;
    }
    out.diagnostics = std::move(diag);
    return out;
}

} // namespace

SearchConfig SearchConfig::exhaustive(int n)
{
    SearchConfig c;
    c.alpha_points = n + 1;
    c.theta_points = n + 1;
    c.refine_rounds = 0;
    return c;
}

Solution solve_p1_sum_rate(const SystemParams& params, const ChannelState& channels, const Targets& targets,
                           const SearchConfig& config)
{
    params.validate();
    targets.validate();
    require_optimal_size(params);
    const Instance inst(params, channels, targets);

    if (targets.harvest > inst.max_harvest(1.0)) {
        Solution s;
        s.alloc = Allocation::zeros(inst.K);
        s.alloc.time_split = 1.0;
        s.alloc.power_split = 1.0;
        for (int k = 0; k < inst.K; ++k) {
            s.alloc.energy_power[static_cast<std::size_t>(k)] = params.power(k);
        }
        s.alloc.relay_gain = params.relay_power / first_subphase_noise(1.0, params);
        s.harvested = harvested_power(s.alloc, channels, params.efficiency);
        s.rates.assign(static_cast<std::size_t>(inst.K), 0.0);
        s.diagnostics.scheme = "p1";
        s.diagnostics.note = "harvest target above the largest harvestable power";
        return s;
    }

    std::vector<std::pair<std::string, Solution>> candidates;
    candidates.emplace_back("energy-first", solve_p2_suboptimal(params, channels, targets));
    candidates.emplace_back("power-splitting", solve_baseline_swipt(params, channels, targets, BaselineMode::sum_rate));
    if (targets.harvest == 0.0) {
        candidates.emplace_back("information-only", evaluate_allocation(information_only(inst), params, channels));
    }
    Search search(inst, Goal::sum_rate, config);
    candidates.emplace_back("search", search.finish(search.run()));
    SolveDiagnostics diag = search.diagnostics();
    diag.scheme = "p1";
    return pick(candidates, Objective::sum_rate, std::move(diag));
}

Solution solve_p3_harvest(const SystemParams& params, const ChannelState& channels, const Targets& targets,
                          const SearchConfig& config)
{
    params.validate();
    targets.validate();
    require_optimal_size(params);
    const Instance inst(params, channels, targets);

    std::vector<std::pair<std::string, Solution>> candidates;
    candidates.emplace_back("energy-first", solve_p4_suboptimal(params, channels, targets));
    candidates.emplace_back("power-splitting", solve_baseline_swipt(params, channels, targets, BaselineMode::harvest));
    Search search(inst, Goal::harvest, config);
    candidates.emplace_back("search", search.finish(search.run()));
    SolveDiagnostics diag = search.diagnostics();
    diag.scheme = "p3";
    Solution out = pick(candidates, Objective::harvest, std::move(diag));
    if (!out.feasible) {
        out.harvested = 0.0;
        out.rates.assign(static_cast<std::size_t>(inst.K), 0.0);
        out.sum_rate = 0.0;
        out.diagnostics.note = "sum-rate target not reached by any searched configuration";
    }
    return out;
}

} // namespace debit
