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

#include "debit/montecarlo.hpp"

#include "debit/bounds.hpp"
#include "debit/optimizers.hpp"
#include "debit/version.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace debit::mc {

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 5> kind_names{{
    {ExperimentKind::sumrate_vs_papr, "sumrate-vs-papr"},
    {ExperimentKind::rate_energy_region, "rate-energy-region"},
    {ExperimentKind::sumrate_vs_users, "sumrate-vs-users"},
    {ExperimentKind::harvest_vs_users, "harvest-vs-users"},
    {ExperimentKind::bound_tightness, "bound-tightness"},
}};

constexpr std::array<std::pair<Scheme, std::string_view>, 6> scheme_names{{
    {Scheme::p1, "p1"},
    {Scheme::p2, "p2"},
    {Scheme::p3, "p3"},
    {Scheme::p4, "p4"},
    {Scheme::baseline, "baseline"},
    {Scheme::bound, "bound"},
}};

constexpr std::array<std::pair<SweepVariable, std::string_view>, 4> sweep_names{{
    {SweepVariable::papr_db, "papr_db"},
    {SweepVariable::harvest_target_dbm, "harvest_target_dbm"},
    {SweepVariable::users, "users"},
    {SweepVariable::sum_rate_target, "sum_rate_target"},
}};

template <class Table, class Key>
std::string name_of(const Table& table, Key key)
{
    for (const auto& [k, name] : table) {
        if (k == key) {
            return std::string(name);
        }
    }
    return "unknown";
}

template <class Table>
auto parse_name(const Table& table, std::string_view text, const char* what)
{
    for (const auto& [k, name] : table) {
        if (name == text) {
            return k;
        }
    }
    std::string known;
    for (const auto& entry : table) {
        known += known.empty() ? "" : ", ";
        known += entry.second;
    }
    throw std::invalid_argument("unknown " + std::string(what) + " '" + std::string(text) + "' (expected one of: " + known + ")");
}

bool is_optimal(Scheme s)
{
    return s == Scheme::p1 || s == Scheme::p3;
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<double> integer_range(int first, int last, int step = 1)
{
    std::vector<double> v;
    for (int x = first; x <= last; x += step) {
        v.push_back(x);
    }
    return v;
}

// Outcome of one scheme on one channel draw.
struct Cell {
    double value = 0.0;
    bool feasible = false;
    std::string error;
};

double metric_of(const Solution& s, bool sum_rate)
{
    if (!s.feasible) {
        return 0.0;
    }
    return sum_rate ? s.sum_rate : s.harvested;
}

Cell solve_cell(Scheme scheme, bool sum_rate, const SystemParams& params, const ChannelState& ch, const Targets& targets)
{
    Cell cell;
    try {
        Solution s;
        switch (scheme) {
        case Scheme::p1: s = solve_p1_sum_rate(params, ch, targets); break;
        case Scheme::p2: s = solve_p2_suboptimal(params, ch, targets); break;
        case Scheme::p3: s = solve_p3_harvest(params, ch, targets); break;
        case Scheme::p4: s = solve_p4_suboptimal(params, ch, targets); break;
        case Scheme::baseline:
            s = solve_baseline_swipt(params, ch, targets, sum_rate ? BaselineMode::sum_rate : BaselineMode::harvest);
            break;
        case Scheme::bound: break;
        }
        cell.feasible = s.feasible;
        cell.value = metric_of(s, sum_rate);
        if (!std::isfinite(cell.value)) {
            cell.error = "solver returned a non-finite value";
        }
    } catch (const std::exception& e) {
        cell.error = e.what();
    }
    return cell;
}

PointStats bound_point(const ExperimentConfig& cfg, std::size_t i)
{
    PointStats p;
    p.sweep_value = cfg.sweep.values[i];
    p.trials = 0;
    const SystemParams params = cfg.params_at(i);
    const Targets targets = cfg.targets_at(i);
    try {
        if (reports_sum_rate(cfg.kind)) {
            const analysis::BoundValue b = analysis::avg_sum_rate_lower_bound(params, targets);
            p.mean = b.value;
            p.feasible_fraction = analysis::feasibility_probability(params, targets);
        } else {
            const analysis::BoundValue b = analysis::avg_harvest_lower_bound(params, targets);
            p.mean = b.value;
            p.feasible_fraction = b.feasible ? 1.0 : 0.0;
        }
        if (!std::isfinite(p.mean)) {
            throw std::range_error("bound evaluated to a non-finite value");
        }
    } catch (const std::exception& e) {
        p.mean = std::numeric_limits<double>::quiet_NaN();
        p.stderr_of_mean = std::numeric_limits<double>::quiet_NaN();
        p.error = e.what();
    }
    return p;
}

} // namespace

bool reports_sum_rate(ExperimentKind kind)
{
    return kind != ExperimentKind::harvest_vs_users;
}

std::string to_string(ExperimentKind kind) { return name_of(kind_names, kind); }
std::string to_string(Scheme scheme) { return name_of(scheme_names, scheme); }
std::string to_string(SweepVariable variable) { return name_of(sweep_names, variable); }
ExperimentKind parse_kind(std::string_view text) { return parse_name(kind_names, text, "experiment kind"); }
Scheme parse_scheme(std::string_view text) { return parse_name(scheme_names, text, "scheme"); }
SweepVariable parse_sweep_variable(std::string_view text) { return parse_name(sweep_names, text, "sweep variable"); }

SystemParams ExperimentConfig::params_at(std::size_t i) const
{
    const double v = sweep.values.at(i);
    SystemParams p = params;
    switch (sweep.variable) {
    case SweepVariable::papr_db:
        p.peak_power = p.power(0) * db_to_ratio(v);
        break;
    case SweepVariable::users: {
        const int k = static_cast<int>(std::lround(v));
        p = params.with_users(k);
        p.relay_power = params.relay_power / params.num_users * k;
        break;
    }
    case SweepVariable::harvest_target_dbm:
    case SweepVariable::sum_rate_target:
        break;
    }
    return p;
}

Targets ExperimentConfig::targets_at(std::size_t i) const
{
    const double v = sweep.values.at(i);
    Targets t = targets;
    if (sweep.variable == SweepVariable::harvest_target_dbm) {
        t.harvest = to_watts(Dbm{v});
    } else if (sweep.variable == SweepVariable::sum_rate_target) {
        t.sum_rate = v;
    }
    return t;
}

bool ExperimentConfig::runs(Scheme scheme, std::size_t i) const
{
    if (std::find(schemes.begin(), schemes.end(), scheme) == schemes.end()) {
        return false;
    }
    return !is_optimal(scheme) || params_at(i).num_users <= max_optimal_users;
}

void ExperimentConfig::validate() const
{
    if (trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    if (sweep.values.empty()) {
        throw std::invalid_argument("sweep has no values");
    }
    if (schemes.empty()) {
        throw std::invalid_argument("no schemes requested");
    }
    for (std::size_t a = 0; a < schemes.size(); ++a) {
        for (std::size_t b = a + 1; b < schemes.size(); ++b) {
            if (schemes[a] == schemes[b]) {
                throw std::invalid_argument("scheme " + to_string(schemes[a]) + " listed twice");
            }
        }
    }
    const bool rate = reports_sum_rate(kind);
    for (Scheme s : schemes) {
        if (rate && (s == Scheme::p3 || s == Scheme::p4)) {
            throw std::invalid_argument("scheme " + to_string(s) + " maximizes harvested power; use it with harvest-vs-users");
        }
        if (!rate && (s == Scheme::p1 || s == Scheme::p2)) {
            throw std::invalid_argument("scheme " + to_string(s) + " maximizes sum-rate; it does not fit harvest-vs-users");
        }
    }
    for (double v : sweep.values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("sweep values must be finite");
        }
        switch (sweep.variable) {
        case SweepVariable::papr_db:
            if (v < 0.0) {
                throw std::invalid_argument("PAPR must be at least 0 dB");
            }
            break;
        case SweepVariable::users:
            if (v != std::round(v) || v < 1.0) {
                throw std::invalid_argument("user counts must be positive integers");
            }
            break;
        case SweepVariable::sum_rate_target:
            if (v < 0.0) {
                throw std::invalid_argument("sum-rate targets must be nonnegative");
            }
            break;
        case SweepVariable::harvest_target_dbm:
            break;
        }
    }
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        params_at(i).validate();
        targets_at(i).validate();
        if (clip_optimal_schemes) {
            continue;
        }
        for (Scheme s : schemes) {
            if (is_optimal(s) && params_at(i).num_users > max_optimal_users) {
                throw std::invalid_argument("scheme " + to_string(s) + " needs K <= " + std::to_string(max_optimal_users)
                                            + " but the sweep reaches K = " + std::to_string(params_at(i).num_users)
                                            + "; drop it, shorten the sweep, or enable clipping of optimal schemes");
            }
        }
    }
}

ExperimentConfig preset(std::string_view name)
{
    ExperimentConfig c;
    c.name = std::string(name);
    c.trials = 2000;
    c.seed = 1;
    if (name == "fig2") {
        c.kind = ExperimentKind::sumrate_vs_papr;
        c.params = reference_params(8);
        c.targets.harvest = to_watts(Dbm{-12.0});
        c.sweep = {SweepVariable::papr_db, integer_range(0, 14)};
        c.schemes = {Scheme::p1, Scheme::p2, Scheme::baseline, Scheme::bound};
    } else if (name == "fig3") {
        c.kind = ExperimentKind::rate_energy_region;
        c.params = reference_params(8);
        c.targets.harvest = to_watts(Dbm{-12.0});
        c.sweep = {SweepVariable::harvest_target_dbm, integer_range(-20, -9)};
        c.schemes = {Scheme::p1, Scheme::p2, Scheme::baseline, Scheme::bound};
    } else if (name == "fig4") {
        c.kind = ExperimentKind::sumrate_vs_users;
        c.params = reference_params(4);
        c.targets.harvest = to_watts(Dbm{-12.0});
        c.sweep = {SweepVariable::users, integer_range(4, 16)};
        c.schemes = {Scheme::p1, Scheme::p2, Scheme::baseline, Scheme::bound};
        c.clip_optimal_schemes = true;
    } else if (name == "fig5") {
        c.kind = ExperimentKind::harvest_vs_users;
        c.params = reference_params(2);
        c.targets.sum_rate = 2.5;
        c.sweep = {SweepVariable::users, integer_range(2, 12)};
        c.schemes = {Scheme::p3, Scheme::p4, Scheme::baseline, Scheme::bound};
        c.clip_optimal_schemes = true;
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected fig2, fig3, fig4 or fig5)");
    }
    return c;
}

std::vector<std::string> preset_names()
{
    return {"fig2", "fig3", "fig4", "fig5"};
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t sweep_index, std::uint64_t trial_index)
{
    return splitmix64(splitmix64(splitmix64(master) ^ sweep_index) ^ trial_index);
}

bool CurveData::ok() const
{
    for (const auto& c : curves) {
        for (const auto& p : c.points) {
            if (!p.error.empty()) {
                return false;
            }
        }
    }
    return true;
}

const SchemeCurve* CurveData::curve(Scheme scheme) const
{
    for (const auto& c : curves) {
        if (c.scheme == scheme) {
            return &c;
        }
    }
    return nullptr;
}

CurveData run_experiment(const ExperimentConfig& config, const RunOptions& options)
{
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const bool sum_rate = reports_sum_rate(config.kind);
    const std::size_t npoints = config.sweep.values.size();
    const std::size_t ntrials = static_cast<std::size_t>(config.trials);

    std::vector<Scheme> sampled;
    for (Scheme s : config.schemes) {
        if (s != Scheme::bound) {
            sampled.push_back(s);
        }
    }
    const std::size_t ns = sampled.size();

    // One task per (point, trial); all sampled schemes share the channel draw.
    std::vector<Cell> cells(npoints * ntrials * ns);
    std::vector<SystemParams> params(npoints);
    std::vector<Targets> targets(npoints);
    std::vector<std::vector<char>> active(npoints, std::vector<char>(ns, 0));
    for (std::size_t i = 0; i < npoints; ++i) {
        params[i] = config.params_at(i);
        targets[i] = config.targets_at(i);
        for (std::size_t s = 0; s < ns; ++s) {
            active[i][s] = config.runs(sampled[s], i) ? 1 : 0;
        }
    }

    const std::size_t ntasks = ns == 0 ? 0 : npoints * ntrials;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_lock;
    auto work = [&] {
        for (std::size_t task = next++; task < ntasks; task = next++) {
            const std::size_t i = task / ntrials;
            const std::size_t t = task % ntrials;
            ChannelState ch;
            try {
                ch = sample_channels(params[i], trial_seed(config.seed, i, t));
            } catch (const std::exception& e) {
                for (std::size_t s = 0; s < ns; ++s) {
                    cells[task * ns + s].error = e.what();
                }
                continue;
            }
            for (std::size_t s = 0; s < ns; ++s) {
                if (active[i][s]) {
                    cells[task * ns + s] = solve_cell(sampled[s], sum_rate, params[i], ch, targets[i]);
                }
            }
            const std::size_t finished = ++done;
            if (options.progress) {
                std::lock_guard lock(progress_lock);
                options.progress(finished, ntasks);
            }
        }
    };
    unsigned workers = options.workers > 0 ? static_cast<unsigned>(options.workers)
                                           : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(ntasks, 1)));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    CurveData out;
    out.config = config;
    out.metric = sum_rate ? "sum_rate_bps_hz" : "harvested_w";
    out.version = std::string(debit::version);
    for (Scheme scheme : config.schemes) {
        SchemeCurve curve;
        curve.scheme = scheme;
        const auto pos = std::find(sampled.begin(), sampled.end(), scheme);
        const std::size_t s = static_cast<std::size_t>(pos - sampled.begin());
        for (std::size_t i = 0; i < npoints; ++i) {
            if (!config.runs(scheme, i)) {
                continue;
            }
            if (scheme == Scheme::bound) {
                curve.points.push_back(bound_point(config, i));
                continue;
            }
            PointStats p;
            p.sweep_value = config.sweep.values[i];
            // Welford accumulation in trial order keeps the result schedule-free.
            double mean = 0.0;
            double m2 = 0.0;
            std::size_t feasible = 0;
            for (std::size_t t = 0; t < ntrials; ++t) {
                const Cell& c = cells[(i * ntrials + t) * ns + s];
                if (!c.error.empty()) {
                    p.error = "trial " + std::to_string(t) + ": " + c.error;
                    break;
                }
                const double n = static_cast<double>(t + 1);
                const double d = c.value - mean;
                mean += d / n;
                m2 += d * (c.value - mean);
                feasible += c.feasible ? 1 : 0;
            }
            if (p.error.empty()) {
                p.mean = mean;
                p.trials = config.trials;
                p.stderr_of_mean = ntrials > 1 ? std::sqrt(m2 / static_cast<double>(ntrials - 1) / static_cast<double>(ntrials)) : 0.0;
                p.feasible_fraction = static_cast<double>(feasible) / static_cast<double>(ntrials);
            } else {
                p.mean = std::numeric_limits<double>::quiet_NaN();
                p.stderr_of_mean = std::numeric_limits<double>::quiet_NaN();
            }
            curve.points.push_back(std::move(p));
        }
        out.curves.push_back(std::move(curve));
    }
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

} // namespace debit::mc
