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


// Acceptance suite: one pass/fail line per criterion.
//   acceptance --criterion N   (1..12, or "all")

#include "debit/bounds.hpp"
#include "debit/montecarlo.hpp"
#include "debit/optimizers.hpp"
#include "debit/rate_lp.hpp"
#include "debit/special_functions.hpp"

#include "cli_support.hpp"
#include "oracles.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace debit;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Targets harvest_dbm(double dbm)
{
    Targets t;
    t.harvest = to_watts(Dbm{dbm});
    return t;
}

mc::PointStats single_point(const mc::CurveData& d, mc::Scheme s)
{
    return d.curve(s)->points.front();
}

// 1: per-realization ordering of the optimal scheme, the energy-first scheme and its bounds.
Verdict dominance_chain()
{
    const SystemParams p = reference_params(8);
    const Targets t = harvest_dbm(-12.0);
    double worst_p1 = INFINITY;
    double worst_bound = INFINITY;
    double worst_sic_low = INFINITY;
    double worst_sic_high = INFINITY;
    int feasible = 0;
    for (std::uint64_t i = 0; i < 500; ++i) {
        const ChannelState ch = sample_channels(p, mc::trial_seed(101, 0, i));
        const Solution opt = solve_p1_sum_rate(p, ch, t);
        const Solution sub = solve_p2_suboptimal(p, ch, t);
        worst_p1 = std::min(worst_p1, opt.sum_rate - sub.sum_rate);
        const double bound = analysis::weakest_receiver_bound(sub, ch, p);
        worst_bound = std::min(worst_bound, sub.sum_rate - bound);
        if (sub.feasible) {
            ++feasible;
            const double sic = sic_sum_rate(sub.alloc, ch, p);
            worst_sic_low = std::min(worst_sic_low, sic - bound);
            worst_sic_high = std::min(worst_sic_high, sub.sum_rate - sic);
        }
    }
    const bool pass = worst_p1 >= -1e-3 && worst_bound >= -1e-9 && worst_sic_low >= -1e-9 && worst_sic_high >= -1e-9;
    return {pass, fmt("500 draws (%d energy-first feasible); min P1-P2 %.3g, min P2-bound %.3g, min SIC-bound %.3g, "
                      "min P2-SIC %.3g",
                      feasible, worst_p1, worst_bound, worst_sic_low, worst_sic_high)};
}

// 2: energy-first rate LP against vertex enumeration at three users.
Verdict lp_vertex_oracle()
{
    const SystemParams p = reference_params(3);
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> target_dbm(-30.0, -15.0);
    double worst = 0.0;
    int done = 0;
    for (std::uint64_t i = 0; done < 200; ++i) {
        const ChannelState ch = sample_channels(p, mc::trial_seed(202, 0, i));
        const Solution s = solve_p2_suboptimal(p, ch, harvest_dbm(target_dbm(rng)));
        if (!s.feasible) {
            continue;
        }
        ++done;
        worst = std::max(worst, std::abs(s.sum_rate - oracle::max_sum_rate(s.alloc, ch, p)));
    }
    return {worst <= 1e-8, fmt("200 instances; max |LP - vertex| = %.3g", worst)};
}

// 3: simulated energy-first mean against the average sum-rate bound at sixteen users.
Verdict sum_rate_bound_tightness()
{
    mc::ExperimentConfig c;
    c.name = "criterion3";
    c.kind = mc::ExperimentKind::bound_tightness;
    c.params = reference_params(16);
    c.targets = harvest_dbm(-12.0);
    c.sweep = {mc::SweepVariable::users, {16}};
    c.trials = 2000;
    c.seed = 303;
    c.schemes = {mc::Scheme::p2, mc::Scheme::bound};
    mc::RunOptions o;
    o.workers = 0;
    const mc::CurveData d = mc::run_experiment(c, o);
    const mc::PointStats sim = single_point(d, mc::Scheme::p2);
    const double bound = single_point(d, mc::Scheme::bound).mean;
    const double gap = (sim.mean - bound) / sim.mean;
    return {d.ok() && sim.mean >= bound && gap <= 0.20,
            fmt("mean %.5f (se %.2g) vs bound %.5f; relative gap %.4f", sim.mean, sim.stderr_of_mean, bound, gap)};
}

// 4: large-K approximation against its limit.
Verdict asymptotic_constant()
{
    const SystemParams p = reference_params(64);
    const double approx = analysis::asymptotic_sum_rate(p, Targets{}, analysis::Asymptote::large_k);
    const double limit = 0.5 * std::log2(1.0 + p.power(0) * p.avg_channel_gain / p.user_noise);
    const double rel = std::abs(approx - limit) / limit;
    return {rel <= 0.05 && std::abs(limit - 3.3291) < 5e-5, fmt("K=64: %.5f vs %.5f; relative %.4f", approx, limit, rel)};
}

// 5: simulated suboptimal harvest against the average harvest bound.
Verdict harvest_bound_validity()
{
    mc::ExperimentConfig c;
    c.name = "criterion5";
    c.kind = mc::ExperimentKind::harvest_vs_users;
    c.params = reference_params(8);
    c.targets.sum_rate = 2.5;
    c.sweep = {mc::SweepVariable::users, {8, 10, 12}};
    c.trials = 2000;
    c.seed = 505;
    c.schemes = {mc::Scheme::p4, mc::Scheme::bound};
    mc::RunOptions o;
    o.workers = 0;
    const mc::CurveData d = mc::run_experiment(c, o);
    bool pass = d.ok();
    std::string detail;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& sim = d.curve(mc::Scheme::p4)->points[i];
        const double bound = d.curve(mc::Scheme::bound)->points[i].mean;
        pass = pass && sim.mean >= bound;
        detail += fmt("K=%g %.4g W (se %.2g) vs %.4g W; ", sim.sweep_value, sim.mean, sim.stderr_of_mean, bound);
    }
    int checked = 0;
    for (int K : {8, 10, 12, 16}) {
        for (double r = 0.25; r <= 4.0; r += 0.25) {
            Targets t;
            t.sum_rate = r;
            const SystemParams p = reference_params(K);
            const double exact = analysis::avg_harvest_lower_bound(p, t, analysis::HarvestBoundForm::exact).value;
            const double simple = analysis::avg_harvest_lower_bound(p, t, analysis::HarvestBoundForm::simplified).value;
            pass = pass && simple <= exact;
            ++checked;
        }
    }
    detail += fmt("simplified <= exact at %d targets", checked);
    return {pass, detail};
}

// 6: suboptimal harvest over the power-splitting baseline at ten users.
Verdict harvest_gain_vs_baseline()
{
    mc::ExperimentConfig c = mc::preset("fig5");
    c.sweep.values = {10};
    c.schemes = {mc::Scheme::p4, mc::Scheme::baseline};
    mc::RunOptions o;
    o.workers = 0;
    const mc::CurveData d = mc::run_experiment(c, o);
    const double ours = single_point(d, mc::Scheme::p4).mean;
    const double base = single_point(d, mc::Scheme::baseline).mean;
    const double ratio = ours / base;
    return {d.ok() && ratio >= 5.0 && ratio <= 12.0,
            fmt("%d trials: %.4g W vs %.4g W; ratio %.3f", c.trials, ours, base, ratio)};
}

// 7: optimal sum-rate over the baseline at -11 dBm, eight users.
Verdict sum_rate_gain_vs_baseline()
{
    mc::ExperimentConfig c = mc::preset("fig3");
    c.sweep.values = {-11.0};
    c.schemes = {mc::Scheme::p1, mc::Scheme::baseline};
    c.trials = 500;
    mc::RunOptions o;
    o.workers = 0;
    const mc::CurveData d = mc::run_experiment(c, o);
    const mc::PointStats ours = single_point(d, mc::Scheme::p1);
    const mc::PointStats base = single_point(d, mc::Scheme::baseline);
    const double gain = ours.mean - base.mean;
    return {d.ok() && gain >= 2.0,
            fmt("%d trials: %.4f (se %.2g) vs %.4f (se %.2g, feasible %.3f); gain %.3f", c.trials, ours.mean,
                ours.stderr_of_mean, base.mean, base.stderr_of_mean, base.feasible_fraction, gain)};
}

// 8: central-limit feasibility probability against channel draws.
Verdict feasibility_probability()
{
    const SystemParams p = reference_params(8);
    bool pass = true;
    std::string detail;
    for (double dbm : {-12.0, -9.0, -6.0, -4.0, -2.0}) {
        const Targets t = harvest_dbm(dbm);
        const double c0 = t.c0(p);
        int hits = 0;
        for (std::uint64_t i = 0; i < 10000; ++i) {
            const ChannelState ch = sample_channels(p, mc::trial_seed(808, 0, i));
            double s = 0.0;
            for (double m : ch.magnitudes) {
                s += m;
            }
            hits += s >= c0 ? 1 : 0;
        }
        const double empirical = hits / 10000.0;
        const double model = analysis::feasibility_probability(p, t);
        pass = pass && std::abs(empirical - model) <= 0.05;
        detail += fmt("%s%g dBm %.4f vs %.4f", detail.empty() ? "" : "; ", dbm, empirical, model);
    }
    return {pass, detail};
}

// 9: special functions against high-precision and sampling oracles.
Verdict special_functions()
{
    double phi_err = 0.0;
    double e1_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = std::pow(10.0, -3.0 + 4.0 * i / 99.0); // 1e-3 .. 10
        for (double s : {x, -x}) {
            phi_err = std::max(phi_err, std::abs(special::normal_cdf(s) - oracle::normal_cdf(s)));
        }
        const double y = std::pow(10.0, -4.0 + 6.0 * i / 99.0); // 1e-4 .. 100
        const double ref = oracle::exp_integral_e1(y);
        e1_err = std::max(e1_err, std::abs(special::exp_integral_e1(y) - ref) / ref);
    }
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_z = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double mu = -2.0 + 4.0 * u(rng);
        const double sigma = 0.1 + 2.0 * u(rng);
        const double zeta = mu + sigma * (-3.0 + 5.0 * u(rng));
        const oracle::McEstimate mc = oracle::truncated_normal_mean(zeta, mu, sigma, 1000000, 9000 + i);
        worst_z = std::max(worst_z, std::abs(special::g_function(zeta, mu, sigma) - mc.mean) / mc.stderr_of_mean);
    }
    return {phi_err <= 1e-12 && e1_err <= 1e-10 && worst_z <= 3.0,
            fmt("max |Phi err| %.2g; max E1 rel err %.2g; max g deviation %.2f standard errors", phi_err, e1_err,
                worst_z)};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string("\"") + DEBIT_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 10: every preset through the CLI with one and with four workers.
Verdict determinism()
{
    const auto root = std::filesystem::temp_directory_path() / "debit_acceptance_determinism";
    std::filesystem::remove_all(root);
    int files = 0;
    int differing = 0;
    for (const auto& name : mc::preset_names()) {
        for (int workers : {1, 4}) {
            const auto dir = root / std::to_string(workers);
            const int rc = run_cli("experiment --preset " + name + " --trials 2 --seed 1010 --quiet --workers "
                                   + std::to_string(workers) + " --out-dir \"" + dir.string() + "\"");
            if (rc != 0) {
                return {false, fmt("%s with %d workers exited %d", name.c_str(), workers, rc)};
            }
        }
        const mc::ExperimentConfig c = mc::preset(name);
        for (const auto& [scheme, path] : cli::run_paths(c, root / "1").csv) {
            const auto other = root / "4" / path.filename();
            ++files;
            const std::string a = slurp(path);
            if (a.empty() || a != slurp(other)) {
                ++differing;
            }
        }
    }
    std::filesystem::remove_all(root);
    return {files > 0 && differing == 0, fmt("%d CSV pairs compared, %d differ", files, differing)};
}

// 11: independent re-validation of optimal-scheme solutions.
Verdict solver_certification()
{
    double worst = 0.0;
    int feasible = 0;
    for (int i = 0; i < 200; ++i) {
        const int K = 3 + i % 4;
        const SystemParams p = reference_params(K);
        const ChannelState ch = sample_channels(p, mc::trial_seed(1111, static_cast<std::uint64_t>(K), i));
        Solution s;
        Targets t;
        Objective obj;
        if (i % 2 == 0) {
            t = harvest_dbm(-20.0 + (i % 7));
            s = solve_p1_sum_rate(p, ch, t);
            obj = Objective::sum_rate;
        } else {
            t.sum_rate = 0.5 + 0.25 * (i % 9);
            s = solve_p3_harvest(p, ch, t);
            obj = Objective::harvest;
        }
        feasible += s.feasible ? 1 : 0;
        Certificate c = certify(s, p, ch, t, obj);
        // Independent evaluators for the harvested and relay power.
        if (s.feasible) {
            const double h = oracle::harvested(s.alloc, ch, p.efficiency);
            c.consistency = std::max(c.consistency, std::abs(h - s.harvested) / std::max(h, 1e-300));
            c.relay = std::max(c.relay, (oracle::relay_used(s.alloc, ch, p) - p.relay_power) / p.relay_power);
            if (obj == Objective::sum_rate) {
                c.harvest_target = std::max(c.harvest_target, (t.harvest - h) / t.harvest);
            }
        }
        worst = std::max(worst, c.worst());
    }
    return {worst <= 1e-6, fmt("200 solutions (%d feasible); max violation %.3g", feasible, worst)};
}

// 12: wall time of the four presets at 200 trials, estimated from a subsample.
Verdict desk_runtime()
{
    const int sample_trials = 6;
    const int target_trials = 200;
    const int cores = 8;
    double seconds = 0.0;
    std::string detail;
    for (const auto& name : mc::preset_names()) {
        mc::ExperimentConfig c = mc::preset(name);
        c.trials = sample_trials;
        const auto start = std::chrono::steady_clock::now();
        mc::run_experiment(c, mc::RunOptions{1, {}});
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        seconds += s;
        detail += fmt("%s %.1fs; ", name.c_str(), s);
    }
    const double single_core = seconds * target_trials / sample_trials;
    const double estimate = single_core / cores;
    detail += fmt("%d trials took %.1fs on one core; estimate for %d trials: %.0fs on one core, %.0fs on %d cores",
                  sample_trials, seconds, target_trials, single_core, estimate, cores);
    return {estimate <= 3600.0, detail};
}

const std::map<int, std::pair<const char*, std::function<Verdict()>>>& criteria()
{
    static const std::map<int, std::pair<const char*, std::function<Verdict()>>> table{
        {1, {"dominance chain", dominance_chain}},
        {2, {"rate LP matches vertex enumeration", lp_vertex_oracle}},
        {3, {"average sum-rate bound is tight", sum_rate_bound_tightness}},
        {4, {"large-K sum-rate constant", asymptotic_constant}},
        {5, {"average harvest bound holds", harvest_bound_validity}},
        {6, {"harvest gain over power splitting", harvest_gain_vs_baseline}},
        {7, {"sum-rate gain over power splitting", sum_rate_gain_vs_baseline}},
        {8, {"feasibility probability", feasibility_probability}},
        {9, {"special functions", special_functions}},
        {10, {"deterministic output", determinism}},
        {11, {"solver certification", solver_certification}},
        {12, {"desk-scale runtime", desk_runtime}},
    };
    return table;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria"};
    std::string which = "all";
    app.add_option("--criterion", which, "Criterion number (1-12) or all");
    CLI11_PARSE(app, argc, argv);

    std::vector<int> selected;
    if (which == "all") {
        for (const auto& [n, entry] : criteria()) {
            selected.push_back(n);
        }
    } else {
        const int n = std::atoi(which.c_str());
        if (!criteria().contains(n)) {
            std::fprintf(stderr, "unknown criterion %s\n", which.c_str());
            return 64;
        }
        selected.push_back(n);
    }

    int failures = 0;
    for (int n : selected) {
        const auto& [label, run] = criteria().at(n);
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d %s: %s (%s) [%.1fs]\n", n, v.pass ? "PASS" : "FAIL", label, v.detail.c_str(), s);
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
