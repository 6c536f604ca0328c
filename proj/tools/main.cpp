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

// debit: single solves, bound evaluation and Monte Carlo experiments.

#include "cli_support.hpp"

#include "debit/bounds.hpp"
#include "debit/performance.hpp"
#include "debit/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>

namespace {

using namespace debit;
using namespace debit::cli;

// Raw text of the network and target flags, folded into Settings so that flag
// values and config-file values go through one parser.
struct ParamFlags {
    std::string config;
    std::vector<std::string> assignments;
    std::map<std::string, std::string> values;

    void attach(CLI::App* app, bool with_users = true)
    {
        app->add_option("--config", config, "Flat key = value settings file (or a run manifest)");
        app->add_option("--set", assignments, "Override one setting, key=value (repeatable)");
        const std::vector<std::pair<std::string, std::string>> flags{
            {"--users", "num_users"},
            {"--user-power-dbm", "user_power_dbm"},
            {"--user-power-w", "user_power"},
            {"--relay-power-dbm", "relay_power_dbm"},
            {"--relay-power-w", "relay_power"},
            {"--peak-power-dbm", "peak_power_dbm"},
            {"--peak-power-w", "peak_power"},
            {"--papr-db", "papr_db"},
            {"--distance", "distance"},
            {"--efficiency", "efficiency"},
            {"--target-harvest-dbm", "harvest_dbm"},
            {"--target-harvest-w", "harvest"},
            {"--target-sum-rate", "sum_rate"},
        };
        for (const auto& [flag, key] : flags) {
            if (!with_users && key == "num_users") {
                continue;
            }
            app->add_option_function<std::string>(
                flag, [this, key = key](const std::string& v) { values[key] = v; }, "Sets " + key);
        }
    }

    Settings settings() const
    {
        Settings s = config.empty() ? Settings{} : load_settings(config);
        apply_assignments(s, assignments);
        for (const auto& [k, v] : values) {
            // A flag replaces whichever unit form the file used.
            s.erase(k.ends_with("_dbm") ? k.substr(0, k.size() - 4) : k + "_dbm");
            s[k] = v;
        }
        check_keys(s);
        return s;
    }
};

std::string dbm_text(double watts)
{
    if (!(watts > 0.0)) {
        return "-inf dBm";
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f dBm", to_dbm(watts).value);
    return buf;
}

std::string num(double v, const char* fmt = "%.6g")
{
    char buf[48];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

void print_solution(const std::string& problem, const Solution& s)
{
    std::cout << "problem        " << problem << '\n'
              << "feasible       " << (s.feasible ? "yes" : "no") << '\n'
              << "sum-rate       " << num(s.sum_rate, "%.9g") << " bits/s/Hz\n"
              << "harvested      " << num(s.harvested, "%.9g") << " W (" << dbm_text(s.harvested) << ")\n"
              << "time split     " << num(s.alloc.time_split) << '\n'
              << "power split    " << num(s.alloc.power_split) << '\n'
              << "relay gain     " << num(s.alloc.relay_gain) << '\n';
    std::cout << "user  p_E         p_1         p_2         rate\n";
    for (int k = 0; k < s.alloc.num_users(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        std::printf("%-5d %-11.5g %-11.5g %-11.5g %.6g\n", k + 1, s.alloc.energy_power[i], s.alloc.info_power_1[i],
                    s.alloc.info_power_2[i], i < s.rates.size() ? s.rates[i] : 0.0);
    }
    std::fflush(stdout);
    if (!s.diagnostics.note.empty()) {
        std::cout << "note           " << s.diagnostics.note << '\n';
    }
}

int cmd_solve(const ParamFlags& flags, const std::string& problem, std::string mode, std::uint64_t seed,
              const std::string& out)
{
    const Settings s = flags.settings();
    const SystemParams params = resolve_params(s, 8);
    const Targets targets = resolve_targets(s);
    if (mode.empty()) {
        mode = s.contains("sum_rate") ? "harvest" : "sum-rate";
    }
    const ChannelState ch = sample_channels(params, seed);
    Solution sol;
    try {
        if (problem == "p1") {
            sol = solve_p1_sum_rate(params, ch, targets);
        } else if (problem == "p2") {
            sol = solve_p2_suboptimal(params, ch, targets);
        } else if (problem == "p3") {
            sol = solve_p3_harvest(params, ch, targets);
        } else if (problem == "p4") {
            sol = solve_p4_suboptimal(params, ch, targets);
        } else {
            sol = solve_baseline_swipt(params, ch, targets,
                                       mode == "harvest" ? BaselineMode::harvest : BaselineMode::sum_rate);
        }
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\nuse p2 or p4 for networks larger than " << max_optimal_users
                  << " users\n";
        return exit_usage;
    }
    print_solution(problem, sol);
    if (!out.empty()) {
        nlohmann::ordered_json j;
        j["version"] = std::string(debit::version);
        j["problem"] = problem;
        if (problem == "baseline") {
            j["baseline_mode"] = mode;
        }
        j["seed"] = seed;
        j["params"] = to_json(params);
        j["targets"] = to_json(targets);
        j["channel_magnitudes"] = ch.magnitudes;
        j["solution"] = to_json(sol);
        write_file(out, j.dump(2) + "\n");
    }
    if (!sol.feasible) {
        const bool harvest_problem = problem == "p3" || problem == "p4" || (problem == "baseline" && mode == "harvest");
        std::cerr << (harvest_problem ? "infeasible: the sum-rate target " + num(targets.sum_rate) + " bits/s/Hz"
                                      : "infeasible: the harvest target " + dbm_text(targets.harvest))
                  << " cannot be met on this channel draw"
                  << (sol.diagnostics.note.empty() ? "" : " (" + sol.diagnostics.note + ")") << '\n';
        return exit_infeasible;
    }
    return exit_ok;
}

int cmd_bounds(const ParamFlags& flags, std::optional<std::uint64_t> seed, const std::string& out)
{
    const Settings s = flags.settings();
    const SystemParams params = resolve_params(s, 16);
    const Targets targets = resolve_targets(s);
    nlohmann::ordered_json j;
    j["params"] = to_json(params);
    j["targets"] = to_json(targets);
    auto& rows = j["bounds"] = nlohmann::ordered_json::array();
    int status = exit_ok;
    auto row = [&](const std::string& label, const std::string& unit, auto&& eval) {
        nlohmann::ordered_json r{{"label", label}, {"unit", unit}};
        try {
            const auto [value, warning] = eval();
            r["value"] = value;
            std::printf("%-58s %-14.9g %s", label.c_str(), value, unit.c_str());
            if (unit == "W") {
                std::printf(" (%s)", dbm_text(value).c_str());
            }
            if (!warning.empty()) {
                r["warning"] = warning;
                std::printf("  [%s]", warning.c_str());
            }
            std::printf("\n");
        } catch (const std::exception& e) {
            r["error"] = e.what();
            std::printf("%-58s n/a: %s\n", label.c_str(), e.what());
            if (!dynamic_cast<const std::domain_error*>(&e)) {
                status = exit_error;
            }
        }
        rows.push_back(std::move(r));
    };
    using Pair = std::pair<double, std::string>;
    auto noted = [](const analysis::BoundValue& b) {
        std::string w = b.warning;
        if (!b.feasible) {
            w += (w.empty() ? "" : "; ") + std::string("energy-first scheme infeasible at this target");
        }
        return Pair{b.value, w};
    };
    std::printf("K = %d, P = %s, P_R = %s, P_peak = %s, harvest target %s, sum-rate target %g bits/s/Hz\n\n",
                params.num_users, dbm_text(params.power(0)).c_str(), dbm_text(params.relay_power).c_str(),
                dbm_text(params.peak_power).c_str(), dbm_text(targets.harvest).c_str(), targets.sum_rate);
    row("feasibility probability of the energy-first scheme", "", [&] {
        return Pair{analysis::feasibility_probability(params, targets), ""};
    });
    row("average sum-rate lower bound (energy-first)", "bits/s/Hz",
        [&] { return noted(analysis::avg_sum_rate_lower_bound(params, targets)); });
    for (auto a : {analysis::Asymptote::large_k, analysis::Asymptote::scaled_relay_limit,
                   analysis::Asymptote::fixed_relay_limit}) {
        row("sum-rate " + analysis::to_string(a), "bits/s/Hz",
            [&] { return Pair{analysis::asymptotic_sum_rate(params, targets, a), ""}; });
    }
    row("average harvested-power lower bound", "W", [&] {
        return noted(analysis::avg_harvest_lower_bound(params, targets, analysis::HarvestBoundForm::exact));
    });
    row("average harvested-power lower bound, simplified form", "W", [&] {
        return noted(analysis::avg_harvest_lower_bound(params, targets, analysis::HarvestBoundForm::simplified));
    });
    if (seed) {
        const ChannelState ch = sample_channels(params, *seed);
        const Solution p2 = solve_p2_suboptimal(params, ch, targets);
        row("weakest-receiver sum-rate bound (seed " + std::to_string(*seed) + ")", "bits/s/Hz",
            [&] { return Pair{analysis::weakest_receiver_bound(p2, ch, params), ""}; });
        row("energy-first sum-rate on the same draw", "bits/s/Hz", [&] { return Pair{p2.sum_rate, ""}; });
    }
    if (!out.empty()) {
        write_file(out, j.dump(2) + "\n");
    }
    return status;
}

void print_summary(const mc::CurveData& d)
{
    const auto& cfg = d.config;
    std::printf("\n%s: %s vs %s, %d trials, seed %llu, %.1f s\n", cfg.name.c_str(), d.metric.c_str(),
                mc::to_string(cfg.sweep.variable).c_str(), cfg.trials, static_cast<unsigned long long>(cfg.seed),
                d.wall_seconds);
    const bool rate = mc::reports_sum_rate(cfg.kind);
    std::printf("%12s", mc::to_string(cfg.sweep.variable).c_str());
    for (const auto& c : d.curves) {
        std::printf(" %24s", mc::to_string(c.scheme).c_str());
    }
    // Gain of the best DEBIT scheme over the baseline.
    const mc::SchemeCurve* base = d.curve(mc::Scheme::baseline);
    std::printf("%s\n", base ? (rate ? "   best - baseline" : "   best / baseline") : "");
    for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i) {
        const double x = cfg.sweep.values[i];
        std::printf("%12.6g", x);
        double best = -1.0;
        double base_value = -1.0;
        for (const auto& c : d.curves) {
            const auto it = std::find_if(c.points.begin(), c.points.end(),
                                         [&](const mc::PointStats& p) { return p.sweep_value == x; });
            if (it == c.points.end()) {
                std::printf(" %24s", "-");
                continue;
            }
            if (!it->error.empty()) {
                std::printf(" %24s", "error");
                continue;
            }
            if (c.scheme == mc::Scheme::bound) {
                std::printf(" %24.6g", it->mean);
            } else {
                std::printf(" %13.6g +- %-8.2g", it->mean, it->stderr_of_mean);
            }
            if (c.scheme == mc::Scheme::baseline) {
                base_value = it->mean;
            } else if (c.scheme != mc::Scheme::bound) {
                best = std::max(best, it->mean);
            }
        }
        if (base && best >= 0.0 && base_value >= 0.0) {
            if (rate) {
                std::printf(" %17.4g", best - base_value);
            } else if (base_value > 0.0) {
                std::printf(" %17.4g", best / base_value);
            } else {
                std::printf(" %17s", "inf");
            }
        }
        std::printf("\n");
    }
    for (const auto& c : d.curves) {
        for (const auto& p : c.points) {
            if (!p.error.empty()) {
                std::printf("error: %s at %g: %s\n", mc::to_string(c.scheme).c_str(), p.sweep_value, p.error.c_str());
            }
        }
    }
    std::fflush(stdout);
}

int cmd_experiment(const ParamFlags& flags, const std::string& preset_name, std::optional<int> trials,
                   std::optional<std::uint64_t> seed, const std::string& out_dir, int workers_flag, bool quiet)
{
    Settings s = flags.settings();
    if (!preset_name.empty()) {
        s["preset"] = preset_name;
    }
    if (trials) {
        s["trials"] = std::to_string(*trials);
    }
    if (seed) {
        s["seed"] = std::to_string(*seed);
    }
    if (!s.contains("preset") && !s.contains("kind")) {
        throw UsageError("experiment needs --preset or a config file describing the sweep");
    }
    const mc::ExperimentConfig cfg = resolve_experiment(s);
    mc::RunOptions opt;
    opt.workers = resolve_workers(workers_flag, std::getenv("DEBIT_WORKERS"));

    std::filesystem::create_directories(out_dir);
    const RunPaths paths = run_paths(cfg, out_dir);
    nlohmann::ordered_json manifest;
    manifest["version"] = std::string(debit::version);
    manifest["status"] = "running";
    manifest["started"] = utc_now();
    manifest["finished"] = nullptr;
    manifest["seed"] = cfg.seed;
    manifest["workers"] = opt.workers;
    manifest["settings"] = to_settings(cfg);
    manifest["config"] = to_json(cfg);
    auto& outputs = manifest["outputs"];
    outputs["curves"] = paths.curves.string();
    for (const auto& [scheme, path] : paths.csv) {
        outputs["csv"][mc::to_string(scheme)] = path.string();
    }
    write_file(paths.manifest, manifest.dump(2) + "\n");

    if (!quiet) {
        opt.progress = [last = -1](std::size_t done, std::size_t total) mutable {
            const int pct = static_cast<int>(100 * done / std::max<std::size_t>(total, 1));
            if (pct / 5 != last / 5) {
                last = pct;
                std::fprintf(stderr, "\r%3d%% (%zu/%zu trials)", pct, done, total);
                if (done == total) {
                    std::fprintf(stderr, "\n");
                }
            }
        };
    }
    const mc::CurveData data = mc::run_experiment(cfg, opt);
    for (const auto& c : data.curves) {
        write_file(paths.csv.at(c.scheme), curve_csv(c));
    }
    write_file(paths.curves, to_json(data).dump(2) + "\n");
    manifest["status"] = data.ok() ? "ok" : "errors";
    manifest["finished"] = utc_now();
    manifest["wall_seconds"] = data.wall_seconds;
    write_file(paths.manifest, manifest.dump(2) + "\n");
    print_summary(data);
    std::printf("manifest: %s\n", paths.manifest.string().c_str());
    return data.ok() ? exit_ok : exit_error;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Energy beamforming and information transfer over multiway relay networks"};
    app.set_version_flag("--version", std::string(debit::version));
    app.require_subcommand(1);

    ParamFlags solve_flags;
    std::string problem;
    std::string mode;
    std::uint64_t solve_seed = 1;
    std::string solve_out;
    CLI::App* solve = app.add_subcommand("solve", "Solve one problem on one seeded channel draw");
    solve_flags.attach(solve);
    solve->add_option("--problem", problem, "p1, p2, p3, p4 or baseline")
        ->required()
        ->check(CLI::IsMember({"p1", "p2", "p3", "p4", "baseline"}));
    solve->add_option("--baseline-mode", mode, "Baseline objective: sum-rate or harvest")
        ->check(CLI::IsMember({"sum-rate", "harvest"}));
    solve->add_option("--seed", solve_seed, "Channel seed");
    solve->add_option("--out", solve_out, "Write the solution as JSON");

    ParamFlags bound_flags;
    std::optional<std::uint64_t> bound_seed;
    std::string bound_out;
    CLI::App* bounds = app.add_subcommand("bounds", "Evaluate the closed-form bounds");
    bound_flags.attach(bounds);
    bounds->add_option("--seed", bound_seed, "Also evaluate the per-realization bound on this draw");
    bounds->add_option("--out", bound_out, "Write the values as JSON");

    ParamFlags exp_flags;
    std::string preset_name;
    std::optional<int> trials;
    std::optional<std::uint64_t> exp_seed;
    std::string out_dir = ".";
    int workers = -1;
    bool quiet = false;
    CLI::App* experiment = app.add_subcommand("experiment", "Run a Monte Carlo sweep");
    exp_flags.attach(experiment, false);
    experiment->add_option("--preset", preset_name, "fig2, fig3, fig4 or fig5")
        ->check(CLI::IsMember(debit::mc::preset_names()));
    experiment->add_option("--trials", trials, "Channel draws per sweep point")->check(CLI::PositiveNumber);
    experiment->add_option("--seed", exp_seed, "Master seed");
    experiment->add_option("--out-dir", out_dir, "Directory for the manifest, CSV and JSON files");
    experiment->add_option("--workers", workers, "Worker threads (0: all cores; default from DEBIT_WORKERS)")
        ->check(CLI::NonNegativeNumber);
    experiment->add_flag("--quiet", quiet, "No progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (solve->parsed()) {
            return cmd_solve(solve_flags, problem, mode, solve_seed, solve_out);
        }
        if (bounds->parsed()) {
            return cmd_bounds(bound_flags, bound_seed, bound_out);
        }
        return cmd_experiment(exp_flags, preset_name, trials, exp_seed, out_dir, workers, quiet);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_error;
    }
}
