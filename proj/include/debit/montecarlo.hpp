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

#ifndef DEBIT_MONTECARLO_HPP
#define DEBIT_MONTECARLO_HPP

#include "debit/model.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

// Seeded experiment campaigns: sweep one parameter, solve every requested
// scheme on independent fading draws and average. Every trial owns its seed,
// so results do not depend on how trials are spread over workers.

namespace debit::mc {

enum class ExperimentKind { sumrate_vs_papr, rate_energy_region, sumrate_vs_users, harvest_vs_users, bound_tightness };

enum class Scheme { p1, p2, p3, p4, baseline, bound };

enum class SweepVariable {
    papr_db,            // peak power = P * 10^(value/10)
    harvest_target_dbm, // harvest target in dBm
    users,              // K; the relay budget keeps its per-user share
    sum_rate_target,    // bits/s/Hz
};

/// Whether a kind reports sum-rate (bits/s/Hz) or harvested power (watts).
bool reports_sum_rate(ExperimentKind kind);

std::string to_string(ExperimentKind kind);
std::string to_string(Scheme scheme);
std::string to_string(SweepVariable variable);
ExperimentKind parse_kind(std::string_view text);
Scheme parse_scheme(std::string_view text);
SweepVariable parse_sweep_variable(std::string_view text);

struct Sweep {
    SweepVariable variable = SweepVariable::users;
    std::vector<double> values;
};

struct ExperimentConfig {
    std::string name;
    ExperimentKind kind = ExperimentKind::sumrate_vs_users;
    SystemParams params;
    Targets targets;
    Sweep sweep;
    int trials = 2000;
    std::uint64_t seed = 1;
    std::vector<Scheme> schemes;
    /// When set, P1/P3 are skipped at sweep points with more users than the
    /// optimal schemes support instead of rejecting the configuration.
    bool clip_optimal_schemes = false;

    /// Throws std::invalid_argument with a readable reason.
    void validate() const;
    /// Network and targets in force at sweep point i.
    SystemParams params_at(std::size_t i) const;
    Targets targets_at(std::size_t i) const;
    /// True when the scheme is evaluated at sweep point i.
    bool runs(Scheme scheme, std::size_t i) const;
};

/// Figure presets: fig2 (sum-rate vs PAPR), fig3 (sum-rate vs harvest
/// target), fig4 (sum-rate vs users), fig5 (harvest vs users). Throws
/// std::invalid_argument for an unknown name.
ExperimentConfig preset(std::string_view name);
std::vector<std::string> preset_names();

/// Counter-based seed of one trial; independent of evaluation order.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t sweep_index, std::uint64_t trial_index);

struct PointStats {
    double sweep_value = 0.0;
    double mean = 0.0;   // infeasible trials count as zero
    double stderr_of_mean = 0.0;
    int trials = 0;
    double feasible_fraction = 0.0;
    std::string error;   // nonempty when a solver failure aborted this point
};

struct SchemeCurve {
    Scheme scheme = Scheme::p2;
    std::vector<PointStats> points; // only sweep points where the scheme runs
};

struct CurveData {
    ExperimentConfig config;
    std::string metric; // "sum_rate_bps_hz" or "harvested_w"
    std::vector<SchemeCurve> curves;
    std::string version;
    double wall_seconds = 0.0;

    bool ok() const;
    const SchemeCurve* curve(Scheme scheme) const;
};

struct RunOptions {
    int workers = 1; // 0 uses the hardware concurrency
    /// Called after each finished trial with (finished, total); serialized.
    std::function<void(std::size_t, std::size_t)> progress;
};

CurveData run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

} // namespace debit::mc

#endif // DEBIT_MONTECARLO_HPP
