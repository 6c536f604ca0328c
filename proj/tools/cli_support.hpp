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

#ifndef DEBIT_TOOLS_CLI_SUPPORT_HPP
#define DEBIT_TOOLS_CLI_SUPPORT_HPP

#include "debit/model.hpp"
#include "debit/montecarlo.hpp"
#include "debit/optimizers.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace debit::cli {

/// Raised for malformed input the user can fix; maps to the usage exit code.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { exit_ok = 0, exit_error = 1, exit_infeasible = 2, exit_usage = 64 };

/// Flat key/value settings. Later assignments win, so file values are loaded
/// first and flag values applied on top.
using Settings = std::map<std::string, std::string>;

/// Parses "key = value" lines; '#' starts a comment. Throws UsageError.
Settings parse_settings(const std::string& text, const std::string& origin = "config");
/// Reads a settings file, or the "settings" object of a run manifest when the
/// file is JSON.
Settings load_settings(const std::filesystem::path& path);
/// Applies "key=value" assignments from the command line.
void apply_assignments(Settings& settings, const std::vector<std::string>& assignments);

/// Flat settings that reproduce an experiment exactly, every default
/// expanded and powers in watts. Feeding them back to resolve_experiment
/// returns the same configuration.
Settings to_settings(const mc::ExperimentConfig& config);

/// Every key understood by resolve_params / resolve_targets / resolve_experiment.
const std::vector<std::string>& known_keys();
/// Throws UsageError naming the first unknown key.
void check_keys(const Settings& settings);

/// Reference network for num_users (default_users when unset), then every
/// override. Powers come as "<key>" in watts or "<key>_dbm"; the relay and
/// peak budgets follow the user budget unless set; peak_power may also be
/// given as papr_db; avg_channel_gain follows distance unless set.
SystemParams resolve_params(const Settings& settings, int default_users);
Targets resolve_targets(const Settings& settings, const Targets& defaults = {});

/// Preset named by "preset" (if any) with every override applied.
mc::ExperimentConfig resolve_experiment(const Settings& settings);

nlohmann::ordered_json to_json(const SystemParams& params);
nlohmann::ordered_json to_json(const Targets& targets);
nlohmann::ordered_json to_json(const mc::ExperimentConfig& config);
nlohmann::ordered_json to_json(const Solution& solution);
nlohmann::ordered_json to_json(const mc::CurveData& data);

/// CSV of one curve: fixed columns, 12 significant digits, LF endings.
std::string curve_csv(const mc::SchemeCurve& curve);

/// File names used by an experiment run inside its output directory.
struct RunPaths {
    std::filesystem::path manifest;
    std::filesystem::path curves;
    std::map<mc::Scheme, std::filesystem::path> csv;
};
RunPaths run_paths(const mc::ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Writes text exactly (binary mode, no newline translation).
void write_file(const std::filesystem::path& path, const std::string& text);

/// UTC timestamp in ISO 8601.
std::string utc_now();

/// Worker count from an explicit flag value, else DEBIT_WORKERS, else 0
/// (all hardware threads). Throws UsageError for a malformed value.
int resolve_workers(int flag_value, const char* env_value);

} // namespace debit::cli

#endif // DEBIT_TOOLS_CLI_SUPPORT_HPP
