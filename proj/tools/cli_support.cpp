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

#include "cli_support.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace debit::cli {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double parse_double(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw UsageError("'" + key + "' expects a number, got '" + text + "'");
    }
    return v;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& text)
{
    Int v{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw UsageError("'" + key + "' expects an integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw UsageError("'" + key + "' expects true or false, got '" + text + "'");
}

const std::string* find(const Settings& s, const std::string& key)
{
    const auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
}

// Power given as "<key>" in watts or "<key>_dbm"; never both.
std::vector<double> power_list(const Settings& s, const std::string& key)
{
    const std::string* watts = find(s, key);
    const std::string* dbm = find(s, key + "_dbm");
    if (watts && dbm) {
        throw UsageError("give either '" + key + "' or '" + key + "_dbm', not both");
    }
    std::vector<double> out;
    if (watts) {
        for (const auto& item : split_list(*watts)) {
            out.push_back(parse_double(key, item));
        }
    } else if (dbm) {
        for (const auto& item : split_list(*dbm)) {
            out.push_back(to_watts(Dbm{parse_double(key + "_dbm", item)}));
        }
    }
    if ((watts || dbm) && out.empty()) {
        throw UsageError("'" + key + "' has no value");
    }
    return out;
}

std::optional<double> power(const Settings& s, const std::string& key)
{
    const std::vector<double> v = power_list(s, key);
    if (v.empty()) {
        return std::nullopt;
    }
    if (v.size() != 1) {
        throw UsageError("'" + key + "' takes a single value");
    }
    return v.front();
}

std::string number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<double> parse_sweep_values(const std::string& text)
{
    // "first:last" or "first:last:step" expands to a range; otherwise a list.
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, ':')) {
            parts.push_back(trim(item));
        }
        if (parts.size() < 2 || parts.size() > 3) {
            throw UsageError("sweep range must read first:last or first:last:step");
        }
        const double first = parse_double("sweep_values", parts[0]);
        const double last = parse_double("sweep_values", parts[1]);
        const double step = parts.size() == 3 ? parse_double("sweep_values", parts[2]) : 1.0;
        if (step <= 0.0 || last < first) {
            throw UsageError("sweep range needs first <= last and a positive step");
        }
        std::vector<double> out;
        const auto n = static_cast<long>(std::floor((last - first) / step + 1e-9));
        if (n > 100000) {
            throw UsageError("sweep range is too long");
        }
        for (long i = 0; i <= n; ++i) {
            out.push_back(first + static_cast<double>(i) * step);
        }
        return out;
    }
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        out.push_back(parse_double("sweep_values", item));
    }
    return out;
}

} // namespace

Settings parse_settings(const std::string& text, const std::string& origin)
{
    Settings out;
    std::stringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(origin + ":" + std::to_string(number) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        if (key.empty()) {
            throw UsageError(origin + ":" + std::to_string(number) + ": empty key");
        }
        out[key] = trim(std::string_view(line).substr(eq + 1));
    }
    return out;
}

Settings load_settings(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (path.extension() == ".json") {
        const auto doc = nlohmann::json::parse(text, nullptr, false);
        if (doc.is_discarded() || !doc.contains("settings") || !doc["settings"].is_object()) {
            throw UsageError(path.string() + " is not a run manifest with a settings object");
        }
        Settings out;
        for (const auto& [key, value] : doc["settings"].items()) {
            out[key] = value.is_string() ? value.get<std::string>() : value.dump();
        }
        return out;
    }
    return parse_settings(text, path.string());
}

void apply_assignments(Settings& settings, const std::vector<std::string>& assignments)
{
    for (const auto& a : assignments) {
        const Settings one = parse_settings(a, "--set " + a);
        if (one.empty()) {
            throw UsageError("--set expects key=value, got '" + a + "'");
        }
        for (const auto& [k, v] : one) {
            settings[k] = v;
        }
    }
}

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k{"num_users", "papr_db", "efficiency", "avg_channel_gain", "distance",
                                   "phase_duration", "sum_rate", "preset", "name", "kind", "sweep_variable",
                                   "sweep_values", "trials", "seed", "schemes", "clip_optimal_schemes"};
        for (const char* p : {"user_power", "relay_power", "peak_power", "antenna_noise", "conversion_noise",
                              "relay_noise", "user_noise", "harvest"}) {
            k.emplace_back(p);
            k.emplace_back(std::string(p) + "_dbm");
        }
        return k;
    }();
    return keys;
}

void check_keys(const Settings& settings)
{
    const auto& keys = known_keys();
    for (const auto& [k, v] : settings) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
            throw UsageError("unknown setting '" + k + "'");
        }
    }
}

SystemParams resolve_params(const Settings& s, int default_users)
{
    int k = default_users;
    if (const std::string* v = find(s, "num_users")) {
        k = parse_int<int>("num_users", *v);
    }
    if (k < 1) {
        throw UsageError("num_users must be at least 1");
    }
    SystemParams p = reference_params(k);
    if (const auto budgets = power_list(s, "user_power"); !budgets.empty()) {
        if (budgets.size() == 1) {
            p.user_power.assign(static_cast<std::size_t>(k), budgets.front());
        } else if (budgets.size() == static_cast<std::size_t>(k)) {
            p.user_power = budgets;
        } else {
            throw UsageError("user_power lists " + std::to_string(budgets.size()) + " budgets for "
                             + std::to_string(k) + " users");
        }
        p.relay_power = k * p.user_power.front();
        p.peak_power = 10.0 * p.user_power.front();
    }
    if (const auto v = power(s, "relay_power")) {
        p.relay_power = *v;
    }
    const auto peak = power(s, "peak_power");
    const std::string* papr = find(s, "papr_db");
    if (peak && papr) {
        throw UsageError("give either peak_power or papr_db, not both");
    }
    if (peak) {
        p.peak_power = *peak;
    } else if (papr) {
        p.peak_power = p.user_power.front() * db_to_ratio(parse_double("papr_db", *papr));
    }
    if (const auto v = power(s, "antenna_noise")) {
        p.antenna_noise = *v;
    }
    if (const auto v = power(s, "conversion_noise")) {
        p.conversion_noise = *v;
    }
    if (const auto v = power(s, "relay_noise")) {
        p.relay_noise = *v;
    }
    if (const auto v = power(s, "user_noise")) {
        p.user_noise = *v;
    }
    if (const std::string* v = find(s, "efficiency")) {
        p.efficiency = parse_double("efficiency", *v);
    }
    if (const std::string* v = find(s, "phase_duration")) {
        p.phase_duration = parse_double("phase_duration", *v);
    }
    if (const std::string* v = find(s, "distance")) {
        p.distance = parse_double("distance", *v);
        p.avg_channel_gain = gain_from_distance(p.distance);
    }
    if (const std::string* v = find(s, "avg_channel_gain")) {
        p.avg_channel_gain = parse_double("avg_channel_gain", *v);
    }
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return p;
}

Targets resolve_targets(const Settings& s, const Targets& defaults)
{
    Targets t = defaults;
    if (const auto v = power(s, "harvest")) {
        t.harvest = *v;
    }
    if (const std::string* v = find(s, "sum_rate")) {
        t.sum_rate = parse_double("sum_rate", *v);
    }
    try {
        t.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return t;
}

mc::ExperimentConfig resolve_experiment(const Settings& s)
{
    check_keys(s);
    mc::ExperimentConfig c;
    try {
        if (const std::string* v = find(s, "preset")) {
            c = mc::preset(*v);
        } else {
            c.name = "custom";
            for (const char* required : {"kind", "sweep_variable", "sweep_values", "schemes"}) {
                if (!find(s, required)) {
                    throw UsageError(std::string("a custom experiment needs '") + required + "' (or use a preset)");
                }
            }
        }
        if (const std::string* v = find(s, "name")) {
            c.name = *v;
        }
        if (const std::string* v = find(s, "kind")) {
            c.kind = mc::parse_kind(*v);
        }
        if (const std::string* v = find(s, "sweep_variable")) {
            c.sweep.variable = mc::parse_sweep_variable(*v);
        }
        if (const std::string* v = find(s, "schemes")) {
            c.schemes.clear();
            for (const auto& item : split_list(*v)) {
                c.schemes.push_back(mc::parse_scheme(item));
            }
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const int default_users = find(s, "preset") ? c.params.num_users : 8;
    c.params = resolve_params(s, default_users);
    c.targets = resolve_targets(s, c.targets);
    if (const std::string* v = find(s, "sweep_values")) {
        c.sweep.values = parse_sweep_values(*v);
    }
    if (const std::string* v = find(s, "trials")) {
        c.trials = parse_int<int>("trials", *v);
    }
    if (const std::string* v = find(s, "seed")) {
        c.seed = parse_int<std::uint64_t>("seed", *v);
    }
    if (const std::string* v = find(s, "clip_optimal_schemes")) {
        c.clip_optimal_schemes = parse_bool("clip_optimal_schemes", *v);
    }
    if (c.name.empty() || c.name.find_first_of("/\\ ") != std::string::npos) {
        throw UsageError("experiment name must be nonempty without spaces or slashes");
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return c;
}

Settings to_settings(const mc::ExperimentConfig& c)
{
    Settings s;
    const SystemParams& p = c.params;
    s["name"] = c.name;
    s["kind"] = mc::to_string(c.kind);
    s["num_users"] = std::to_string(p.num_users);
    std::string budgets;
    for (double w : p.user_power) {
        budgets += (budgets.empty() ? "" : ",") + number(w);
    }
    s["user_power"] = budgets;
    s["relay_power"] = number(p.relay_power);
    s["peak_power"] = number(p.peak_power);
    s["antenna_noise"] = number(p.antenna_noise);
    s["conversion_noise"] = number(p.conversion_noise);
    s["relay_noise"] = number(p.relay_noise);
    s["user_noise"] = number(p.user_noise);
    s["efficiency"] = number(p.efficiency);
    s["distance"] = number(p.distance);
    s["avg_channel_gain"] = number(p.avg_channel_gain);
    s["phase_duration"] = number(p.phase_duration);
    s["harvest"] = number(c.targets.harvest);
    s["sum_rate"] = number(c.targets.sum_rate);
    s["sweep_variable"] = mc::to_string(c.sweep.variable);
    std::string values;
    for (double v : c.sweep.values) {
        values += (values.empty() ? "" : ",") + number(v);
    }
    s["sweep_values"] = values;
    s["trials"] = std::to_string(c.trials);
    s["seed"] = std::to_string(c.seed);
    std::string schemes;
    for (mc::Scheme sc : c.schemes) {
        schemes += (schemes.empty() ? "" : ",") + mc::to_string(sc);
    }
    s["schemes"] = schemes;
    s["clip_optimal_schemes"] = c.clip_optimal_schemes ? "true" : "false";
    return s;
}

nlohmann::ordered_json to_json(const SystemParams& p)
{
    nlohmann::ordered_json j;
    j["num_users"] = p.num_users;
    j["user_power"] = p.user_power;
    j["relay_power"] = p.relay_power;
    j["peak_power"] = p.peak_power;
    j["antenna_noise"] = p.antenna_noise;
    j["conversion_noise"] = p.conversion_noise;
    j["relay_noise"] = p.relay_noise;
    j["user_noise"] = p.user_noise;
    j["efficiency"] = p.efficiency;
    j["avg_channel_gain"] = p.avg_channel_gain;
    j["phase_duration"] = p.phase_duration;
    j["distance"] = p.distance;
    return j;
}

nlohmann::ordered_json to_json(const Targets& t)
{
    nlohmann::ordered_json j;
    j["harvest"] = t.harvest;
    j["harvest_dbm"] = t.harvest > 0.0 ? nlohmann::ordered_json(to_dbm(t.harvest).value) : nlohmann::ordered_json();
    j["sum_rate"] = t.sum_rate;
    return j;
}

nlohmann::ordered_json to_json(const mc::ExperimentConfig& c)
{
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["kind"] = mc::to_string(c.kind);
    j["params"] = to_json(c.params);
    j["targets"] = to_json(c.targets);
    j["sweep"] = {{"variable", mc::to_string(c.sweep.variable)}, {"values", c.sweep.values}};
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    auto& schemes = j["schemes"] = nlohmann::ordered_json::array();
    for (mc::Scheme s : c.schemes) {
        schemes.push_back(mc::to_string(s));
    }
    j["clip_optimal_schemes"] = c.clip_optimal_schemes;
    return j;
}

nlohmann::ordered_json to_json(const Solution& s)
{
    nlohmann::ordered_json j;
    j["feasible"] = s.feasible;
    j["sum_rate"] = s.sum_rate;
    j["harvested_w"] = s.harvested;
    j["harvested_dbm"] = s.harvested > 0.0 ? nlohmann::ordered_json(to_dbm(s.harvested).value) : nlohmann::ordered_json();
    j["rates"] = s.rates;
    j["allocation"] = {
        {"time_split", s.alloc.time_split},
        {"power_split", s.alloc.power_split},
        {"relay_gain", s.alloc.relay_gain},
        {"energy_power", s.alloc.energy_power},
        {"info_power_1", s.alloc.info_power_1},
        {"info_power_2", s.alloc.info_power_2},
    };
    j["diagnostics"] = {
        {"scheme", s.diagnostics.scheme},
        {"inner_solves", s.diagnostics.inner_solves},
        {"lp_solves", s.diagnostics.lp_solves},
        {"cutting_rounds", s.diagnostics.cutting_rounds},
        {"note", s.diagnostics.note},
    };
    return j;
}

nlohmann::ordered_json to_json(const mc::CurveData& d)
{
    nlohmann::ordered_json j;
    j["version"] = d.version;
    j["metric"] = d.metric;
    j["wall_seconds"] = d.wall_seconds;
    j["config"] = to_json(d.config);
    auto& curves = j["curves"] = nlohmann::ordered_json::array();
    for (const auto& c : d.curves) {
        nlohmann::ordered_json curve;
        curve["scheme"] = mc::to_string(c.scheme);
        auto& points = curve["points"] = nlohmann::ordered_json::array();
        for (const auto& p : c.points) {
            nlohmann::ordered_json q;
            q["sweep_value"] = p.sweep_value;
            q["mean"] = p.mean;
            q["stderr"] = p.stderr_of_mean;
            q["trials"] = p.trials;
            q["feasible_fraction"] = p.feasible_fraction;
            if (!p.error.empty()) {
                q["error"] = p.error;
            }
            points.push_back(std::move(q));
        }
        curves.push_back(std::move(curve));
    }
    return j;
}

std::string curve_csv(const mc::SchemeCurve& curve)
{
    std::string out = "sweep_value,mean,stderr,trials,feasible_fraction\n";
    for (const auto& p : curve.points) {
        out += csv_number(p.sweep_value) + ',' + csv_number(p.mean) + ',' + csv_number(p.stderr_of_mean) + ','
            + std::to_string(p.trials) + ',' + csv_number(p.feasible_fraction) + '\n';
    }
    return out;
}

RunPaths run_paths(const mc::ExperimentConfig& config, const std::filesystem::path& out_dir)
{
    RunPaths r;
    r.manifest = out_dir / (config.name + "_manifest.json");
    r.curves = out_dir / (config.name + "_curves.json");
    for (mc::Scheme s : config.schemes) {
        r.csv[s] = out_dir / (config.name + "_" + mc::to_string(s) + ".csv");
    }
    return r;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

std::string utc_now()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int resolve_workers(int flag_value, const char* env_value)
{
    if (flag_value >= 0) {
        return flag_value;
    }
    if (env_value == nullptr || *env_value == '\0') {
        return 0;
    }
    const std::string text = trim(env_value);
    const int v = parse_int<int>("DEBIT_WORKERS", text);
    if (v < 0) {
        throw UsageError("DEBIT_WORKERS must be nonnegative");
    }
    return v;
}

} // namespace debit::cli
