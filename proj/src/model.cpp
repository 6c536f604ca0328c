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

#include "debit/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace debit {

double to_watts(Dbm level) { return std::pow(10.0, (level.value - 30.0) / 10.0); }

Dbm to_dbm(double watts)
{
    if (!(watts > 0.0)) {
        throw std::domain_error("to_dbm: power must be positive, got " + std::to_string(watts));
    }
    return Dbm{10.0 * std::log10(watts) + 30.0};
}

double db_to_ratio(double db) { return std::pow(10.0, db / 10.0); }

double ratio_to_db(double ratio)
{
    if (!(ratio > 0.0)) {
        throw std::domain_error("ratio_to_db: ratio must be positive");
    }
    return 10.0 * std::log10(ratio);
}

double gain_from_distance(double distance_m)
{
    if (!(distance_m > 0.0)) {
        throw std::invalid_argument("gain_from_distance: distance must be positive");
    }
    return 1e-2 / (distance_m * distance_m * distance_m);
}

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw std::invalid_argument("SystemParams: " + what);
    }
}

} // namespace

void SystemParams::validate() const
{
    require(num_users >= 2, "num_users must be at least 2");
    require(user_power.size() == static_cast<std::size_t>(num_users),
            "user_power must hold one budget per user");
    for (double p : user_power) {
        require(p > 0.0 && std::isfinite(p), "user budgets must be positive");
        require(peak_power >= p, "peak power must be at least every user budget");
    }
    require(relay_power > 0.0 && std::isfinite(relay_power), "relay power must be positive");
    require(peak_power > 0.0 && std::isfinite(peak_power), "peak power must be positive");
    require(antenna_noise > 0.0 && conversion_noise > 0.0 && relay_noise > 0.0 && user_noise > 0.0,
            "noise variances must be positive");
    require(efficiency >= 0.0 && efficiency <= 1.0, "efficiency must lie in [0, 1]");
    require(avg_channel_gain > 0.0 && std::isfinite(avg_channel_gain), "average channel gain must be positive");
    require(phase_duration > 0.0, "phase duration must be positive");
}

double SystemParams::min_user_power() const
{
    return *std::min_element(user_power.begin(), user_power.end());
}

double SystemParams::max_user_power() const
{
    return *std::max_element(user_power.begin(), user_power.end());
}

SystemParams SystemParams::with_users(int k) const
{
    SystemParams out = *this;
    out.num_users = k;
    const double first = user_power.empty() ? 1.0 : user_power.front();
    out.user_power.assign(static_cast<std::size_t>(std::max(k, 0)), first);
    return out;
}

SystemParams reference_params(int num_users)
{
    SystemParams p;
    p.num_users = num_users;
    p.distance = 10.0;
    p.avg_channel_gain = gain_from_distance(p.distance);
    const double per_user = to_watts(Dbm{30.0});
    p.user_power.assign(static_cast<std::size_t>(std::max(num_users, 0)), per_user);
    p.relay_power = num_users * per_user;
    p.peak_power = 10.0 * per_user;
    p.antenna_noise = to_watts(Dbm{-43.0});
    p.conversion_noise = to_watts(Dbm{-43.0});
    p.relay_noise = to_watts(Dbm{-40.0});
    p.user_noise = to_watts(Dbm{-40.0});
    p.efficiency = 0.7;
    p.phase_duration = 1.0;
    return p;
}

void Targets::validate() const
{
    if (!(harvest >= 0.0) || !std::isfinite(harvest)) {
        throw std::invalid_argument("Targets: harvest target must be nonnegative");
    }
    if (!(sum_rate >= 0.0) || !std::isfinite(sum_rate)) {
        throw std::invalid_argument("Targets: sum-rate target must be nonnegative");
    }
}

double Targets::xi0() const { return std::exp2(2.0 * sum_rate) - 1.0; }

double Targets::nu0(const SystemParams& params) const
{
    return xi0() * params.user_noise / (params.avg_channel_gain * params.power(0));
}

double Targets::c0(const SystemParams& params) const
{
    if (params.efficiency <= 0.0) {
        return harvest > 0.0 ? INFINITY : 0.0;
    }
    return std::sqrt(harvest / (params.efficiency * params.power(0)));
}

ChannelState ChannelState::from_gains(std::vector<std::complex<double>> gains)
{
    ChannelState ch;
    ch.gains = std::move(gains);
    ch.magnitudes.resize(ch.gains.size());
    std::transform(ch.gains.begin(), ch.gains.end(), ch.magnitudes.begin(),
                   [](const std::complex<double>& h) { return std::abs(h); });
    ch.sort_order.resize(ch.gains.size());
    std::iota(ch.sort_order.begin(), ch.sort_order.end(), 0);
    std::stable_sort(ch.sort_order.begin(), ch.sort_order.end(),
                     [&](int a, int b) { return ch.magnitudes[a] < ch.magnitudes[b]; });
    return ch;
}

ChannelState ChannelState::from_magnitudes(std::span<const double> magnitudes)
{
    std::vector<std::complex<double>> gains;
    gains.reserve(magnitudes.size());
    for (double m : magnitudes) {
        if (!(m >= 0.0)) {
            throw std::invalid_argument("ChannelState: magnitudes must be nonnegative");
        }
        gains.emplace_back(m, 0.0);
    }
    return from_gains(std::move(gains));
}

ChannelState sample_channels(const SystemParams& params, std::uint64_t seed)
{
    if (params.num_users < 2) {
        throw std::invalid_argument("sample_channels: need at least two users");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(params.avg_channel_gain / 2.0));
    std::vector<std::complex<double>> gains(static_cast<std::size_t>(params.num_users));
    for (auto& h : gains) {
        const double re = normal(rng);
        const double im = normal(rng);
        h = {re, im};
    }
    return ChannelState::from_gains(std::move(gains));
}

double sorted_min_gain(const ChannelState& channels)
{
    const int weakest = channels.sort_order.front();
    return channels.power_gain(weakest);
}

Allocation Allocation::zeros(int num_users)
{
    Allocation a;
    const auto n = static_cast<std::size_t>(num_users);
    a.energy_power.assign(n, 0.0);
    a.info_power_1.assign(n, 0.0);
    a.info_power_2.assign(n, 0.0);
    return a;
}

} // namespace debit
