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

#include "debit/bounds.hpp"

#include "debit/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace debit::analysis {

namespace {

constexpr double pi = std::numbers::pi;

double symmetric_power(const SystemParams& params) { return params.power(0); }

} // namespace

BoundInputs bound_inputs(const SystemParams& params, const Targets& targets)
{
    params.validate();
    targets.validate();
    BoundInputs b;
    const double K = params.num_users;
    const double G = params.avg_channel_gain;
    const double P = symmetric_power(params);
    const double rootk = std::sqrt(K);
    b.mu_h = std::sqrt(pi * G / 4.0);
    b.sigma_h = std::sqrt((4.0 - pi) * G / 4.0);
    b.c0 = targets.c0(params);
    b.xi0 = targets.xi0();
    b.nu0 = targets.nu0(params);
    b.p_fs = special::normal_sf(b.c0 / (rootk * b.sigma_h) - rootk * b.mu_h / b.sigma_h);

    try {
        const double g1 = special::g_function(b.c0 / rootk, std::sqrt(K * pi * G / 4.0), b.sigma_h);
        b.d1 = K * g1 * g1;
        b.d2 = rootk * special::g_function(b.c0 * b.c0 / (K * rootk), rootk * G, G);
    } catch (const std::overflow_error&) {
        // The feasible event carries no representable mass, so every bound built on it is zero.
        b.p_fs = 0.0;
        b.feasible = false;
        return b;
    }
    b.alpha0 = targets.harvest / (params.efficiency * params.peak_power * b.d1);
    const double limit = std::min(1.0, P / params.peak_power);
    b.feasible = b.alpha0 < limit || (targets.harvest == 0.0);
    if (b.feasible) {
        b.omega0 = params.relay_power / ((P - b.alpha0 * params.peak_power) * b.d2);
        b.p2_0 = (P - b.alpha0 * params.peak_power) / (1.0 - b.alpha0);
    }
    return b;
}

double feasibility_probability(const SystemParams& params, const Targets& targets)
{
    return bound_inputs(params, targets).p_fs;
}

double weakest_receiver_bound(const Solution& energy_first, const ChannelState& channels, const SystemParams& params)
{
    if (!energy_first.feasible) {
        return 0.0;
    }
    const Allocation& a = energy_first.alloc;
    const double weakest = sorted_min_gain(channels);
    double received = 0.0;
    for (int m = 0; m < channels.num_users(); ++m) {
        received += channels.power_gain(m) * a.info_power_2[static_cast<std::size_t>(m)];
    }
    const double w = a.relay_gain;
    return (1.0 - a.time_split) * capacity(w * weakest * received / (w * weakest * params.relay_noise + params.user_noise));
}

BoundValue avg_sum_rate_lower_bound(const SystemParams& params, const Targets& targets)
{
    const BoundInputs b = bound_inputs(params, targets);
    BoundValue out;
    if (params.num_users < 8) {
        out.small_network = true;
        out.warning = "bound derived for large networks; K < 8 is outside that regime";
    }
    if (!b.feasible) {
        out.feasible = false;
        out.value = 0.0;
        return out;
    }
    const double K = params.num_users;
    const double G = params.avg_channel_gain;
    const double snr = G * params.relay_power
        / ((K + G * b.omega0) * (1.0 - b.alpha0) * params.user_noise);
    out.value = b.p_fs * (1.0 - b.alpha0) * capacity(snr);
    return out;
}

std::string to_string(Asymptote variant)
{
    switch (variant) {
    case Asymptote::large_k: return "large-K approximation";
    case Asymptote::scaled_relay_limit: return "limit with relay power K P";
    case Asymptote::fixed_relay_limit: return "limit with fixed relay power";
    }
    return "unknown";
}

double asymptotic_sum_rate(const SystemParams& params, const Targets& targets, Asymptote variant)
{
    params.validate();
    targets.validate();
    const double K = params.num_users;
    const double G = params.avg_channel_gain;
    const double P = symmetric_power(params);
    const double s2 = params.user_noise;
    switch (variant) {
    case Asymptote::large_k:
        return capacity(K * G * P * params.relay_power / ((K * K * P + params.relay_power) * s2));
    case Asymptote::scaled_relay_limit:
        if (std::abs(params.relay_power - K * P) > 1e-9 * K * P) {
            throw std::domain_error("the scaled-relay limit needs P_R = K P");
        }
        return capacity(P * G / s2);
    case Asymptote::fixed_relay_limit:
        return 0.0;
    }
    return 0.0;
}

BoundValue avg_harvest_lower_bound(const SystemParams& params, const Targets& targets, HarvestBoundForm form)
{
    params.validate();
    targets.validate();
    BoundValue out;
    if (params.num_users < 8) {
        out.small_network = true;
        out.warning = "bound derived for large networks; K < 8 is outside that regime";
    }
    const double K = params.num_users;
    const double G = params.avg_channel_gain;
    const double P = symmetric_power(params);
    const double nu0 = targets.nu0(params);
    double bracket = 0.0;
    if (form == HarvestBoundForm::exact) {
        // nu0 E1(nu0 / K) -> 0 as nu0 -> 0.
        const double tail = nu0 > 0.0 ? nu0 * special::exp_integral_e1(nu0 / K) : 0.0;
        bracket = K * K - nu0 * (1.0 + tail) * K;
    } else {
        bracket = (1.0 - nu0) * K * K - nu0 * K;
    }
    if (!(bracket >= 0.0)) { // also catches nu0 overflowing to infinity
        out.feasible = false;
        out.value = 0.0;
        return out;
    }
    out.value = pi / 4.0 * params.efficiency * G * P * bracket * std::exp(-nu0);
    return out;
}

} // namespace debit::analysis
