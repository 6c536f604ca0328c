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

#ifndef DEBIT_MODEL_HPP
#define DEBIT_MODEL_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

// Network constants, fading realizations and the transceiver decision record.
//
// Every power inside the library is in watts and every gain is linear. dBm only
// appears at configuration boundaries through Dbm / to_watts / to_dbm.

namespace debit {

/// Power level in dBm. Kept distinct from plain doubles so that a dBm figure can
/// never be passed where watts are expected.
struct Dbm {
    double value = 0.0;
};

double to_watts(Dbm level);
Dbm to_dbm(double watts);
double db_to_ratio(double db);
double ratio_to_db(double ratio);

/// Average channel power gain 10^-2 d^-3 for a user-relay distance in meters.
double gain_from_distance(double distance_m);

/// Static network constants. Per-user power budgets are stored individually;
/// the symmetric network is the case where all entries are equal.
struct SystemParams {
    int num_users = 2;
    std::vector<double> user_power;      // P_k, average MAC-phase budget per user
    double relay_power = 2.0;            // P_R
    double peak_power = 10.0;            // P_peak
    double antenna_noise = 5.0119e-8;    // relay antenna noise variance
    double conversion_noise = 5.0119e-8; // passband-to-baseband conversion noise variance
    double relay_noise = 1e-7;           // relay noise in the second subphase
    double user_noise = 1e-7;            // receiver noise at every user
    double efficiency = 0.7;             // energy conversion efficiency
    double avg_channel_gain = 1e-5;      // E|h_k|^2
    double phase_duration = 1.0;         // seconds
    double distance = 10.0;              // meters; informational once the gain is set

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;

    double power(int k) const { return user_power.at(static_cast<std::size_t>(k)); }
    double min_user_power() const;
    double max_user_power() const;

    /// Same network with K users, all other settings kept. Per-user budgets are
    /// resized with the first user's budget.
    SystemParams with_users(int k) const;
};

/// Reference network: d = 10 m, P = 30 dBm, P_R = K P, P_peak = 10 P, antenna and
/// conversion noise -43 dBm, relay and user noise -40 dBm, efficiency 0.7.
SystemParams reference_params(int num_users);

/// Targets for the two problem families. The derived quantities are computed on
/// demand so they can never go stale.
struct Targets {
    double harvest = 0.0;  // P_EH^0 in watts
    double sum_rate = 0.0; // R_sum^0 in bits/s/Hz

    void validate() const;
    /// 2^(2 R_sum^0) - 1
    double xi0() const;
    /// xi0 * sigma^2 / (G P)
    double nu0(const SystemParams& params) const;
    /// sqrt(P_EH^0 / (eta P)); uses the first user's budget (symmetric network).
    double c0(const SystemParams& params) const;
};

/// One fading realization.
struct ChannelState {
    std::vector<std::complex<double>> gains;
    std::vector<double> magnitudes;
    std::vector<int> sort_order; // ascending magnitude, ties by user index

    int num_users() const { return static_cast<int>(gains.size()); }
    double magnitude(int k) const { return magnitudes[static_cast<std::size_t>(k)]; }
    double power_gain(int k) const { return magnitudes[static_cast<std::size_t>(k)] * magnitudes[static_cast<std::size_t>(k)]; }

    /// Builds a realization from complex gains, filling magnitudes and order.
    static ChannelState from_gains(std::vector<std::complex<double>> gains);
    /// Builds a realization from real nonnegative magnitudes (zero phase).
    static ChannelState from_magnitudes(std::span<const double> magnitudes);
};

/// Draws K i.i.d. CN(0, G) gains. Deterministic for a fixed seed.
ChannelState sample_channels(const SystemParams& params, std::uint64_t seed);

/// |h_pi(1)|^2, the weakest power gain.
double sorted_min_gain(const ChannelState& channels);

/// Full transceiver decision.
struct Allocation {
    double time_split = 0.0;  // alpha
    double power_split = 0.0; // theta
    double relay_gain = 0.0;  // omega
    std::vector<double> energy_power; // p_{k,E}
    std::vector<double> info_power_1; // p_{k,1}
    std::vector<double> info_power_2; // p_{k,2}

    static Allocation zeros(int num_users);
    int num_users() const { return static_cast<int>(energy_power.size()); }
};

} // namespace debit

#endif // DEBIT_MODEL_HPP
