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

#ifndef DEBIT_SPECIAL_FUNCTIONS_HPP
#define DEBIT_SPECIAL_FUNCTIONS_HPP

namespace debit::special {

/// Standard normal CDF through erfc, accurate in both tails.
double normal_cdf(double x);

/// Upper tail 1 - Phi(x), computed without cancellation.
double normal_sf(double x);

/// Exponential integral E1(x) for x > 0: power series up to 1, modified
/// Lentz continued fraction beyond. Throws std::domain_error for x <= 0.
double exp_integral_e1(double x);

/// Mean of N(mu, sigma^2) truncated below at zeta. Throws
/// std::overflow_error when the retained tail mass is below 1e-300.
double g_function(double zeta, double mu, double sigma);

} // namespace debit::special

#endif // DEBIT_SPECIAL_FUNCTIONS_HPP
