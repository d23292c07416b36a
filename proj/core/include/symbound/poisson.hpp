/*
 * Copyright 2026 The symbound Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <vector>

namespace symbound::numerics {

/// Poisson weights of parameter lambda_t, cut at the truncation depth k.
struct PoissonTerms {
    double lambda_t = 0.0;
    std::size_t k = 0;
    std::vector<double> phi;  // phi[i] = lambda_t^i e^-lambda_t / i!, i = 0..k
    std::vector<double> psi;  // psi[i] = sum_{j > i} phi[j]
};

inline constexpr std::size_t kDefaultIterationCap = 50'000'000;

/// Smallest k such that
///     sum_{i <= k} psi(i) > lambda_t - eps * Lambda / (2 r_max)   (skipped when r_max = 0)
///     psi(k) * f_max < eps / 2                                    (skipped when f_max = 0)
/// and the weights up to k. Throws IterationCapExceeded when k would
/// exceed `cap`, std::invalid_argument on bad parameters.
PoissonTerms poisson_terms(double lambda_t, double eps, double r_max, double f_max, double Lambda,
                           std::size_t cap = kDefaultIterationCap);

}  // namespace symbound::numerics
