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

#include "symbound/poisson.hpp"

#include <cmath>
#include <stdexcept>

#include "symbound/errors.hpp"

namespace symbound::numerics {

namespace {

// Weights relative to the mode below this are dropped.
constexpr double kCutoff = 1e-25;

// Normalised weights phi(0..R); entries left of the window are zero.
std::vector<double> weights(double lambda, std::size_t cap) {
    auto mode = static_cast<std::size_t>(std::floor(lambda));
    if (mode > cap) {
        auto estimate = static_cast<std::size_t>(lambda + 5.0 * std::sqrt(lambda));
        throw IterationCapExceeded(estimate, cap);
    }
    std::vector<double> right{1.0};
    for (std::size_t i = mode; right.back() >= kCutoff && lambda > 0.0; ++i) {
        if (i + 1 > cap + 1) break;
        right.push_back(right.back() * lambda / static_cast<double>(i + 1));
    }
    std::vector<double> w(mode + right.size(), 0.0);
    for (std::size_t j = 0; j < right.size(); ++j) w[mode + j] = right[j];
    for (std::size_t i = mode; i > 0; --i) {
        double prev = w[i] * static_cast<double>(i) / lambda;
        if (prev < kCutoff) break;
        w[i - 1] = prev;
    }
    // ascending magnitudes on both flanks: add from the outside in
    double total = 0.0;
    for (std::size_t i = 0; i < mode; ++i) total += w[i];
    double right_total = 0.0;
    for (std::size_t i = w.size(); i-- > mode;) right_total += w[i];
    total += right_total;
    for (auto& x : w) x /= total;
    return w;
}

}  // namespace

PoissonTerms poisson_terms(double lambda_t, double eps, double r_max, double f_max, double Lambda,
                           std::size_t cap) {
    if (!(lambda_t >= 0.0) || !std::isfinite(lambda_t)) throw std::invalid_argument("lambda_t must be >= 0");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    if (!(r_max >= 0.0) || !(f_max >= 0.0)) throw std::invalid_argument("reward bounds must be >= 0");
    if (!(Lambda > 0.0)) throw std::invalid_argument("Lambda must be > 0");

    PoissonTerms out;
    out.lambda_t = lambda_t;
    if (r_max == 0.0 && f_max == 0.0) {
        out.k = 0;
        out.phi = {std::exp(-lambda_t)};
        out.psi = {std::max(0.0, -std::expm1(-lambda_t))};
        return out;
    }

    std::vector<double> phi = weights(lambda_t, cap);
    const std::size_t R = phi.size() - 1;
    std::vector<double> psi(R + 1, 0.0);
    for (std::size_t i = R; i > 0; --i) psi[i - 1] = psi[i] + phi[i];
    // gap[i] = sum_{j > i} psi(j) = lambda_t - sum_{j <= i} psi(j)
    std::vector<double> gap(R + 1, 0.0);
    for (std::size_t i = R; i > 0; --i) gap[i - 1] = gap[i] + psi[i];

    const double gap_bound = r_max > 0.0 ? eps * Lambda / (2.0 * r_max) : 0.0;
    std::size_t k = 0;
    for (;; ++k) {
        bool cumulative_ok = r_max == 0.0 || gap[k] < gap_bound;
        bool final_ok = f_max == 0.0 || psi[k] * f_max < eps / 2.0;
        if (cumulative_ok && final_ok) break;
        if (k == R) break;  // psi and gap vanish at R
    }
    if (k > cap) throw IterationCapExceeded(k, cap);
    phi.resize(k + 1);
    psi.resize(k + 1);
    out.k = k;
    out.phi = std::move(phi);
    out.psi = std::move(psi);
    return out;
}

}  // namespace symbound::numerics
