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

#include "symbound/explicit_engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "symbound/errors.hpp"

namespace symbound::explicit_engine {

SparseCtmc build_explicit(const model::UniformisedSemantics& sem, const model::ReachResult& reach) {
    const auto& m = *sem.model;
    SparseCtmc out;
    out.n = reach.states.size();
    out.lambda = sem.lambda;
    out.states = reach.states;
    out.row_start.reserve(out.n + 1);
    out.row_start.push_back(0);
    out.r.resize(out.n);
    out.f.resize(out.n);

    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t s = 0; s < out.n; ++s) {
        auto values = m.layout().decode(reach.states[s]);
        out.r[s] = m.cumulative_reward(values);
        out.f[s] = m.final_reward(values);
        if (!(out.r[s] >= 0.0) || !(out.f[s] >= 0.0) || !std::isfinite(out.r[s]) || !std::isfinite(out.f[s]))
            throw SemanticError("reward must be finite and non-negative in state " + m.describe(values));

        row.clear();
        double exit = 0.0;
        double self_rate = 0.0;
        for (const auto& t : sem.transitions(reach.states[s])) {
            auto it = reach.index.find(t.target);
            if (it == reach.index.end()) throw std::logic_error("successor outside the reachable set");
            exit += t.rate;
            if (it->second == s)
                self_rate += t.rate;
            else
                row.emplace_back(it->second, t.rate / sem.lambda);
        }
        if (exit > sem.lambda * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "exit rate " << exit << " exceeds the uniformisation rate " << sem.lambda << " in state "
                << m.describe(values);
            throw SemanticError(msg.str());
        }
        double self = std::max(0.0, sem.lambda - exit) / sem.lambda + self_rate / sem.lambda;
        if (self > 0.0) row.emplace_back(s, self);
        std::sort(row.begin(), row.end());
        for (const auto& [dst, p] : row) {
            out.col.push_back(dst);
            out.prob.push_back(p);
        }
        out.row_start.push_back(out.col.size());
    }
    return out;
}

ExplicitResult explicit_value(const SparseCtmc& m, double t, double eps, std::optional<std::span<const double>> final_override,
                              bool kahan, std::size_t iteration_cap) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time horizon must be >= 0");
    std::span<const double> f = final_override ? *final_override : std::span<const double>(m.f);
    if (f.size() != m.n) throw std::invalid_argument("final reward vector has the wrong size");
    double r_max = 0.0, f_max = 0.0;
    for (std::size_t s = 0; s < m.n; ++s) {
        if (!std::isfinite(m.r[s]) || !std::isfinite(f[s])) throw SemanticError("non-finite reward");
        r_max = std::max(r_max, m.r[s]);
        f_max = std::max(f_max, f[s]);
    }
    auto terms = numerics::poisson_terms(m.lambda * t, eps, r_max, f_max, m.lambda, iteration_cap);

    std::vector<double> next(m.n, 0.0), cur(m.n, 0.0);
    for (std::size_t i = terms.k + 1; i-- > 0;) {
        const double phi = terms.phi[i];
        const double psi = terms.psi[i] / m.lambda;
        for (std::size_t s = 0; s < m.n; ++s) {
            double sum = 0.0;
            if (kahan) {
                double c = 0.0;
                for (std::size_t e = m.row_start[s]; e < m.row_start[s + 1]; ++e) {
                    double y = m.prob[e] * next[m.col[e]] - c;
                    double tmp = sum + y;
                    c = (tmp - sum) - y;
                    sum = tmp;
                }
            } else {
                for (std::size_t e = m.row_start[s]; e < m.row_start[s + 1]; ++e) sum += m.prob[e] * next[m.col[e]];
            }
            cur[s] = sum + phi * f[s] + psi * m.r[s];
        }
        std::swap(cur, next);
    }
    return {std::move(next), terms.k, eps};
}

void write_matrix(std::ostream& out, const SparseCtmc& m) {
    auto flags = out.flags();
    auto precision = out.precision(17);
    out << m.n << ' ' << m.lambda << '\n';
    for (std::size_t s = 0; s < m.n; ++s)
        for (std::size_t e = m.row_start[s]; e < m.row_start[s + 1]; ++e)
            out << s << ' ' << m.col[e] << ' ' << m.prob[e] << '\n';
    out.precision(precision);
    out.flags(flags);
}

}  // namespace symbound::explicit_engine
