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
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "symbound/poisson.hpp"
#include "symbound/semantics.hpp"

namespace symbound::explicit_engine {

/// Uniformised CTMC over the reachable states in CSR form. Row entries are
/// embedded-chain probabilities (rate / lambda) sorted by target index; the
/// self-loop entry includes the uniformisation residual.
struct SparseCtmc {
    std::size_t n = 0;
    double lambda = 1.0;
    std::vector<std::size_t> row_start;  // size n + 1
    std::vector<std::size_t> col;
    std::vector<double> prob;
    std::vector<double> r;  // reward per unit time
    std::vector<double> f;  // reward at the horizon
    std::vector<model::BitState> states;

    std::span<const std::size_t> row_cols(std::size_t s) const {
        return {col.data() + row_start[s], row_start[s + 1] - row_start[s]};
    }
    std::span<const double> row_probs(std::size_t s) const {
        return {prob.data() + row_start[s], row_start[s + 1] - row_start[s]};
    }
};

SparseCtmc build_explicit(const model::UniformisedSemantics& sem, const model::ReachResult& reach);

struct ExplicitResult {
    std::vector<double> q;
    std::size_t k = 0;
    double eps = 0.0;
};

/// Transient value (expected cumulative reward up to t plus final reward at
/// t) of every state, each within eps. `final_override` replaces m.f.
ExplicitResult explicit_value(const SparseCtmc& m, double t, double eps,
                              std::optional<std::span<const double>> final_override = std::nullopt,
                              bool kahan = false, std::size_t iteration_cap = numerics::kDefaultIterationCap);

/// Header `n Lambda`, then one `src dst prob` line per entry.
void write_matrix(std::ostream& out, const SparseCtmc& m);

}  // namespace symbound::explicit_engine
