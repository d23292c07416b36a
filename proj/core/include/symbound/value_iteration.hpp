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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symbound/abstraction.hpp"
#include "symbound/ctmdp.hpp"
#include "symbound/poisson.hpp"

namespace symbound::vi {

enum class Direction { Min, Max };

const char* to_string(Direction d);

struct RowChoice {
    std::vector<double> x;
    double value = 0.0;  // sum_i x_i q_i / lambda
};

/// Rate vector x with lo <= x <= hi and sum(x) = lambda that maximises
/// (or minimises) sum x_i q_i. Entries are filled greedily in order of
/// decreasing (increasing for Min) q, lower index first on ties; at most
/// one entry ends strictly between its bounds. Throws InfeasibleAbstraction
/// when sum(lo) > lambda or sum(hi) < lambda beyond `tolerance` (relative).
RowChoice optimize_rate_row(std::span<const double> lo, std::span<const double> hi, std::span<const double> q,
                            double lambda, Direction dir, double tolerance = 1e-9);

/// Counting deterministic scheduler: a decision per (step, state) for
/// steps 0..k. For abstractions the chosen rate vector is kept as well.
struct CdScheduler {
    std::size_t steps = 0;
    std::size_t n = 0;
    std::vector<std::uint32_t> action;  // action[step * n + state]
    // abstraction only: rates of the chosen vector, aligned with the row
    std::vector<std::size_t> rate_offset;  // per (step, state), size steps * n + 1
    std::vector<double> rates;

    std::uint32_t choice(std::size_t step, std::size_t state) const { return action[step * n + state]; }
    std::span<const double> chosen_rates(std::size_t step, std::size_t state) const {
        std::size_t i = step * n + state;
        return {rates.data() + rate_offset[i], rate_offset[i + 1] - rate_offset[i]};
    }
};

struct ValueResult {
    std::vector<double> q;
    double eps = 0.0;
    std::size_t k = 0;
    Direction direction = Direction::Max;
    std::optional<CdScheduler> scheduler;
};

struct Options {
    bool record_scheduler = false;
    std::size_t iteration_cap = numerics::kDefaultIterationCap;
    /// Replaces the final reward (both bounds for abstractions).
    std::optional<std::span<const double>> final_override;
};

/// Optimal value over CD schedulers of every state, within eps.
ValueResult value_ctmdp(const ctmdp::FiniteCtmdp& m, double t, double eps, Direction dir, const Options& opts = {});

/// Bound of every block: Max uses the upper rewards and maximises over
/// abstract actions and then rate vectors, Min the lower rewards and
/// minimises. Throws InfeasibleAbstraction on inconsistent rows.
ValueResult value_bounds(const abstraction::Ectmc& e, const abstraction::AbstractRewards& rw, double t, double eps,
                         Direction dir, const Options& opts = {});

/// Value of a fixed scheduler (decisions beyond its last step repeat the
/// last one).
std::vector<double> evaluate_scheduler(const ctmdp::FiniteCtmdp& m, const CdScheduler& sched, double t, double eps,
                                       std::optional<std::span<const double>> final_override = std::nullopt);
std::vector<double> evaluate_scheduler(const abstraction::Ectmc& e, const abstraction::AbstractRewards& rw,
                                       Direction dir, const CdScheduler& sched, double t, double eps,
                                       std::optional<std::span<const double>> final_override = std::nullopt);

struct Phase {
    double delta = 0.0;
    Direction direction = Direction::Max;
};

struct ChainResult {
    /// values[j]: values after phases 0..j, i.e. at horizon delta_0 + ... + delta_j.
    std::vector<std::vector<double>> values;
    std::vector<std::size_t> ks;
    double eps = 0.0;  // total precision, the sum over phases
};

/// Phases in computation order: phase 0 uses the model's final reward,
/// phase j > 0 uses the values of phase j-1 as final reward. eps is split
/// evenly over the phases.
ChainResult chain(const ctmdp::FiniteCtmdp& m, std::span<const Phase> phases, double eps,
                  std::size_t iteration_cap = numerics::kDefaultIterationCap);
ChainResult chain(const abstraction::Ectmc& e, const abstraction::AbstractRewards& rw, std::span<const Phase> phases,
                  double eps, std::size_t iteration_cap = numerics::kDefaultIterationCap);

}  // namespace symbound::vi
