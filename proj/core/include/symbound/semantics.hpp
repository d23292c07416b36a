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
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "symbound/model.hpp"

namespace symbound::model {

struct Transition {
    BitState target;
    double rate = 0.0;
};

/// Successor of `state` under `command`, or nullopt when the guard is false.
/// Throws SemanticError when the rate is not positive or an update leaves
/// its variable's range.
std::optional<Transition> successor(const GuardedModel& m, std::span<const std::int64_t> values, const Command& command);
std::optional<Transition> successor(const GuardedModel& m, const BitState& state, const Command& command);

/// Rates of all enabled commands summed per successor, in order of first
/// occurrence (command order).
std::vector<Transition> succ_set(const GuardedModel& m, const BitState& state);

struct ReachResult {
    std::vector<BitState> states;  // BFS discovery order, states[0] is initial
    std::unordered_map<BitState, std::size_t, BitStateHash> index;
    double max_exit = 0.0;
    /// max_exit, or 1 when no state has an outgoing rate.
    double lambda = 1.0;
    std::vector<std::size_t> deadlocks;
};

inline constexpr std::size_t kDefaultStateCap = 10'000'000;

/// Breadth-first closure from the initial state. Throws StateCapExceeded
/// once more than `state_cap` states are discovered.
ReachResult reachable(const GuardedModel& m, std::size_t state_cap = kDefaultStateCap);

/// A model together with its uniformisation rate. States satisfying
/// `absorb` (when set) keep only the self-loop of rate `lambda`.
struct UniformisedSemantics {
    std::shared_ptr<const GuardedModel> model;
    double lambda = 1.0;
    ExprPtr absorb;

    bool absorbing(std::span<const std::int64_t> values) const { return absorb && absorb->holds(values); }
    /// succ_set with absorption applied; the self-loop residual is implicit.
    std::vector<Transition> transitions(const BitState& state) const;
};

/// Uses `lambda_override` when given; throws SemanticError if some
/// reachable state's exit rate exceeds it.
UniformisedSemantics uniformise(std::shared_ptr<const GuardedModel> m, const ReachResult& reach,
                                std::optional<double> lambda_override = std::nullopt);

UniformisedSemantics apply_target_absorption(UniformisedSemantics sem, ExprPtr target);

/// Rewards of the reachability encoding: r = 0, f = [target].
GuardedModel reachability_rewards(const GuardedModel& m, const ExprPtr& target);

}  // namespace symbound::model
