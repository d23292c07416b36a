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
#include <string>
#include <utility>
#include <vector>

#include "symbound/obdd.hpp"
#include "symbound/partition.hpp"
#include "symbound/semantics.hpp"
#include "symbound/symbolic.hpp"

namespace symbound::abstraction {

struct RateInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool operator==(const RateInterval&) const = default;
};

/// (command index, successor block) pairs sorted by command index: the
/// partial map from commands to blocks shared by the abstracted states.
using Signature = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

struct RowEntry {
    std::uint64_t block = 0;
    RateInterval rate;
    bool operator==(const RowEntry&) const = default;
};

struct AbstractAction {
    Signature signature;
    /// Sorted by block; covers the image of the signature plus the own
    /// block. Blocks not listed have rate interval [0, 0].
    std::vector<RowEntry> row;
    bool operator==(const AbstractAction&) const = default;
};

struct Ectmc {
    std::size_t n_blocks = 0;
    double lambda = 1.0;
    std::size_t initial_block = 0;
    /// Per block, actions sorted by signature.
    std::vector<std::vector<AbstractAction>> actions;
    std::vector<std::string> command_labels;
    bool operator==(const Ectmc&) const = default;
};

struct AbstractRewards {
    std::vector<double> r_lo, r_hi;
    std::vector<double> f_lo, f_hi;
    bool operator==(const AbstractRewards&) const = default;
};

struct Abstraction {
    Ectmc ectmc;
    AbstractRewards rewards;
    std::size_t concrete_states = 0;
    bool operator==(const Abstraction&) const = default;
};

/// Builds the abstraction in one depth-first sweep over the partition BDD.
/// Every concrete state contributes its rewards and, per enabled command,
/// the successor block and rate; the uniformisation residual goes to its
/// own block. `workers` > 1 splits the sweep over the top levels of the
/// BDD and merges the partial results.
///
/// Throws SemanticError when a state's exit rate exceeds the uniformisation
/// rate, Error when a successor is not covered by the partition.
Abstraction build_abstraction(const model::UniformisedSemantics& sem, const bdd::Manager& mgr,
                              const symbolic::SymbolicLayout& layout, const partition::Partition& p,
                              unsigned workers = 1);

/// Combines two partial abstractions over the same blocks: intervals and
/// reward bounds are widened, actions united.
Abstraction merge(const Abstraction& a, const Abstraction& b);

/// Maximal exit rate over the states of `reach`, computed by enumeration.
double max_exit_rate(const model::GuardedModel& m, const bdd::Manager& mgr, const symbolic::SymbolicLayout& layout,
                     const bdd::Bdd& reach);

/// Throws InfeasibleAbstraction when some row cannot sum to lambda or has
/// an interval outside [0, lambda].
void check_feasible(const Ectmc& e, double tolerance = 1e-9);

std::string describe(const Signature& sig, const std::vector<std::string>& labels);

}  // namespace symbound::abstraction
