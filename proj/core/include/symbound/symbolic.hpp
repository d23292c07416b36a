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

#include <cstdint>
#include <functional>
#include <vector>

#include "symbound/model.hpp"
#include "symbound/obdd.hpp"

namespace symbound::symbolic {

/// Variable order shared by all symbolic structures of one model: state
/// bits with V and V' interleaved (x0 x0' x1 x1' ...), block bits W, then a
/// scratch region (one "disabled" flag and a copy of W) used during
/// refinement. Interleaving keeps frame conditions x' = x linear in size.
class SymbolicLayout {
   public:
    SymbolicLayout() = default;
    SymbolicLayout(std::uint32_t state_bits, std::uint32_t block_bits);
    static SymbolicLayout for_model(const model::GuardedModel& m);

    std::uint32_t state_bits() const { return n_; }
    std::uint32_t block_bits() const { return w_; }
    std::uint32_t total_vars() const { return 2 * n_ + 2 * w_ + 1; }

    bdd::VarId cur(std::uint32_t i) const { return {2 * i}; }
    bdd::VarId next(std::uint32_t i) const { return {2 * i + 1}; }
    bdd::VarId block(std::uint32_t i) const { return {2 * n_ + i}; }
    bdd::VarId disabled() const { return {2 * n_ + w_}; }
    bdd::VarId sig(std::uint32_t i) const { return {2 * n_ + w_ + 1 + i}; }

    /// First variable below the state bits.
    std::uint32_t block_region() const { return 2 * n_; }
    bool is_cur(std::uint32_t var) const { return var < 2 * n_ && var % 2 == 0; }
    /// State bit of a current-state variable.
    std::uint32_t bit_of(std::uint32_t var) const { return var / 2; }

    const std::vector<bdd::VarId>& cur_vars() const { return cur_; }
    const std::vector<bdd::VarId>& next_vars() const { return next_; }
    const std::vector<bdd::VarId>& block_vars() const { return block_; }
    const std::vector<bdd::VarId>& sig_vars() const { return sig_; }

   private:
    std::uint32_t n_ = 0;
    std::uint32_t w_ = 0;
    std::vector<bdd::VarId> cur_, next_, block_, sig_;
};

struct SymbolicModel {
    SymbolicLayout layout;
    bdd::Bdd init;
    /// Encodings of in-range values of every variable.
    bdd::Bdd valid;
    /// T_c over V and V', one per command.
    std::vector<bdd::Bdd> transitions;
};

/// Throws std::invalid_argument when `mgr` has fewer variables than the
/// layout requires.
SymbolicModel build_symbolic(const model::GuardedModel& m, bdd::Manager& mgr, const SymbolicLayout& layout);

/// Least fixpoint of the image of `init` under the union of the commands.
bdd::Bdd reachable_set(bdd::Manager& mgr, const SymbolicModel& sym);

/// BDD over V of a Boolean expression. Numeric atoms are encoded by
/// enumerating the values of their variables; at most `enum_cap` value
/// combinations per atom.
bdd::Bdd predicate_bdd(bdd::Manager& mgr, const SymbolicLayout& layout, const model::GuardedModel& m,
                       const model::ExprPtr& e, std::uint64_t enum_cap = std::uint64_t{1} << 22);

/// Calls `visit` for every full V assignment satisfying `set` (a BDD over V
/// only). Depth-first over V with the 0-branch first, so the order is
/// fixed by the variable order alone.
void for_each_state(const bdd::Manager& mgr, const SymbolicLayout& layout, const bdd::Bdd& set,
                    const std::function<void(const model::BitState&)>& visit);

/// Minterm over V of one state.
bdd::Bdd state_cube(bdd::Manager& mgr, const SymbolicLayout& layout, const model::BitState& state);

double count_states(const bdd::Manager& mgr, const SymbolicLayout& layout, const bdd::Bdd& set);

}  // namespace symbound::symbolic
