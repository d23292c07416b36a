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
#include <span>
#include <vector>

#include "symbound/model.hpp"
#include "symbound/obdd.hpp"
#include "symbound/symbolic.hpp"

namespace symbound::partition {

/// Blocks of reachable states as one BDD over V and W: (v, w) is satisfying
/// iff state v belongs to the block whose index is encoded by w (all W bits,
/// least-significant first). Block indices are 0..n_blocks-1, all non-empty.
struct Partition {
    bdd::Bdd bdd;
    std::size_t n_blocks = 0;
    /// ceil(log2(n_blocks)): bits actually needed for the indices.
    unsigned k_bits = 0;
};

unsigned bits_for(std::size_t n_blocks);

bdd::Bdd block_cube(bdd::Manager& mgr, const symbolic::SymbolicLayout& layout, std::size_t block);

/// Non-empty cells of the predicates' truth-value combinations within
/// `reach`, ordered with the first predicate most significant and false
/// before true. No predicates gives the single-block partition. Throws
/// std::invalid_argument for more than 30 predicates.
Partition initial_partition(bdd::Manager& mgr, const symbolic::SymbolicLayout& layout, const bdd::Bdd& reach,
                            std::span<const bdd::Bdd> predicates);

/// One signature-refinement step: states stay together iff they share a
/// block and, for every command, are both disabled or both move into the
/// same block. New blocks are numbered in lexicographic order of
/// (old block, per-command signature), disabled before any block index.
Partition refine_step(bdd::Manager& mgr, const symbolic::SymbolicLayout& layout, const Partition& p,
                      std::span<const bdd::Bdd> transitions);

struct RefineResult {
    Partition partition;
    /// Steps executed, including a final one that found no split.
    std::size_t iterations = 0;
    bool fixpoint = false;
};

RefineResult refine(bdd::Manager& mgr, const symbolic::SymbolicLayout& layout, const Partition& p,
                    std::span<const bdd::Bdd> transitions, std::size_t n_iters);

/// Block of `state`, found by walking the V levels and reading the W
/// suffix. Throws Error when the state is not covered.
std::size_t s_abs(const bdd::Manager& mgr, const symbolic::SymbolicLayout& layout, const Partition& p,
                  const model::BitState& state);

/// States of block `block` as a BDD over V.
bdd::Bdd block_members(bdd::Manager& mgr, const symbolic::SymbolicLayout& layout, const Partition& p,
                       std::size_t block);

/// Partition with states[i] in block block_of[i]. Block indices must be
/// contiguous from 0.
Partition partition_from_assignment(bdd::Manager& mgr, const symbolic::SymbolicLayout& layout,
                                    std::span<const model::BitState> states, std::span<const std::size_t> block_of);

/// One `stateIndex blockIndex` line per state.
void export_partition(std::ostream& out, const bdd::Manager& mgr, const symbolic::SymbolicLayout& layout,
                      const Partition& p, std::span<const model::BitState> states);

}  // namespace symbound::partition
