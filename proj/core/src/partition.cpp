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

#include "symbound/partition.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "symbound/errors.hpp"

namespace symbound::partition {

using bdd::Bdd;
using bdd::Manager;
using bdd::NodeId;
using bdd::VarId;
using symbolic::SymbolicLayout;

unsigned bits_for(std::size_t n_blocks) {
    unsigned bits = 0;
    while ((std::size_t{1} << bits) < n_blocks) ++bits;
    return bits;
}

Bdd block_cube(Manager& mgr, const SymbolicLayout& layout, std::size_t block) {
    if (layout.block_bits() < 64 && block >= (std::size_t{1} << layout.block_bits()))
        throw std::length_error("block index " + std::to_string(block) + " does not fit the block variables");
    return mgr.cube(layout.block_vars(), block);
}

namespace {

// Cubes of blocks 0..count-1, sharing the sub-cube over the high bits, so
// the whole table costs about 2 * count nodes instead of count * w.
std::vector<Bdd> block_cubes(Manager& mgr, const SymbolicLayout& layout, std::size_t count) {
    const std::uint32_t w = layout.block_bits();
    if (count == 0) return {};
    if (w < 64 && count - 1 >= (std::size_t{1} << w))
        throw std::length_error("block index " + std::to_string(count - 1) + " does not fit the block variables");
    std::vector<Bdd> layer{mgr.bdd_true()};
    const Bdd none = mgr.bdd_false();
    for (std::uint32_t i = w; i-- > 0;) {
        const std::size_t size = i < 64 ? ((count - 1) >> i) + 1 : 1;
        std::vector<Bdd> next(size);
        for (std::size_t v = 0; v < size; ++v) {
            const Bdd& rest = layer[v >> 1];
            next[v] = (v & 1U) ? mgr.make_node(layout.block(i), none, rest) : mgr.make_node(layout.block(i), rest, none);
        }
        layer = std::move(next);
    }
    return layer;
}

Partition from_blocks(Manager& mgr, const SymbolicLayout& layout, const std::vector<Bdd>& blocks) {
    Partition p;
    p.bdd = mgr.bdd_false();
    for (std::size_t i = 0; i < blocks.size(); ++i) p.bdd = p.bdd | (blocks[i] & block_cube(mgr, layout, i));
    p.n_blocks = blocks.size();
    p.k_bits = bits_for(p.n_blocks);
    return p;
}

// Reads the unique satisfying assignment of a cube rooted at `node` over
// `vars` (ascending). Throws when the function is not a single cube.
std::uint64_t read_cube(const Manager& mgr, NodeId& node, std::span<const VarId> vars) {
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (Manager::is_terminal(node) || mgr.node_var(node) != vars[i].index)
            throw Error("partition is not a function: block bits are not fully determined");
        NodeId low = mgr.node_low(node);
        NodeId high = mgr.node_high(node);
        if (low == Manager::false_node) {
            value |= std::uint64_t{1} << i;
            node = high;
        } else if (high == Manager::false_node) {
            node = low;
        } else {
            throw Error("partition is not a function: a state has several blocks");
        }
    }
    return value;
}

struct SigKey {
    std::uint64_t old_block;
    std::uint64_t sig;  // 0 = disabled, otherwise successor block + 1
    auto operator<=>(const SigKey&) const = default;
};

// Maps each (state, old block, signature) triple to a fresh block index.
// `combined` ranges over V, W, disabled flag and W_sig.
Partition relabel(Manager& mgr, const SymbolicLayout& layout, const Bdd& combined) {
    const std::uint32_t n = layout.block_region();
    std::unordered_map<NodeId, SigKey> keys;
    {
        std::unordered_map<NodeId, bool> seen;
        auto collect = [&](auto&& self, NodeId node) -> void {
            if (node == Manager::false_node || !seen.emplace(node, true).second) return;
            if (Manager::is_terminal(node) || mgr.node_var(node) >= n) {
                NodeId cursor = node;
                SigKey key{};
                key.old_block = read_cube(mgr, cursor, layout.block_vars());
                VarId d = layout.disabled();
                if (Manager::is_terminal(cursor) || mgr.node_var(cursor) != d.index)
                    throw Error("signature does not fix the disabled flag");
                bool disabled = mgr.node_low(cursor) == Manager::false_node;
                cursor = disabled ? mgr.node_high(cursor) : mgr.node_low(cursor);
                std::uint64_t sig = read_cube(mgr, cursor, layout.sig_vars());
                if (cursor != Manager::true_node) throw Error("signature is not a cube");
                key.sig = disabled ? 0 : sig + 1;
                keys.emplace(node, key);
                return;
            }
            self(self, mgr.node_low(node));
            self(self, mgr.node_high(node));
        };
        collect(collect, combined.node());
    }

    std::map<SigKey, std::size_t> numbering;
    for (const auto& [node, key] : keys) numbering.emplace(key, 0);
    std::size_t next_id = 0;
    for (auto& [key, id] : numbering) id = next_id++;

    const std::vector<Bdd> cubes = block_cubes(mgr, layout, next_id);
    std::unordered_map<NodeId, Bdd> rebuilt;
    auto rebuild = [&](auto&& self, NodeId node) -> Bdd {
        if (node == Manager::false_node) return mgr.bdd_false();
        auto it = rebuilt.find(node);
        if (it != rebuilt.end()) return it->second;
        Bdd result;
        if (Manager::is_terminal(node) || mgr.node_var(node) >= n) {
            result = cubes[numbering.at(keys.at(node))];
        } else {
            Bdd low = self(self, mgr.node_low(node));
            Bdd high = self(self, mgr.node_high(node));
            result = mgr.make_node(VarId{mgr.node_var(node)}, low, high);
        }
        rebuilt.emplace(node, result);
        return result;
    };
    Partition p;
    p.bdd = rebuild(rebuild, combined.node());
    p.n_blocks = numbering.size();
    p.k_bits = bits_for(p.n_blocks);
    return p;
}

}  // namespace

Partition initial_partition(Manager& mgr, const SymbolicLayout& layout, const Bdd& reach,
                            std::span<const Bdd> predicates) {
    if (predicates.size() > 30) throw std::invalid_argument("at most 30 predicates are supported");
    std::vector<Bdd> blocks;
    if (!reach.is_false()) blocks.push_back(reach);
    for (const auto& pred : predicates) {
        std::vector<Bdd> split;
        for (const auto& b : blocks) {
            Bdd lo = b & !pred;
            Bdd hi = b & pred;
            if (!lo.is_false()) split.push_back(lo);
            if (!hi.is_false()) split.push_back(hi);
        }
        blocks = std::move(split);
    }
    return from_blocks(mgr, layout, blocks);
}

Partition refine_step(Manager& mgr, const SymbolicLayout& layout, const Partition& p,
                      std::span<const Bdd> transitions) {
    std::vector<VarId> from(layout.cur_vars());
    from.insert(from.end(), layout.block_vars().begin(), layout.block_vars().end());
    std::vector<VarId> to(layout.next_vars());
    to.insert(to.end(), layout.sig_vars().begin(), layout.sig_vars().end());
    const Bdd p_next = mgr.rename(p.bdd, from, to);
    const Bdd d = mgr.var(layout.disabled());
    const Bdd sig_zero = mgr.cube(layout.sig_vars(), 0);

    Partition cur = p;
    for (const auto& t : transitions) {
        Bdd succ = mgr.and_exists(t, p_next, layout.next_vars());
        Bdd enabled = mgr.exists(layout.next_vars(), t);
        Bdd sig = (succ & !d) | ((!enabled) & d & sig_zero);
        cur = relabel(mgr, layout, cur.bdd & sig);
    }
    return cur;
}

RefineResult refine(Manager& mgr, const SymbolicLayout& layout, const Partition& p, std::span<const Bdd> transitions,
                    std::size_t n_iters) {
    RefineResult result{p, 0, false};
    while (result.iterations < n_iters) {
        Partition next = refine_step(mgr, layout, result.partition, transitions);
        ++result.iterations;
        bool stable = next.n_blocks == result.partition.n_blocks;
        result.partition = std::move(next);
        if (stable) {
            result.fixpoint = true;
            break;
        }
    }
    return result;
}

std::size_t s_abs(const Manager& mgr, const SymbolicLayout& layout, const Partition& p, const model::BitState& state) {
    const std::uint32_t n = layout.block_region();
    NodeId node = p.bdd.node();
    while (!Manager::is_terminal(node) && mgr.node_var(node) < n) {
        std::uint32_t var = mgr.node_var(node);
        node = state.get(layout.bit_of(var)) ? mgr.node_high(node) : mgr.node_low(node);
    }
    if (node == Manager::false_node) throw Error("state is not covered by the partition");
    std::uint64_t block = read_cube(mgr, node, layout.block_vars());
    if (node != Manager::true_node) throw Error("partition depends on variables below the block bits");
    return static_cast<std::size_t>(block);
}

Bdd block_members(Manager& mgr, const SymbolicLayout& layout, const Partition& p, std::size_t block) {
    return mgr.and_exists(p.bdd, block_cube(mgr, layout, block), layout.block_vars());
}

Partition partition_from_assignment(Manager& mgr, const SymbolicLayout& layout,
                                    std::span<const model::BitState> states, std::span<const std::size_t> block_of) {
    if (states.size() != block_of.size()) throw std::invalid_argument("one block index per state is required");
    std::size_t n_blocks = 0;
    for (auto b : block_of) n_blocks = std::max(n_blocks, b + 1);
    std::vector<Bdd> blocks(n_blocks, mgr.bdd_false());
    for (std::size_t i = 0; i < states.size(); ++i)
        blocks[block_of[i]] = blocks[block_of[i]] | symbolic::state_cube(mgr, layout, states[i]);
    for (std::size_t b = 0; b < n_blocks; ++b)
        if (blocks[b].is_false()) throw std::invalid_argument("block " + std::to_string(b) + " is empty");
    return from_blocks(mgr, layout, blocks);
}

void export_partition(std::ostream& out, const Manager& mgr, const SymbolicLayout& layout, const Partition& p,
                      std::span<const model::BitState> states) {
    for (std::size_t i = 0; i < states.size(); ++i) out << i << ' ' << s_abs(mgr, layout, p, states[i]) << '\n';
}

}  // namespace symbound::partition
