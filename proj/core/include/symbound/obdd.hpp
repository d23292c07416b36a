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

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace symbound::bdd {

/// Position of a variable in the manager's fixed global order (0 = topmost).
struct VarId {
    std::uint32_t index = 0;
    auto operator<=>(const VarId&) const = default;
};

using NodeId = std::uint32_t;

class Manager;

/// Handle to a node in a manager's shared store. Two handles of the same
/// manager are equal iff they denote the same Boolean function.
class Bdd {
   public:
    Bdd() = default;

    Manager* manager() const { return mgr_; }
    NodeId node() const { return node_; }
    bool valid() const { return mgr_ != nullptr; }
    bool is_true() const;
    bool is_false() const;

    Bdd operator&(const Bdd& other) const;
    Bdd operator|(const Bdd& other) const;
    Bdd operator^(const Bdd& other) const;
    Bdd operator!() const;

    bool operator==(const Bdd& other) const = default;

   private:
    friend class Manager;
    Bdd(Manager* mgr, NodeId node) : mgr_(mgr), node_(node) {}

    Manager* mgr_ = nullptr;
    NodeId node_ = 0;
};

enum class BinaryOp : std::uint8_t { And, Or, Xor };

/// Assignment of {0,1} to (a subset of) the manager's variables.
class Valuation {
   public:
    explicit Valuation(std::uint32_t var_count) : values_(var_count, -1) {}

    void set(VarId var, bool value) { values_.at(var.index) = value ? 1 : 0; }
    void unset(VarId var) { values_.at(var.index) = -1; }
    std::optional<bool> get(VarId var) const {
        auto v = values_.at(var.index);
        if (v < 0) return std::nullopt;
        return v == 1;
    }
    std::uint32_t size() const { return static_cast<std::uint32_t>(values_.size()); }

   private:
    std::vector<std::int8_t> values_;
};

/// Reduced ordered BDD manager: hash-consed unique table, lossy operation
/// cache, no complement edges, fixed variable order.
///
/// Nodes are never freed; the workloads in this library build monotonically.
/// A manager and its handles must stay on one thread, except that read-only
/// node inspection (`node_var`, `node_low`, `node_high`) is safe from several
/// threads while no new nodes are created.
class Manager {
   public:
    static constexpr NodeId false_node = 0;
    static constexpr NodeId true_node = 1;

    explicit Manager(std::uint32_t var_count, std::size_t cache_log2 = 18);
    Manager(const Manager&) = delete;
    Manager& operator=(const Manager&) = delete;

    std::uint32_t var_count() const { return var_count_; }

    Bdd bdd_true() { return {this, true_node}; }
    Bdd bdd_false() { return {this, false_node}; }
    Bdd constant(bool value) { return value ? bdd_true() : bdd_false(); }
    Bdd var(VarId v);
    Bdd nvar(VarId v);

    /// Conjunction of literals: vars[i] takes bit i of `value` (LSB first).
    Bdd cube(std::span<const VarId> vars, std::uint64_t value);
    /// Conjunction of literals with explicit polarities.
    Bdd cube(std::span<const VarId> vars, std::span<const bool> values);

    /// Node with the given top variable; `var` must precede both children.
    Bdd make_node(VarId var, const Bdd& low, const Bdd& high);

    Bdd apply(BinaryOp op, const Bdd& f, const Bdd& g);
    Bdd negate(const Bdd& f);
    Bdd ite(const Bdd& cond, const Bdd& then_f, const Bdd& else_f);
    Bdd exists(std::span<const VarId> vars, const Bdd& f);
    /// exists(vars, f & g) without building the conjunction.
    Bdd and_exists(const Bdd& f, const Bdd& g, std::span<const VarId> vars);
    /// Positional substitution from[i] -> to[i]. The mapping must keep the
    /// support of `f` in the same relative order.
    Bdd rename(const Bdd& f, std::span<const VarId> from, std::span<const VarId> to);

    bool eval(const Bdd& f, const Valuation& v) const;
    std::vector<VarId> support(const Bdd& f) const;
    /// Number of satisfying assignments over `vars`, which must contain the support.
    double sat_count(const Bdd& f, std::span<const VarId> vars) const;

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t dag_size(const Bdd& f) const;
    void write_dot(std::ostream& out, const Bdd& f) const;

    // Raw node access for traversals. Terminals report var_count() as their variable.
    std::uint32_t node_var(NodeId n) const { return nodes_[n].var; }
    NodeId node_low(NodeId n) const { return nodes_[n].low; }
    NodeId node_high(NodeId n) const { return nodes_[n].high; }
    static bool is_terminal(NodeId n) { return n <= true_node; }
    Bdd handle(NodeId n);

   private:
    struct Node {
        std::uint32_t var;
        NodeId low;
        NodeId high;
    };
    struct CacheEntry {
        std::uint32_t op = 0xffffffffu;
        NodeId a = 0, b = 0, c = 0;
        NodeId result = 0;
    };

    void check_owner(const Bdd& f) const;
    NodeId mk(std::uint32_t var, NodeId low, NodeId high);
    static std::size_t node_hash(std::uint32_t var, NodeId low, NodeId high);
    void grow_unique();
    bool cache_lookup(std::uint32_t op, NodeId a, NodeId b, NodeId c, NodeId& result) const;
    void cache_store(std::uint32_t op, NodeId a, NodeId b, NodeId c, NodeId result);

    NodeId apply_rec(BinaryOp op, NodeId f, NodeId g);
    NodeId not_rec(NodeId f);
    NodeId ite_rec(NodeId c, NodeId t, NodeId e);
    NodeId exists_rec(NodeId f, NodeId cube);
    NodeId and_exists_rec(NodeId f, NodeId g, NodeId cube);
    NodeId positive_cube(std::span<const VarId> vars);

    std::uint32_t var_count_;
    std::vector<Node> nodes_;
    // Open addressing with linear probing over node ids; 0 marks a free
    // slot (terminals are never stored). Kept at most half full.
    std::vector<NodeId> unique_;
    std::size_t unique_mask_;
    std::vector<CacheEntry> cache_;
    std::size_t cache_mask_;
};

}  // namespace symbound::bdd
