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

#include "symbound/obdd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace symbound::bdd {

namespace {

enum CacheOp : std::uint32_t {
    kAnd = 0,
    kOr = 1,
    kXor = 2,
    kNot = 3,
    kIte = 4,
    kExists = 5,
    kAndExists = 6,
};

std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

}  // namespace

bool Bdd::is_true() const { return valid() && node_ == Manager::true_node; }
bool Bdd::is_false() const { return valid() && node_ == Manager::false_node; }

Bdd Bdd::operator&(const Bdd& other) const { return mgr_->apply(BinaryOp::And, *this, other); }
Bdd Bdd::operator|(const Bdd& other) const { return mgr_->apply(BinaryOp::Or, *this, other); }
Bdd Bdd::operator^(const Bdd& other) const { return mgr_->apply(BinaryOp::Xor, *this, other); }
Bdd Bdd::operator!() const { return mgr_->negate(*this); }

std::size_t Manager::node_hash(std::uint32_t var, NodeId low, NodeId high) {
    std::uint64_t h = (static_cast<std::uint64_t>(low) << 32) | high;
    return static_cast<std::size_t>(mix(h ^ (static_cast<std::uint64_t>(var) * 0x9e3779b97f4a7c15ULL)));
}

Manager::Manager(std::uint32_t var_count, std::size_t cache_log2)
    : var_count_(var_count),
      unique_(std::size_t{1} << 16, 0),
      unique_mask_((std::size_t{1} << 16) - 1),
      cache_(std::size_t{1} << cache_log2),
      cache_mask_((std::size_t{1} << cache_log2) - 1) {
    nodes_.push_back({var_count_, false_node, false_node});
    nodes_.push_back({var_count_, true_node, true_node});
}

void Manager::check_owner(const Bdd& f) const {
    if (f.mgr_ != this) throw std::invalid_argument("BDD handle belongs to a different manager");
}

Bdd Manager::handle(NodeId n) {
    if (n >= nodes_.size()) throw std::out_of_range("no such BDD node");
    return {this, n};
}

NodeId Manager::mk(std::uint32_t var, NodeId low, NodeId high) {
    if (low == high) return low;
    std::size_t slot = node_hash(var, low, high) & unique_mask_;
    for (NodeId id; (id = unique_[slot]) != 0; slot = (slot + 1) & unique_mask_) {
        const Node& n = nodes_[id];
        if (n.var == var && n.low == low && n.high == high) return id;
    }
    if (nodes_.size() == std::numeric_limits<NodeId>::max()) throw std::length_error("BDD node store is full");
    auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({var, low, high});
    unique_[slot] = id;
    if (2 * nodes_.size() > unique_.size()) grow_unique();
    return id;
}

void Manager::grow_unique() {
    std::vector<NodeId> table(2 * unique_.size(), 0);
    const std::size_t mask = table.size() - 1;
    for (NodeId id = true_node + 1; id < nodes_.size(); ++id) {
        const Node& n = nodes_[id];
        std::size_t slot = node_hash(n.var, n.low, n.high) & mask;
        while (table[slot] != 0) slot = (slot + 1) & mask;
        table[slot] = id;
    }
    unique_ = std::move(table);
    unique_mask_ = mask;
}

bool Manager::cache_lookup(std::uint32_t op, NodeId a, NodeId b, NodeId c, NodeId& result) const {
    std::uint64_t h = mix((static_cast<std::uint64_t>(a) << 32 | b) ^ mix(static_cast<std::uint64_t>(c) << 8 | op));
    const auto& e = cache_[h & cache_mask_];
    if (e.op == op && e.a == a && e.b == b && e.c == c) {
        result = e.result;
        return true;
    }
    return false;
}

void Manager::cache_store(std::uint32_t op, NodeId a, NodeId b, NodeId c, NodeId result) {
    std::uint64_t h = mix((static_cast<std::uint64_t>(a) << 32 | b) ^ mix(static_cast<std::uint64_t>(c) << 8 | op));
    cache_[h & cache_mask_] = CacheEntry{op, a, b, c, result};
}

Bdd Manager::var(VarId v) {
    if (v.index >= var_count_) throw std::out_of_range("variable index out of range");
    return {this, mk(v.index, false_node, true_node)};
}

Bdd Manager::nvar(VarId v) {
    if (v.index >= var_count_) throw std::out_of_range("variable index out of range");
    return {this, mk(v.index, true_node, false_node)};
}

Bdd Manager::cube(std::span<const VarId> vars, std::uint64_t value) {
    NodeId r = true_node;
    std::vector<std::pair<std::uint32_t, bool>> lits;
    lits.reserve(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].index >= var_count_) throw std::out_of_range("variable index out of range");
        lits.emplace_back(vars[i].index, i < 64 && ((value >> i) & 1U) != 0);
    }
    std::sort(lits.begin(), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i)
        if (lits[i].first == lits[i - 1].first) throw std::invalid_argument("cube: repeated variable");
    for (auto it = lits.rbegin(); it != lits.rend(); ++it)
        r = it->second ? mk(it->first, false_node, r) : mk(it->first, r, false_node);
    return {this, r};
}

Bdd Manager::cube(std::span<const VarId> vars, std::span<const bool> values) {
    if (vars.size() != values.size()) throw std::invalid_argument("cube: length mismatch");
    std::vector<std::pair<std::uint32_t, bool>> lits;
    lits.reserve(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].index >= var_count_) throw std::out_of_range("variable index out of range");
        lits.emplace_back(vars[i].index, values[i]);
    }
    std::sort(lits.begin(), lits.end());
    NodeId r = true_node;
    for (auto it = lits.rbegin(); it != lits.rend(); ++it) {
        if (std::next(it) != lits.rend() && std::next(it)->first == it->first) {
            if (std::next(it)->second != it->second) return bdd_false();
            continue;
        }
        r = it->second ? mk(it->first, false_node, r) : mk(it->first, r, false_node);
    }
    return {this, r};
}

Bdd Manager::make_node(VarId var, const Bdd& low, const Bdd& high) {
    check_owner(low);
    check_owner(high);
    if (var.index >= var_count_) throw std::out_of_range("variable index out of range");
    if (nodes_[low.node_].var <= var.index || nodes_[high.node_].var <= var.index)
        throw std::invalid_argument("make_node: variable must precede both children");
    return {this, mk(var.index, low.node_, high.node_)};
}

NodeId Manager::apply_rec(BinaryOp op, NodeId f, NodeId g) {
    switch (op) {
        case BinaryOp::And:
            if (f == false_node || g == false_node) return false_node;
            if (f == true_node) return g;
            if (g == true_node) return f;
            if (f == g) return f;
            break;
        case BinaryOp::Or:
            if (f == true_node || g == true_node) return true_node;
            if (f == false_node) return g;
            if (g == false_node) return f;
            if (f == g) return f;
            break;
        case BinaryOp::Xor:
            if (f == g) return false_node;
            if (f == false_node) return g;
            if (g == false_node) return f;
            if (f == true_node) return not_rec(g);
            if (g == true_node) return not_rec(f);
            break;
    }
    if (f > g) std::swap(f, g);  // all three operators commute
    auto opcode = static_cast<std::uint32_t>(op);
    NodeId cached;
    if (cache_lookup(opcode, f, g, 0, cached)) return cached;

    std::uint32_t vf = nodes_[f].var, vg = nodes_[g].var;
    std::uint32_t top = std::min(vf, vg);
    NodeId f0 = vf == top ? nodes_[f].low : f, f1 = vf == top ? nodes_[f].high : f;
    NodeId g0 = vg == top ? nodes_[g].low : g, g1 = vg == top ? nodes_[g].high : g;
    NodeId low = apply_rec(op, f0, g0);
    NodeId high = apply_rec(op, f1, g1);
    NodeId r = mk(top, low, high);
    cache_store(opcode, f, g, 0, r);
    return r;
}

NodeId Manager::not_rec(NodeId f) {
    if (f == false_node) return true_node;
    if (f == true_node) return false_node;
    NodeId cached;
    if (cache_lookup(kNot, f, 0, 0, cached)) return cached;
    NodeId r = mk(nodes_[f].var, not_rec(nodes_[f].low), not_rec(nodes_[f].high));
    cache_store(kNot, f, 0, 0, r);
    return r;
}

NodeId Manager::ite_rec(NodeId c, NodeId t, NodeId e) {
    if (c == true_node) return t;
    if (c == false_node) return e;
    if (t == e) return t;
    if (t == true_node && e == false_node) return c;
    NodeId cached;
    if (cache_lookup(kIte, c, t, e, cached)) return cached;
    std::uint32_t top = std::min({nodes_[c].var, nodes_[t].var, nodes_[e].var});
    auto cof = [&](NodeId n, bool hi) {
        if (nodes_[n].var != top) return n;
        return hi ? nodes_[n].high : nodes_[n].low;
    };
    NodeId low = ite_rec(cof(c, false), cof(t, false), cof(e, false));
    NodeId high = ite_rec(cof(c, true), cof(t, true), cof(e, true));
    NodeId r = mk(top, low, high);
    cache_store(kIte, c, t, e, r);
    return r;
}

NodeId Manager::positive_cube(std::span<const VarId> vars) {
    std::vector<std::uint32_t> idx;
    idx.reserve(vars.size());
    for (auto v : vars) {
        if (v.index >= var_count_) throw std::out_of_range("variable index out of range");
        idx.push_back(v.index);
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    NodeId r = true_node;
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) r = mk(*it, false_node, r);
    return r;
}

NodeId Manager::exists_rec(NodeId f, NodeId cube) {
    if (is_terminal(f)) return f;
    std::uint32_t vf = nodes_[f].var;
    while (cube != true_node && nodes_[cube].var < vf) cube = nodes_[cube].high;
    if (cube == true_node) return f;
    NodeId cached;
    if (cache_lookup(kExists, f, cube, 0, cached)) return cached;
    NodeId r;
    if (nodes_[cube].var == vf) {
        NodeId rest = nodes_[cube].high;
        NodeId low = exists_rec(nodes_[f].low, rest);
        r = low == true_node ? true_node : apply_rec(BinaryOp::Or, low, exists_rec(nodes_[f].high, rest));
    } else {
        r = mk(vf, exists_rec(nodes_[f].low, cube), exists_rec(nodes_[f].high, cube));
    }
    cache_store(kExists, f, cube, 0, r);
    return r;
}

NodeId Manager::and_exists_rec(NodeId f, NodeId g, NodeId cube) {
    if (f == false_node || g == false_node) return false_node;
    if (f == true_node && g == true_node) return true_node;
    if (f == true_node) return exists_rec(g, cube);
    if (g == true_node || f == g) return exists_rec(f, cube);
    if (f > g) std::swap(f, g);
    std::uint32_t vf = nodes_[f].var, vg = nodes_[g].var;
    std::uint32_t top = std::min(vf, vg);
    while (cube != true_node && nodes_[cube].var < top) cube = nodes_[cube].high;
    if (cube == true_node) return apply_rec(BinaryOp::And, f, g);
    NodeId cached;
    if (cache_lookup(kAndExists, f, g, cube, cached)) return cached;
    NodeId f0 = vf == top ? nodes_[f].low : f, f1 = vf == top ? nodes_[f].high : f;
    NodeId g0 = vg == top ? nodes_[g].low : g, g1 = vg == top ? nodes_[g].high : g;
    NodeId r;
    if (nodes_[cube].var == top) {
        NodeId rest = nodes_[cube].high;
        NodeId low = and_exists_rec(f0, g0, rest);
        r = low == true_node ? true_node : apply_rec(BinaryOp::Or, low, and_exists_rec(f1, g1, rest));
    } else {
        r = mk(top, and_exists_rec(f0, g0, cube), and_exists_rec(f1, g1, cube));
    }
    cache_store(kAndExists, f, g, cube, r);
    return r;
}

Bdd Manager::apply(BinaryOp op, const Bdd& f, const Bdd& g) {
    check_owner(f);
    check_owner(g);
    return {this, apply_rec(op, f.node_, g.node_)};
}

Bdd Manager::negate(const Bdd& f) {
    check_owner(f);
    return {this, not_rec(f.node_)};
}

Bdd Manager::ite(const Bdd& cond, const Bdd& then_f, const Bdd& else_f) {
    check_owner(cond);
    check_owner(then_f);
    check_owner(else_f);
    return {this, ite_rec(cond.node_, then_f.node_, else_f.node_)};
}

Bdd Manager::exists(std::span<const VarId> vars, const Bdd& f) {
    check_owner(f);
    if (vars.empty()) return f;
    return {this, exists_rec(f.node_, positive_cube(vars))};
}

Bdd Manager::and_exists(const Bdd& f, const Bdd& g, std::span<const VarId> vars) {
    check_owner(f);
    check_owner(g);
    return {this, and_exists_rec(f.node_, g.node_, positive_cube(vars))};
}

Bdd Manager::rename(const Bdd& f, std::span<const VarId> from, std::span<const VarId> to) {
    check_owner(f);
    if (from.size() != to.size()) throw std::invalid_argument("rename: variable lists differ in length");
    std::vector<std::uint32_t> map(var_count_);
    for (std::uint32_t i = 0; i < var_count_; ++i) map[i] = i;
    for (std::size_t i = 0; i < from.size(); ++i) {
        if (from[i].index >= var_count_ || to[i].index >= var_count_)
            throw std::out_of_range("rename: variable index out of range");
        map[from[i].index] = to[i].index;
    }
    auto supp = support(f);
    for (std::size_t i = 1; i < supp.size(); ++i) {
        if (map[supp[i - 1].index] >= map[supp[i].index])
            throw std::invalid_argument("rename: mapping does not preserve the variable order");
    }
    std::unordered_map<NodeId, NodeId> memo;
    auto rec = [&](auto&& self, NodeId n) -> NodeId {
        if (is_terminal(n)) return n;
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
        NodeId low = self(self, nodes_[n].low);
        NodeId high = self(self, nodes_[n].high);
        NodeId r = mk(map[nodes_[n].var], low, high);
        memo.emplace(n, r);
        return r;
    };
    return {this, rec(rec, f.node_)};
}

bool Manager::eval(const Bdd& f, const Valuation& v) const {
    check_owner(f);
    NodeId n = f.node_;
    while (!is_terminal(n)) {
        auto value = v.get(VarId{nodes_[n].var});
        if (!value) throw std::invalid_argument("eval: valuation does not assign a support variable");
        n = *value ? nodes_[n].high : nodes_[n].low;
    }
    return n == true_node;
}

std::vector<VarId> Manager::support(const Bdd& f) const {
    check_owner(f);
    std::vector<bool> seen_var(var_count_, false);
    std::unordered_set<NodeId> visited;
    std::vector<NodeId> stack{f.node_};
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (is_terminal(n) || !visited.insert(n).second) continue;
        seen_var[nodes_[n].var] = true;
        stack.push_back(nodes_[n].low);
        stack.push_back(nodes_[n].high);
    }
    std::vector<VarId> out;
    for (std::uint32_t i = 0; i < var_count_; ++i)
        if (seen_var[i]) out.push_back(VarId{i});
    return out;
}

double Manager::sat_count(const Bdd& f, std::span<const VarId> vars) const {
    check_owner(f);
    std::vector<std::uint32_t> order;
    for (auto v : vars) order.push_back(v.index);
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    for (auto v : support(f))
        if (!std::binary_search(order.begin(), order.end(), v.index))
            throw std::invalid_argument("sat_count: variable set does not cover the support");
    // position of each variable within `order`; terminals sit after the last
    auto pos = [&](NodeId n) -> std::size_t {
        if (is_terminal(n)) return order.size();
        return static_cast<std::size_t>(std::lower_bound(order.begin(), order.end(), nodes_[n].var) - order.begin());
    };
    std::unordered_map<NodeId, double> memo;
    auto rec = [&](auto&& self, NodeId n) -> double {
        if (n == false_node) return 0.0;
        if (n == true_node) return 1.0;
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
        std::size_t p = pos(n);
        double lo = self(self, nodes_[n].low) * std::ldexp(1.0, static_cast<int>(pos(nodes_[n].low) - p - 1));
        double hi = self(self, nodes_[n].high) * std::ldexp(1.0, static_cast<int>(pos(nodes_[n].high) - p - 1));
        memo.emplace(n, lo + hi);
        return lo + hi;
    };
    return rec(rec, f.node_) * std::ldexp(1.0, static_cast<int>(pos(f.node_)));
}

std::size_t Manager::dag_size(const Bdd& f) const {
    check_owner(f);
    std::unordered_set<NodeId> visited;
    std::vector<NodeId> stack{f.node_};
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (!visited.insert(n).second || is_terminal(n)) continue;
        stack.push_back(nodes_[n].low);
        stack.push_back(nodes_[n].high);
    }
    return visited.size();
}

void Manager::write_dot(std::ostream& out, const Bdd& f) const {
    check_owner(f);
    out << "digraph bdd {\n";
    out << "  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n";
    std::unordered_set<NodeId> visited;
    std::vector<NodeId> stack{f.node_};
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (is_terminal(n) || !visited.insert(n).second) continue;
        out << "  n" << n << " [label=\"x" << nodes_[n].var << "\"];\n";
        out << "  n" << n << " -> n" << nodes_[n].low << " [style=dashed];\n";
        out << "  n" << n << " -> n" << nodes_[n].high << ";\n";
        stack.push_back(nodes_[n].low);
        stack.push_back(nodes_[n].high);
    }
    out << "}\n";
}

}  // namespace symbound::bdd
