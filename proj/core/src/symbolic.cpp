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

#include "symbound/symbolic.hpp"

#include <algorithm>
#include <stdexcept>

#include "symbound/errors.hpp"

namespace symbound::symbolic {

using bdd::Bdd;
using bdd::Manager;
using bdd::VarId;
using model::Expr;
using model::ExprPtr;
using model::GuardedModel;
using model::Op;
using model::Type;

SymbolicLayout::SymbolicLayout(std::uint32_t state_bits, std::uint32_t block_bits) : n_(state_bits), w_(block_bits) {
    for (std::uint32_t i = 0; i < n_; ++i) {
        cur_.push_back(cur(i));
        next_.push_back(next(i));
    }
    for (std::uint32_t i = 0; i < w_; ++i) {
        block_.push_back(block(i));
        sig_.push_back(sig(i));
    }
}

SymbolicLayout SymbolicLayout::for_model(const GuardedModel& m) {
    auto n = static_cast<std::uint32_t>(m.layout().bit_count());
    // a partition never has more blocks than states
    std::uint32_t w = std::clamp<std::uint32_t>(n, 1, 31);
    return SymbolicLayout(n, w);
}

namespace {

class Encoder {
   public:
    Encoder(Manager& mgr, const SymbolicLayout& layout, const GuardedModel& m, std::uint64_t cap)
        : mgr_(mgr), layout_(layout), m_(m), cap_(cap), values_(m.vars().size(), 0) {}

    Bdd value_cube(std::size_t var, std::int64_t value, bool next) {
        const auto& bl = m_.layout();
        std::vector<VarId> vars;
        for (unsigned b = 0; b < bl.width(var); ++b) {
            auto bit = static_cast<std::uint32_t>(bl.offset(var) + b);
            vars.push_back(next ? layout_.next(bit) : layout_.cur(bit));
        }
        return mgr_.cube(vars, static_cast<std::uint64_t>(value - m_.vars()[var].lo));
    }

    Bdd valid() {
        Bdd all = mgr_.bdd_true();
        for (std::size_t j = 0; j < m_.vars().size(); ++j) {
            const auto& d = m_.vars()[j];
            std::uint64_t span = static_cast<std::uint64_t>(d.hi - d.lo) + 1;
            if (d.is_bool || span == (std::uint64_t{1} << m_.layout().width(j))) continue;
            Bdd ok = mgr_.bdd_false();
            for (std::int64_t v = d.lo; v <= d.hi; ++v) ok = ok | value_cube(j, v, false);
            all = all & ok;
        }
        return all;
    }

    Bdd boolean(const ExprPtr& e) {
        switch (e->op()) {
            case Op::Literal:
                return mgr_.constant(e->value() != 0.0);
            case Op::Var:
                return mgr_.var(layout_.cur(static_cast<std::uint32_t>(m_.layout().offset(e->var_index()))));
            case Op::Not:
                return !boolean(e->args()[0]);
            case Op::And:
                return boolean(e->args()[0]) & boolean(e->args()[1]);
            case Op::Or:
                return boolean(e->args()[0]) | boolean(e->args()[1]);
            case Op::Implies:
                return (!boolean(e->args()[0])) | boolean(e->args()[1]);
            case Op::Ite:
                if (e->type() == Type::Bool)
                    return mgr_.ite(boolean(e->args()[0]), boolean(e->args()[1]), boolean(e->args()[2]));
                break;
            case Op::Eq:
            case Op::Ne:
                if (e->args()[0]->type() == Type::Bool) {
                    Bdd x = boolean(e->args()[0]) ^ boolean(e->args()[1]);
                    return e->op() == Op::Eq ? !x : x;
                }
                break;
            default:
                break;
        }
        return enumerate(e->support(), [&](std::span<const std::int64_t> values) {
            return mgr_.constant(safe_eval(*e, values).value_or(0.0) != 0.0);
        });
    }

    /// x'_var = e, or x'_var <-> e for Booleans; out-of-range values give no successor.
    Bdd update(std::size_t var, const ExprPtr& e) {
        const auto& d = m_.vars()[var];
        if (d.is_bool) {
            Bdd x = mgr_.var(layout_.next(static_cast<std::uint32_t>(m_.layout().offset(var))));
            return !(x ^ boolean(e));
        }
        return enumerate(e->support(), [&](std::span<const std::int64_t> values) {
            auto v = safe_eval(*e, values);
            if (!v || *v < static_cast<double>(d.lo) || *v > static_cast<double>(d.hi)) return mgr_.bdd_false();
            return value_cube(var, static_cast<std::int64_t>(*v), true);
        });
    }

    Bdd frame(std::size_t var) {
        const auto& bl = m_.layout();
        Bdd eq = mgr_.bdd_true();
        for (unsigned b = 0; b < bl.width(var); ++b) {
            auto bit = static_cast<std::uint32_t>(bl.offset(var) + b);
            eq = eq & !(mgr_.var(layout_.cur(bit)) ^ mgr_.var(layout_.next(bit)));
        }
        return eq;
    }

   private:
    // Evaluation failures (division by zero) only occur on value
    // combinations that no reachable guarded state uses in a well-formed
    // model; the explicit sweep reports them where they matter.
    static std::optional<double> safe_eval(const Expr& e, std::span<const std::int64_t> values) {
        try {
            return e.evaluate(values);
        } catch (const SemanticError&) {
            return std::nullopt;
        }
    }

    template <typename Leaf>
    Bdd enumerate(const std::vector<std::size_t>& support, Leaf&& leaf) {
        std::uint64_t combos = 1;
        for (auto j : support) {
            const auto& d = m_.vars()[j];
            combos *= static_cast<std::uint64_t>(d.hi - d.lo) + 1;
            if (combos > cap_) throw SemanticError("expression ranges over too many values for symbolic encoding");
        }
        return enumerate_rec(support, 0, leaf);
    }

    template <typename Leaf>
    Bdd enumerate_rec(const std::vector<std::size_t>& support, std::size_t idx, Leaf& leaf) {
        if (idx == support.size()) return leaf(std::span<const std::int64_t>(values_));
        std::size_t j = support[idx];
        const auto& d = m_.vars()[j];
        Bdd out = mgr_.bdd_false();
        for (std::int64_t v = d.lo; v <= d.hi; ++v) {
            values_[j] = v;
            Bdd sub = enumerate_rec(support, idx + 1, leaf);
            if (!sub.is_false()) out = out | (value_cube(j, v, false) & sub);
        }
        return out;
    }

    Manager& mgr_;
    const SymbolicLayout& layout_;
    const GuardedModel& m_;
    std::uint64_t cap_;
    std::vector<std::int64_t> values_;
};

}  // namespace

SymbolicModel build_symbolic(const GuardedModel& m, Manager& mgr, const SymbolicLayout& layout) {
    if (mgr.var_count() < layout.total_vars())
        throw std::invalid_argument("manager has " + std::to_string(mgr.var_count()) + " variables, layout needs " +
                                    std::to_string(layout.total_vars()));
    if (layout.state_bits() != m.layout().bit_count())
        throw std::invalid_argument("layout state bits do not match the model encoding");
    Encoder enc(mgr, layout, m, std::uint64_t{1} << 22);
    SymbolicModel sym;
    sym.layout = layout;
    sym.valid = enc.valid();
    auto init = m.initial_values();
    sym.init = mgr.bdd_true();
    for (std::size_t j = 0; j < init.size(); ++j) sym.init = sym.init & enc.value_cube(j, init[j], false);

    for (const auto& c : m.commands()) {
        Bdd t = sym.valid & enc.boolean(c.guard);
        std::vector<bool> assigned(m.vars().size(), false);
        for (const auto& a : c.updates) {
            if (t.is_false()) break;
            t = t & enc.update(a.var, a.value);
            assigned[a.var] = true;
        }
        for (std::size_t j = 0; j < assigned.size() && !t.is_false(); ++j)
            if (!assigned[j]) t = t & enc.frame(j);
        sym.transitions.push_back(t);
    }
    return sym;
}

Bdd reachable_set(Manager& mgr, const SymbolicModel& sym) {
    Bdd relation = mgr.bdd_false();
    for (const auto& t : sym.transitions) relation = relation | t;
    const auto& L = sym.layout;
    Bdd reach = sym.init;
    Bdd frontier = sym.init;
    while (!frontier.is_false()) {
        Bdd image = mgr.and_exists(frontier, relation, L.cur_vars());
        image = mgr.rename(image, L.next_vars(), L.cur_vars());
        frontier = image & !reach;
        reach = reach | frontier;
    }
    return reach;
}

Bdd predicate_bdd(Manager& mgr, const SymbolicLayout& layout, const GuardedModel& m, const ExprPtr& e,
                  std::uint64_t enum_cap) {
    if (e->type() != Type::Bool) throw SemanticError("predicate is not Boolean");
    Encoder enc(mgr, layout, m, enum_cap);
    return enc.boolean(e);
}

void for_each_state(const Manager& mgr, const SymbolicLayout& layout, const Bdd& set,
                    const std::function<void(const model::BitState&)>& visit) {
    const std::uint32_t n = layout.state_bits();
    model::BitState state(n);
    auto rec = [&](auto&& self, bdd::NodeId node, std::uint32_t level) -> void {
        if (node == Manager::false_node) return;
        if (level == n) {
            visit(state);
            return;
        }
        std::uint32_t var = mgr.node_var(node);
        const std::uint32_t here = layout.cur(level).index;
        if (var < here) throw std::logic_error("for_each_state: unordered node");
        if (!Manager::is_terminal(node) && !layout.is_cur(var))
            throw std::invalid_argument("for_each_state: set depends on non-state variables");
        bdd::NodeId low = node, high = node;
        if (var == here) {
            low = mgr.node_low(node);
            high = mgr.node_high(node);
        }
        state.set(level, false);
        self(self, low, level + 1);
        state.set(level, true);
        self(self, high, level + 1);
        state.set(level, false);
    };
    rec(rec, set.node(), 0);
}

Bdd state_cube(Manager& mgr, const SymbolicLayout& layout, const model::BitState& state) {
    Bdd cube = mgr.bdd_true();
    for (std::uint32_t b = layout.state_bits(); b-- > 0;) {
        Bdd none = mgr.bdd_false();
        cube = state.get(b) ? mgr.make_node(layout.cur(b), none, cube) : mgr.make_node(layout.cur(b), cube, none);
    }
    return cube;
}

double count_states(const Manager& mgr, const SymbolicLayout& layout, const Bdd& set) {
    return mgr.sat_count(set, layout.cur_vars());
}

}  // namespace symbound::symbolic
