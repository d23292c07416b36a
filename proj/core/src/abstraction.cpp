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

#include "symbound/abstraction.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "symbound/errors.hpp"

namespace symbound::abstraction {

using bdd::Manager;
using bdd::NodeId;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BlockAcc {
    double r_lo = kInf, r_hi = -kInf, f_lo = kInf, f_hi = -kInf;
    std::map<Signature, std::size_t> index;
    std::vector<AbstractAction> actions;
};

class Sweep {
   public:
    Sweep(const model::UniformisedSemantics& sem, const Manager& mgr, const symbolic::SymbolicLayout& layout,
          const partition::Partition& p)
        : sem_(sem), m_(*sem.model), mgr_(mgr), layout_(layout), p_(p), blocks_(p.n_blocks) {}

    // Enumerates every state below `node` whose bits below `level` are
    // already fixed in `state`.
    void run(NodeId node, std::uint32_t level, model::BitState& state) {
        if (node == Manager::false_node) return;
        const std::uint32_t n = layout_.state_bits();
        if (level == n) {
            visit(state);
            return;
        }
        NodeId low = node, high = node;
        if (!Manager::is_terminal(node) && mgr_.node_var(node) == layout_.cur(level).index) {
            low = mgr_.node_low(node);
            high = mgr_.node_high(node);
        }
        state.set(level, false);
        run(low, level + 1, state);
        state.set(level, true);
        run(high, level + 1, state);
        state.set(level, false);
    }

    Abstraction finish() && {
        Abstraction a;
        a.concrete_states = states_;
        auto& e = a.ectmc;
        e.n_blocks = blocks_.size();
        e.lambda = sem_.lambda;
        e.actions.resize(blocks_.size());
        for (const auto& c : m_.commands()) e.command_labels.push_back(c.label);
        auto& rw = a.rewards;
        for (auto& b : blocks_) {
            rw.r_lo.push_back(b.r_lo);
            rw.r_hi.push_back(b.r_hi);
            rw.f_lo.push_back(b.f_lo);
            rw.f_hi.push_back(b.f_hi);
        }
        for (std::size_t z = 0; z < blocks_.size(); ++z) e.actions[z] = std::move(blocks_[z].actions);
        return a;
    }

   private:
    void visit(const model::BitState& state) {
        ++states_;
        const std::size_t z = partition::s_abs(mgr_, layout_, p_, state);
        auto values = m_.layout().decode(state);
        BlockAcc& acc = blocks_.at(z);
        double r = m_.cumulative_reward(values);
        double f = m_.final_reward(values);
        if (!(r >= 0.0) || !(f >= 0.0) || !std::isfinite(r) || !std::isfinite(f))
            throw SemanticError("reward must be finite and non-negative in state " + m_.describe(values));
        acc.r_lo = std::min(acc.r_lo, r);
        acc.r_hi = std::max(acc.r_hi, r);
        acc.f_lo = std::min(acc.f_lo, f);
        acc.f_hi = std::max(acc.f_hi, f);

        sig_.clear();
        rates_.clear();
        double exit = 0.0;
        if (!sem_.absorbing(values)) {
            const auto& commands = m_.commands();
            for (std::uint32_t c = 0; c < commands.size(); ++c) {
                auto t = model::successor(m_, values, commands[c]);
                if (!t) continue;
                std::uint64_t target = partition::s_abs(mgr_, layout_, p_, t->target);
                sig_.emplace_back(c, target);
                add_rate(target, t->rate);
                exit += t->rate;
            }
        }
        if (exit > sem_.lambda * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "exit rate " << exit << " exceeds the uniformisation rate " << sem_.lambda << " in state "
                << m_.describe(values);
            throw SemanticError(msg.str());
        }
        add_rate(z, std::max(0.0, sem_.lambda - exit));
        std::sort(rates_.begin(), rates_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

        auto [it, inserted] = acc.index.emplace(sig_, acc.actions.size());
        if (inserted) {
            AbstractAction action;
            action.signature = sig_;
            for (const auto& [block, rate] : rates_) action.row.push_back({block, {rate, rate}});
            acc.actions.push_back(std::move(action));
            return;
        }
        auto& row = acc.actions[it->second].row;
        for (std::size_t i = 0; i < row.size(); ++i) {
            row[i].rate.lo = std::min(row[i].rate.lo, rates_[i].second);
            row[i].rate.hi = std::max(row[i].rate.hi, rates_[i].second);
        }
    }

    void add_rate(std::uint64_t block, double rate) {
        for (auto& [b, r] : rates_) {
            if (b == block) {
                r += rate;
                return;
            }
        }
        rates_.emplace_back(block, rate);
    }

    const model::UniformisedSemantics& sem_;
    const model::GuardedModel& m_;
    const Manager& mgr_;
    const symbolic::SymbolicLayout& layout_;
    const partition::Partition& p_;
    std::vector<BlockAcc> blocks_;
    std::size_t states_ = 0;
    Signature sig_;
    std::vector<std::pair<std::uint64_t, double>> rates_;
};

void sort_actions(Ectmc& e) {
    for (auto& actions : e.actions)
        std::sort(actions.begin(), actions.end(),
                  [](const AbstractAction& a, const AbstractAction& b) { return a.signature < b.signature; });
}

void check_complete(const Abstraction& a) {
    for (std::size_t z = 0; z < a.ectmc.n_blocks; ++z)
        if (a.ectmc.actions[z].empty())
            throw Error("block " + std::to_string(z) + " has no member states; the partition is stale");
}

struct Task {
    NodeId node;
    std::uint32_t level;
    model::BitState state;
};

void split(const Manager& mgr, const symbolic::SymbolicLayout& layout, NodeId node, std::uint32_t level,
           std::uint32_t depth, model::BitState& state, std::vector<Task>& out) {
    if (node == Manager::false_node) return;
    if (level == depth) {
        out.push_back({node, level, state});
        return;
    }
    NodeId low = node, high = node;
    if (!Manager::is_terminal(node) && mgr.node_var(node) == layout.cur(level).index) {
        low = mgr.node_low(node);
        high = mgr.node_high(node);
    }
    state.set(level, false);
    split(mgr, layout, low, level + 1, depth, state, out);
    state.set(level, true);
    split(mgr, layout, high, level + 1, depth, state, out);
    state.set(level, false);
}

}  // namespace

Abstraction build_abstraction(const model::UniformisedSemantics& sem, const Manager& mgr,
                              const symbolic::SymbolicLayout& layout, const partition::Partition& p,
                              unsigned workers) {
    const auto& m = *sem.model;
    const std::size_t initial_block = partition::s_abs(mgr, layout, p, m.initial_state());
    Abstraction result;
    if (workers <= 1 || layout.state_bits() == 0) {
        Sweep sweep(sem, mgr, layout, p);
        model::BitState state(layout.state_bits());
        sweep.run(p.bdd.node(), 0, state);
        result = std::move(sweep).finish();
    } else {
        std::uint32_t depth = 0;
        while (depth < layout.state_bits() && (1U << depth) < 4 * workers) ++depth;
        std::vector<Task> tasks;
        model::BitState state(layout.state_bits());
        split(mgr, layout, p.bdd.node(), 0, depth, state, tasks);
        std::vector<Abstraction> partial(tasks.size());
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
                        Sweep sweep(sem, mgr, layout, p);
                        sweep.run(tasks[i].node, tasks[i].level, tasks[i].state);
                        partial[i] = std::move(sweep).finish();
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        if (partial.empty()) {
            Sweep empty(sem, mgr, layout, p);
            result = std::move(empty).finish();
        } else {
            result = std::move(partial[0]);
            for (std::size_t i = 1; i < partial.size(); ++i) result = merge(result, partial[i]);
        }
    }
    result.ectmc.initial_block = initial_block;
    sort_actions(result.ectmc);
    check_complete(result);
    return result;
}

Abstraction merge(const Abstraction& a, const Abstraction& b) {
    if (a.ectmc.n_blocks != b.ectmc.n_blocks || a.ectmc.lambda != b.ectmc.lambda)
        throw std::invalid_argument("merge: abstractions over different blocks or rates");
    Abstraction out = a;
    out.concrete_states += b.concrete_states;
    auto& rw = out.rewards;
    for (std::size_t z = 0; z < out.ectmc.n_blocks; ++z) {
        rw.r_lo[z] = std::min(rw.r_lo[z], b.rewards.r_lo[z]);
        rw.r_hi[z] = std::max(rw.r_hi[z], b.rewards.r_hi[z]);
        rw.f_lo[z] = std::min(rw.f_lo[z], b.rewards.f_lo[z]);
        rw.f_hi[z] = std::max(rw.f_hi[z], b.rewards.f_hi[z]);
        auto& mine = out.ectmc.actions[z];
        for (const auto& action : b.ectmc.actions[z]) {
            auto it = std::find_if(mine.begin(), mine.end(),
                                   [&](const AbstractAction& x) { return x.signature == action.signature; });
            if (it == mine.end()) {
                mine.push_back(action);
                continue;
            }
            if (it->row.size() != action.row.size())
                throw std::invalid_argument("merge: rows of one action differ in their successor blocks");
            for (std::size_t i = 0; i < it->row.size(); ++i) {
                if (it->row[i].block != action.row[i].block)
                    throw std::invalid_argument("merge: rows of one action differ in their successor blocks");
                it->row[i].rate.lo = std::min(it->row[i].rate.lo, action.row[i].rate.lo);
                it->row[i].rate.hi = std::max(it->row[i].rate.hi, action.row[i].rate.hi);
            }
        }
    }
    sort_actions(out.ectmc);
    return out;
}

double max_exit_rate(const model::GuardedModel& m, const Manager& mgr, const symbolic::SymbolicLayout& layout,
                     const bdd::Bdd& reach) {
    double best = 0.0;
    symbolic::for_each_state(mgr, layout, reach, [&](const model::BitState& s) {
        auto values = m.layout().decode(s);
        double exit = 0.0;
        for (const auto& c : m.commands())
            if (auto t = model::successor(m, values, c)) exit += t->rate;
        best = std::max(best, exit);
    });
    return best;
}

void check_feasible(const Ectmc& e, double tolerance) {
    const double slack = tolerance * std::max(1.0, e.lambda);
    for (std::size_t z = 0; z < e.n_blocks; ++z) {
        for (const auto& action : e.actions[z]) {
            double lo = 0.0, hi = 0.0;
            for (const auto& entry : action.row) {
                if (entry.rate.lo < -slack || entry.rate.lo > entry.rate.hi + slack ||
                    entry.rate.hi > e.lambda + slack || !std::isfinite(entry.rate.hi))
                    throw InfeasibleAbstraction("block " + std::to_string(z) + ": interval outside [0, lambda]");
                lo += entry.rate.lo;
                hi += entry.rate.hi;
            }
            if (lo > e.lambda + slack || hi < e.lambda - slack) {
                std::ostringstream msg;
                msg << "block " << z << ": rates in [" << lo << ", " << hi << "] cannot sum to " << e.lambda;
                throw InfeasibleAbstraction(msg.str());
            }
        }
    }
}

std::string describe(const Signature& sig, const std::vector<std::string>& labels) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < sig.size(); ++i) {
        if (i) out << ", ";
        out << (sig[i].first < labels.size() ? labels[sig[i].first] : std::to_string(sig[i].first)) << "->"
            << sig[i].second;
    }
    out << '}';
    return out.str();
}

}  // namespace symbound::abstraction
