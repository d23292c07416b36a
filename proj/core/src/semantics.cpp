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

#include "symbound/semantics.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "symbound/errors.hpp"

namespace symbound::model {

std::optional<Transition> successor(const GuardedModel& m, std::span<const std::int64_t> values,
                                    const Command& command) {
    if (!command.guard->holds(values)) return std::nullopt;
    double rate = command.rate->evaluate(values);
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        std::ostringstream msg;
        msg << "command '" << command.label << "' has rate " << rate << " in state " << m.describe(values);
        throw SemanticError(msg.str());
    }
    std::vector<std::int64_t> next(values.begin(), values.end());
    for (const auto& a : command.updates) {
        double v = a.value->evaluate(values);
        const VarDecl& d = m.vars()[a.var];
        if (v < static_cast<double>(d.lo) || v > static_cast<double>(d.hi)) {
            std::ostringstream msg;
            msg << "command '" << command.label << "' sets " << d.name << " to " << v << " outside [" << d.lo << ".."
                << d.hi << "] in state " << m.describe(values);
            throw SemanticError(msg.str());
        }
        next[a.var] = static_cast<std::int64_t>(v);
    }
    return Transition{m.layout().encode(next), rate};
}

std::optional<Transition> successor(const GuardedModel& m, const BitState& state, const Command& command) {
    auto values = m.layout().decode(state);
    return successor(m, values, command);
}

namespace {

std::vector<Transition> aggregate(const GuardedModel& m, std::span<const std::int64_t> values) {
    std::vector<Transition> out;
    for (const auto& c : m.commands()) {
        auto t = successor(m, values, c);
        if (!t) continue;
        bool merged = false;
        for (auto& existing : out) {
            if (existing.target == t->target) {
                existing.rate += t->rate;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(std::move(*t));
    }
    return out;
}

}  // namespace

std::vector<Transition> succ_set(const GuardedModel& m, const BitState& state) {
    auto values = m.layout().decode(state);
    return aggregate(m, values);
}

ReachResult reachable(const GuardedModel& m, std::size_t state_cap) {
    ReachResult r;
    BitState init = m.initial_state();
    r.index.emplace(init, 0);
    r.states.push_back(init);
    for (std::size_t head = 0; head < r.states.size(); ++head) {
        auto succ = succ_set(m, r.states[head]);
        double exit = 0.0;
        for (const auto& t : succ) {
            exit += t.rate;
            if (r.index.count(t.target)) continue;
            if (r.states.size() >= state_cap) throw StateCapExceeded(state_cap);
            r.index.emplace(t.target, r.states.size());
            r.states.push_back(t.target);
        }
        if (succ.empty()) r.deadlocks.push_back(head);
        r.max_exit = std::max(r.max_exit, exit);
    }
    r.lambda = r.max_exit > 0.0 ? r.max_exit : 1.0;
    return r;
}

std::vector<Transition> UniformisedSemantics::transitions(const BitState& state) const {
    auto values = model->layout().decode(state);
    if (absorbing(values)) return {};
    return aggregate(*model, values);
}

UniformisedSemantics uniformise(std::shared_ptr<const GuardedModel> m, const ReachResult& reach,
                                std::optional<double> lambda_override) {
    UniformisedSemantics sem;
    sem.model = std::move(m);
    sem.lambda = reach.lambda;
    if (lambda_override) {
        if (!(*lambda_override > 0.0) || !std::isfinite(*lambda_override))
            throw SemanticError("uniformisation rate must be positive and finite");
        if (reach.max_exit > *lambda_override) {
            std::ostringstream msg;
            msg << "uniformisation rate " << *lambda_override << " is below the maximal exit rate " << reach.max_exit;
            throw SemanticError(msg.str());
        }
        sem.lambda = *lambda_override;
    }
    return sem;
}

UniformisedSemantics apply_target_absorption(UniformisedSemantics sem, ExprPtr target) {
    if (target && target->is_literal() && target->value() == 0.0) target = nullptr;
    if (sem.absorb && target)
        sem.absorb = Expr::make(Op::Or, {sem.absorb, target});
    else if (target)
        sem.absorb = std::move(target);
    return sem;
}

GuardedModel reachability_rewards(const GuardedModel& m, const ExprPtr& target) {
    return m.with_rewards({}, {RewardItem{target, Expr::literal(1.0, Type::Int)}});
}

}  // namespace symbound::model
