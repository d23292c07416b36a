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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "symbound/parser.hpp"

namespace symbound::oracle {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string num(double v) {
    std::ostringstream out;
    out.precision(3);
    out << std::fixed << v;
    return out.str();
}

struct Move {
    std::string guard;
    std::string update;
};

}  // namespace

std::string random_model_text(Rng& rng, const RandomModelOptions& opts) {
    int a = 0, b = 0;
    bool with_flag = false;
    do {
        a = static_cast<int>(1 + pick(rng, 5));
        b = static_cast<int>(1 + pick(rng, 5));
        with_flag = coin(rng, 0.4);
    } while (static_cast<std::size_t>((a + 1) * (b + 1) * (with_flag ? 2 : 1)) > opts.max_states);

    std::vector<Move> moves = {
        {"x<" + std::to_string(a), "(x'=x+1)"},
        {"x>0", "(x'=x-1)"},
        {"true", "(x'=0)"},
        {"y<" + std::to_string(b), "(y'=y+1)"},
        {"y>0", "(y'=y-1)"},
        {"x<" + std::to_string(a), "(x'=x+1)&(y'=0)"},
        {"y>0", "(y'=y-1)&(x'=min(x+1," + std::to_string(a) + "))"},
    };
    if (with_flag) {
        moves.push_back({"true", "(b'=!b)"});
        moves.push_back({"!b", "(b'=true)&(y'=0)"});
    }
    std::vector<std::string> extra = {"y>=1", "x!=y", "x+y<=3", "x<=y", "y<2"};
    if (with_flag) {
        extra.push_back("b");
        extra.push_back("!b");
    }
    const double k0 = uniform(rng, 0.2, 3.0);
    auto rate = [&]() -> std::string {
        double c = uniform(rng, 0.1, 3.0), d = uniform(rng, 0.1, 1.5);
        switch (pick(rng, with_flag ? 6 : 5)) {
            case 0: return num(c);
            case 1: return num(c) + "*(x+1)";
            case 2: return num(c) + "+" + num(d) + "*y";
            case 3: return "max(" + num(c) + ", x*" + num(d) + ")";
            case 4: return "k0";
            default: return "(b ? " + num(c) + " : " + num(d) + ")";
        }
    };

    std::ostringstream out;
    out << "ctmc\n\nconst double k0 = " << num(k0) << ";\n\nmodule rnd\n";
    out << "  x : [0.." << a << "] init " << pick(rng, a + 1) << ";\n";
    out << "  y : [0.." << b << "] init " << pick(rng, b + 1) << ";\n";
    if (with_flag) out << "  b : bool init " << (coin(rng, 0.5) ? "true" : "false") << ";\n";
    const std::size_t n_commands = 1 + pick(rng, opts.max_commands);
    for (std::size_t c = 0; c < n_commands; ++c) {
        // the first two commands count x and y up, so most models leave
        // their initial state; the rest are drawn freely
        const Move& mv = c < 2 ? moves[c == 0 ? 0 : 3] : moves[pick(rng, moves.size())];
        std::string guard = mv.guard;
        if (coin(rng, 0.35)) guard = "(" + guard + ") & " + extra[pick(rng, extra.size())];
        out << "  [c" << c << "] " << guard << " -> " << rate() << " : " << mv.update;
        if (coin(rng, 0.2)) out << " + " << rate() << " : true";
        out << ";\n";
    }
    out << "endmodule\n\nrewards cumulative\n";
    out << "  true : " << num(uniform(rng, 0.0, 1.0)) << ";\n";
    out << "  x>=1 : " << num(uniform(rng, 0.0, 1.0)) << "*x;\n";
    out << "endrewards\n";
    if (opts.final_reward) {
        out << "\nrewards final\n";
        out << "  y=" << b << " : 1;\n";
        if (with_flag) out << "  b : " << num(uniform(rng, 0.0, 2.0)) << ";\n";
        out << "endrewards\n";
    }
    return out.str();
}

DenseChain dense_chain(const model::GuardedModel& m) {
    DenseChain c;
    std::map<std::vector<std::int64_t>, std::size_t> index;
    std::deque<std::size_t> queue;
    auto intern = [&](const std::vector<std::int64_t>& v) {
        auto [it, inserted] = index.emplace(v, c.states.size());
        if (inserted) {
            c.states.push_back(v);
            c.rates.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };
    intern(m.initial_values());
    while (!queue.empty()) {
        std::size_t s = queue.front();
        queue.pop_front();
        std::vector<std::int64_t> cur = c.states[s];
        std::map<std::size_t, long double> out;
        for (const auto& cmd : m.commands()) {
            if (!cmd.guard->holds(cur)) continue;
            std::vector<std::int64_t> next = cur;
            for (const auto& u : cmd.updates) next[u.var] = static_cast<std::int64_t>(std::llround(u.value->evaluate(cur)));
            std::size_t t = intern(next);
            if (t != s) out[t] += cmd.rate->evaluate(cur);
        }
        long double exit = 0;
        for (const auto& [t, rate] : out) {
            c.rates[s].emplace_back(t, rate);
            exit += rate;
        }
        c.max_exit = std::max(c.max_exit, exit);
    }
    for (const auto& v : c.states) {
        c.r.push_back(m.cumulative_reward(v));
        c.f.push_back(m.final_reward(v));
    }
    return c;
}

std::vector<long double> kolmogorov_value(const DenseChain& c, double t, double steps_per_unit_rate) {
    const std::size_t n = c.states.size();
    std::size_t steps = std::max<std::size_t>(
        1000, static_cast<std::size_t>(std::ceil(static_cast<double>(c.max_exit) * t * steps_per_unit_rate)));
    const long double h = static_cast<long double>(t) / static_cast<long double>(steps);
    auto deriv = [&](const std::vector<long double>& v, std::vector<long double>& dv) {
        for (std::size_t s = 0; s < n; ++s) {
            long double acc = c.r[s];
            for (const auto& [j, rate] : c.rates[s]) acc += rate * (v[j] - v[s]);
            dv[s] = acc;
        }
    };
    std::vector<long double> v = c.f, k1(n), k2(n), k3(n), k4(n), tmp(n);
    if (t == 0.0) return v;
    for (std::size_t step = 0; step < steps; ++step) {
        deriv(v, k1);
        for (std::size_t s = 0; s < n; ++s) tmp[s] = v[s] + h / 2 * k1[s];
        deriv(tmp, k2);
        for (std::size_t s = 0; s < n; ++s) tmp[s] = v[s] + h / 2 * k2[s];
        deriv(tmp, k3);
        for (std::size_t s = 0; s < n; ++s) tmp[s] = v[s] + h * k3[s];
        deriv(tmp, k4);
        for (std::size_t s = 0; s < n; ++s) v[s] += h / 6 * (k1[s] + 2 * k2[s] + 2 * k3[s] + k4[s]);
    }
    return v;
}

long double poisson_pmf(long double lambda_t, std::size_t i) {
    if (lambda_t == 0) return i == 0 ? 1.0L : 0.0L;
    long double li = static_cast<long double>(i);
    return std::exp(li * std::log(lambda_t) - lambda_t - std::lgamma(li + 1));
}

long double poisson_tail(long double lambda_t, std::size_t i) {
    // Sum upward from i + 1 until the terms are negligible; the terms past
    // the mode decay at least geometrically.
    long double sum = 0;
    std::size_t j = i + 1;
    long double term = poisson_pmf(lambda_t, j);
    while (true) {
        sum += term;
        ++j;
        term = poisson_pmf(lambda_t, j);
        if (static_cast<long double>(j) > lambda_t && term < sum * 1e-22L) break;
        if (static_cast<long double>(j) > lambda_t && term == 0) break;
    }
    return sum;
}

double vertex_optimum(const std::vector<double>& lo, const std::vector<double>& hi, const std::vector<double>& q,
                      double lambda, bool maximise) {
    const std::size_t n = lo.size();
    double best = std::numeric_limits<double>::quiet_NaN();
    const double slack = 1e-9 * std::max(1.0, lambda);
    for (std::size_t free = 0; free < n; ++free) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
            std::vector<double> x(n);
            double rest = 0.0;
            std::size_t bit = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == free) continue;
                x[i] = ((mask >> bit++) & 1U) ? hi[i] : lo[i];
                rest += x[i];
            }
            x[free] = lambda - rest;
            if (x[free] < lo[free] - slack || x[free] > hi[free] + slack) continue;
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) v += x[i] * q[i];
            v /= lambda;
            if (std::isnan(best) || (maximise ? v > best : v < best)) best = v;
        }
    }
    return best;
}

ctmdp::FiniteCtmdp random_ctmdp(Rng& rng, std::size_t n, std::size_t max_actions, double lambda) {
    ctmdp::FiniteCtmdp m;
    m.n = n;
    m.lambda = lambda;
    m.actions.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::size_t n_actions = 1 + pick(rng, max_actions);
        for (std::size_t a = 0; a < n_actions; ++a) {
            std::map<std::size_t, double> rates;
            double budget = lambda * uniform(rng, 0.2, 1.0);
            std::size_t succ = 1 + pick(rng, std::min<std::size_t>(3, n));
            for (std::size_t j = 0; j < succ; ++j) rates[pick(rng, n)] += budget / static_cast<double>(succ);
            double used = 0.0;
            for (const auto& [t, r] : rates) used += r;
            rates[s] += lambda - used;
            ctmdp::CtmdpAction act;
            act.name = "a" + std::to_string(a);
            for (const auto& [t, r] : rates)
                if (r > 0.0) act.rates.emplace_back(t, r);
            m.actions[s].push_back(std::move(act));
        }
        m.r.push_back(coin(rng, 0.6) ? uniform(rng, 0.0, 2.0) : 0.0);
        m.f.push_back(coin(rng, 0.5) ? uniform(rng, 0.0, 1.0) : 0.0);
    }
    return m;
}

std::uint64_t cd_scheduler_count(const ctmdp::FiniteCtmdp& m, std::size_t k, std::uint64_t limit) {
    std::uint64_t count = 1;
    for (std::size_t step = 0; step <= k; ++step)
        for (const auto& acts : m.actions) {
            count *= acts.size();
            if (count > limit) return limit + 1;
        }
    return count;
}

std::vector<long double> enumerate_cd_optimum(const ctmdp::FiniteCtmdp& m, double t, std::size_t k, bool maximise) {
    const std::size_t n = m.n;
    const long double lt = static_cast<long double>(m.lambda) * t;
    std::vector<long double> phi(k + 1), psi(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        phi[i] = poisson_pmf(lt, i);
        psi[i] = poisson_tail(lt, i);
    }
    std::vector<std::size_t> choice((k + 1) * n, 0);
    std::vector<long double> best(n, maximise ? -1.0L : std::numeric_limits<long double>::infinity());
    std::vector<long double> q(n), next(n);
    while (true) {
        std::fill(next.begin(), next.end(), 0.0L);
        for (std::size_t i = k + 1; i-- > 0;) {
            for (std::size_t s = 0; s < n; ++s) {
                const auto& act = m.actions[s][choice[i * n + s]];
                long double acc = 0;
                for (const auto& [j, rate] : act.rates) acc += static_cast<long double>(rate) * next[j];
                q[s] = acc / m.lambda + phi[i] * m.f[s] + psi[i] * m.r[s] / m.lambda;
            }
            std::swap(q, next);
        }
        for (std::size_t s = 0; s < n; ++s) best[s] = maximise ? std::max(best[s], next[s]) : std::min(best[s], next[s]);
        std::size_t pos = 0;
        for (; pos < choice.size(); ++pos) {
            if (++choice[pos] < m.actions[pos % n].size()) break;
            choice[pos] = 0;
        }
        if (pos == choice.size()) break;
    }
    return best;
}

Rig make_rig(const std::string& text, std::optional<double> lambda) {
    Rig rig;
    rig.model = std::make_shared<const model::GuardedModel>(model::parse_model(text));
    rig.reach = model::reachable(*rig.model);
    rig.sem = model::uniformise(rig.model, rig.reach, lambda);
    rig.layout = symbolic::SymbolicLayout::for_model(*rig.model);
    rig.mgr = std::make_unique<bdd::Manager>(rig.layout.total_vars(), 14);
    return rig;
}

partition::Partition assign(Rig& rig, const std::vector<std::size_t>& block_of) {
    return partition::partition_from_assignment(*rig.mgr, rig.layout, rig.reach.states, block_of);
}

abstraction::Abstraction abstract(Rig& rig, const std::vector<std::size_t>& block_of) {
    auto p = assign(rig, block_of);
    return abstraction::build_abstraction(rig.sem, *rig.mgr, rig.layout, p);
}

std::vector<std::size_t> random_blocks(Rng& rng, std::size_t n) {
    std::size_t blocks = 1 + pick(rng, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[order[i]] = i < blocks ? i : pick(rng, blocks);
    return out;
}

std::vector<std::size_t> random_split(Rng& rng, const std::vector<std::size_t>& block_of, std::size_t ways) {
    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t s = 0; s < block_of.size(); ++s) members[block_of[s]].push_back(s);
    std::vector<std::size_t> out(block_of.size());
    std::size_t next_id = 0;
    for (auto& [block, states] : members) {
        std::size_t parts = 1 + pick(rng, std::min(ways, states.size()));
        std::shuffle(states.begin(), states.end(), rng);
        std::vector<std::size_t> part_of(states.size());
        for (std::size_t i = 0; i < states.size(); ++i) part_of[i] = i < parts ? i : pick(rng, parts);
        for (std::size_t i = 0; i < states.size(); ++i) out[states[i]] = next_id + part_of[i];
        next_id += parts;
    }
    return out;
}

abstraction::Abstraction brute_force_abstraction(const Rig& rig, const std::vector<std::size_t>& block_of,
                                                 const std::vector<bool>& include) {
    const auto& m = *rig.model;
    const auto& states = rig.reach.states;
    std::size_t n_blocks = *std::max_element(block_of.begin(), block_of.end()) + 1;

    abstraction::Abstraction a;
    a.concrete_states = 0;
    auto& e = a.ectmc;
    e.n_blocks = n_blocks;
    e.lambda = rig.sem.lambda;
    e.initial_block = block_of[0];
    for (const auto& c : m.commands()) e.command_labels.push_back(c.label);
    auto& rw = a.rewards;
    const double inf = std::numeric_limits<double>::infinity();
    rw.r_lo.assign(n_blocks, inf);
    rw.r_hi.assign(n_blocks, -inf);
    rw.f_lo.assign(n_blocks, inf);
    rw.f_hi.assign(n_blocks, -inf);

    std::vector<std::map<abstraction::Signature, std::map<std::uint64_t, abstraction::RateInterval>>> acc(n_blocks);
    for (std::size_t s = 0; s < states.size(); ++s) {
        if (!include.empty() && !include[s]) continue;
        ++a.concrete_states;
        const std::size_t z = block_of[s];
        auto values = m.layout().decode(states[s]);
        double r = m.cumulative_reward(values), f = m.final_reward(values);
        rw.r_lo[z] = std::min(rw.r_lo[z], r);
        rw.r_hi[z] = std::max(rw.r_hi[z], r);
        rw.f_lo[z] = std::min(rw.f_lo[z], f);
        rw.f_hi[z] = std::max(rw.f_hi[z], f);

        abstraction::Signature sig;
        std::map<std::uint64_t, double> into;
        double exit = 0.0;
        if (!rig.sem.absorbing(values)) {
            for (std::uint32_t c = 0; c < m.commands().size(); ++c) {
                auto t = model::successor(m, values, m.commands()[c]);
                if (!t) continue;
                std::uint64_t target = block_of[rig.reach.index.at(t->target)];
                sig.emplace_back(c, target);
                into[target] += t->rate;
                exit += t->rate;
            }
        }
        into[z] += std::max(0.0, rig.sem.lambda - exit);
        auto [it, inserted] = acc[z].try_emplace(sig);
        for (const auto& [block, rate] : into) {
            auto [slot, fresh] = it->second.try_emplace(block, abstraction::RateInterval{rate, rate});
            if (!fresh) {
                slot->second.lo = std::min(slot->second.lo, rate);
                slot->second.hi = std::max(slot->second.hi, rate);
            }
        }
    }
    e.actions.resize(n_blocks);
    for (std::size_t z = 0; z < n_blocks; ++z)
        for (const auto& [sig, row] : acc[z]) {
            abstraction::AbstractAction act;
            act.signature = sig;
            for (const auto& [block, iv] : row) act.row.push_back({block, iv});
            e.actions[z].push_back(std::move(act));
        }
    return a;
}

}  // namespace symbound::oracle
