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

#include "symbound/value_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "symbound/errors.hpp"

namespace symbound::vi {

const char* to_string(Direction d) { return d == Direction::Max ? "max" : "min"; }

namespace {

bool better(double candidate, double best, Direction dir) {
    return dir == Direction::Max ? candidate > best : candidate < best;
}

// Greedy fill into `x`; `order` is scratch space. Returns sum x_i q_i.
double greedy(std::span<const double> lo, std::span<const double> hi, std::span<const double> q, double lambda,
              Direction dir, std::vector<std::uint32_t>& order, std::span<double> x) {
    const std::size_t m = lo.size();
    order.resize(m);
    std::iota(order.begin(), order.end(), 0U);
    if (dir == Direction::Max)
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return q[a] > q[b] || (q[a] == q[b] && a < b); });
    else
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return q[a] < q[b] || (q[a] == q[b] && a < b); });
    double budget = lambda;
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = lo[i];
        budget -= lo[i];
    }
    for (auto i : order) {
        if (budget <= 0.0) break;
        double add = std::min(hi[i] - lo[i], budget);
        x[i] += add;
        budget -= add;
    }
    double value = 0.0;
    for (std::size_t i = 0; i < m; ++i) value += x[i] * q[i];
    return value;
}

void check_row(std::span<const double> lo, std::span<const double> hi, double lambda, double tolerance) {
    double sum_lo = 0.0, sum_hi = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (lo[i] > hi[i] + tolerance * lambda || lo[i] < -tolerance * lambda)
            throw InfeasibleAbstraction("rate interval with lo > hi or lo < 0");
        sum_lo += lo[i];
        sum_hi += hi[i];
    }
    if (sum_lo > lambda * (1.0 + tolerance) || sum_hi < lambda * (1.0 - tolerance)) {
        std::ostringstream msg;
        msg << "rate bounds [" << sum_lo << ", " << sum_hi << "] cannot sum to " << lambda;
        throw InfeasibleAbstraction(msg.str());
    }
}

numerics::PoissonTerms terms_for(double lambda, double t, double eps, std::span<const double> r,
                                 std::span<const double> f, std::size_t cap) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("time horizon must be >= 0");
    double r_max = 0.0, f_max = 0.0;
    for (double x : r) {
        if (!std::isfinite(x) || x < 0.0) throw SemanticError("rewards must be finite and non-negative");
        r_max = std::max(r_max, x);
    }
    for (double x : f) {
        if (!std::isfinite(x) || x < 0.0) throw SemanticError("rewards must be finite and non-negative");
        f_max = std::max(f_max, x);
    }
    return numerics::poisson_terms(lambda * t, eps, r_max, f_max, lambda, cap);
}

// Flattened interval rows of an abstraction.
struct FlatEctmc {
    std::vector<std::size_t> action_start;  // per block
    std::vector<std::size_t> entry_start;   // per action
    std::vector<std::size_t> block;
    std::vector<double> lo, hi;
    std::vector<char> fixed;  // lo == hi on the whole row

    explicit FlatEctmc(const abstraction::Ectmc& e) {
        action_start.push_back(0);
        entry_start.push_back(0);
        for (std::size_t z = 0; z < e.n_blocks; ++z) {
            if (e.actions[z].empty()) throw InfeasibleAbstraction("block " + std::to_string(z) + " has no actions");
            for (const auto& a : e.actions[z]) {
                bool is_fixed = true;
                for (const auto& entry : a.row) {
                    if (entry.block >= e.n_blocks) throw InfeasibleAbstraction("row refers to an unknown block");
                    block.push_back(entry.block);
                    lo.push_back(entry.rate.lo);
                    hi.push_back(entry.rate.hi);
                    is_fixed = is_fixed && entry.rate.lo == entry.rate.hi;
                }
                std::size_t begin = entry_start.back();
                check_row({lo.data() + begin, lo.size() - begin}, {hi.data() + begin, hi.size() - begin}, e.lambda,
                          1e-9);
                entry_start.push_back(block.size());
                fixed.push_back(is_fixed ? 1 : 0);
            }
            action_start.push_back(entry_start.size() - 1);
        }
    }
};

}  // namespace

RowChoice optimize_rate_row(std::span<const double> lo, std::span<const double> hi, std::span<const double> q,
                            double lambda, Direction dir, double tolerance) {
    if (lo.size() != hi.size() || lo.size() != q.size()) throw std::invalid_argument("row vectors differ in length");
    check_row(lo, hi, lambda, tolerance);
    RowChoice out;
    out.x.resize(lo.size());
    std::vector<std::uint32_t> order;
    out.value = greedy(lo, hi, q, lambda, dir, order, out.x) / lambda;
    return out;
}

ValueResult value_ctmdp(const ctmdp::FiniteCtmdp& m, double t, double eps, Direction dir, const Options& opts) {
    ctmdp::validate(m);
    std::span<const double> f = opts.final_override ? *opts.final_override : std::span<const double>(m.f);
    if (f.size() != m.n) throw std::invalid_argument("final reward vector has the wrong size");
    auto terms = terms_for(m.lambda, t, eps, m.r, f, opts.iteration_cap);

    ValueResult res;
    res.eps = eps;
    res.k = terms.k;
    res.direction = dir;
    if (opts.record_scheduler) {
        res.scheduler.emplace();
        res.scheduler->steps = terms.k + 1;
        res.scheduler->n = m.n;
        res.scheduler->action.assign((terms.k + 1) * m.n, 0);
    }
    std::vector<double> next(m.n, 0.0), cur(m.n, 0.0);
    for (std::size_t i = terms.k + 1; i-- > 0;) {
        for (std::size_t s = 0; s < m.n; ++s) {
            double best = 0.0;
            std::uint32_t arg = 0;
            for (std::uint32_t a = 0; a < m.actions[s].size(); ++a) {
                double v = 0.0;
                for (const auto& [dst, rate] : m.actions[s][a].rates) v += rate * next[dst];
                if (a == 0 || better(v, best, dir)) {
                    best = v;
                    arg = a;
                }
            }
            cur[s] = best / m.lambda + terms.phi[i] * f[s] + terms.psi[i] * m.r[s] / m.lambda;
            if (res.scheduler) res.scheduler->action[i * m.n + s] = arg;
        }
        std::swap(cur, next);
    }
    res.q = std::move(next);
    return res;
}

ValueResult value_bounds(const abstraction::Ectmc& e, const abstraction::AbstractRewards& rw, double t, double eps,
                         Direction dir, const Options& opts) {
    const std::size_t n = e.n_blocks;
    if (!(e.lambda > 0.0)) throw InfeasibleAbstraction("uniformisation rate must be positive");
    const auto& r = dir == Direction::Max ? rw.r_hi : rw.r_lo;
    std::span<const double> f = opts.final_override ? *opts.final_override
                                                    : std::span<const double>(dir == Direction::Max ? rw.f_hi : rw.f_lo);
    if (r.size() != n || f.size() != n || rw.r_hi.size() != n || rw.f_hi.size() != n)
        throw std::invalid_argument("reward vectors do not match the block count");
    // both directions share k, determined by the upper rewards
    auto terms = terms_for(e.lambda, t, eps, rw.r_hi, opts.final_override ? f : std::span<const double>(rw.f_hi),
                           opts.iteration_cap);
    terms_for(e.lambda, t, eps, r, f, opts.iteration_cap);  // validates the lower rewards
    FlatEctmc flat(e);

    ValueResult res;
    res.eps = eps;
    res.k = terms.k;
    res.direction = dir;
    if (opts.record_scheduler) {
        res.scheduler.emplace();
        res.scheduler->steps = terms.k + 1;
        res.scheduler->n = n;
        res.scheduler->action.assign((terms.k + 1) * n, 0);
        res.scheduler->rate_offset.assign((terms.k + 1) * n + 1, 0);
    }
    std::vector<double> next(n, 0.0), cur(n, 0.0);
    std::vector<double> q_row, x, best_x;
    std::vector<std::uint32_t> order;
    std::vector<std::vector<double>> chosen;
    std::vector<std::vector<double>> step_rates;
    std::vector<std::vector<std::size_t>> step_sizes;
    if (res.scheduler) {
        chosen.resize(n);
        step_rates.resize(terms.k + 1);
        step_sizes.resize(terms.k + 1);
    }
    for (std::size_t i = terms.k + 1; i-- > 0;) {
        for (std::size_t z = 0; z < n; ++z) {
            double best = 0.0;
            std::uint32_t arg = 0;
            for (std::size_t a = flat.action_start[z]; a < flat.action_start[z + 1]; ++a) {
                const std::size_t b = flat.entry_start[a], end = flat.entry_start[a + 1];
                double v = 0.0;
                if (flat.fixed[a] && !res.scheduler) {
                    for (std::size_t j = b; j < end; ++j) v += flat.lo[j] * next[flat.block[j]];
                } else {
                    q_row.resize(end - b);
                    x.resize(end - b);
                    for (std::size_t j = b; j < end; ++j) q_row[j - b] = next[flat.block[j]];
                    v = greedy({flat.lo.data() + b, end - b}, {flat.hi.data() + b, end - b}, q_row, e.lambda, dir,
                               order, x);
                }
                auto local = static_cast<std::uint32_t>(a - flat.action_start[z]);
                if (local == 0 || better(v, best, dir)) {
                    best = v;
                    arg = local;
                    if (res.scheduler) best_x = x;
                }
            }
            cur[z] = best / e.lambda + terms.phi[i] * f[z] + terms.psi[i] * r[z] / e.lambda;
            if (res.scheduler) {
                res.scheduler->action[i * n + z] = arg;
                chosen[z] = best_x;
            }
        }
        if (res.scheduler) {
            for (std::size_t z = 0; z < n; ++z) {
                step_rates[i].insert(step_rates[i].end(), chosen[z].begin(), chosen[z].end());
                step_sizes[i].push_back(chosen[z].size());
            }
        }
        std::swap(cur, next);
    }
    if (res.scheduler) {
        auto& sched = *res.scheduler;
        for (std::size_t step = 0; step < sched.steps; ++step) {
            sched.rates.insert(sched.rates.end(), step_rates[step].begin(), step_rates[step].end());
            for (std::size_t z = 0; z < n; ++z)
                sched.rate_offset[step * n + z + 1] = sched.rate_offset[step * n + z] + step_sizes[step][z];
        }
    }
    res.q = std::move(next);
    return res;
}

std::vector<double> evaluate_scheduler(const ctmdp::FiniteCtmdp& m, const CdScheduler& sched, double t, double eps,
                                       std::optional<std::span<const double>> final_override) {
    ctmdp::validate(m);
    if (sched.n != m.n || sched.steps == 0) throw std::invalid_argument("scheduler does not match the model");
    std::span<const double> f = final_override ? *final_override : std::span<const double>(m.f);
    auto terms = terms_for(m.lambda, t, eps, m.r, f, numerics::kDefaultIterationCap);
    std::vector<double> next(m.n, 0.0), cur(m.n, 0.0);
    for (std::size_t i = terms.k + 1; i-- > 0;) {
        std::size_t step = std::min(i, sched.steps - 1);
        for (std::size_t s = 0; s < m.n; ++s) {
            const auto& action = m.actions[s].at(sched.choice(step, s));
            double v = 0.0;
            for (const auto& [dst, rate] : action.rates) v += rate * next[dst];
            cur[s] = v / m.lambda + terms.phi[i] * f[s] + terms.psi[i] * m.r[s] / m.lambda;
        }
        std::swap(cur, next);
    }
    return next;
}

std::vector<double> evaluate_scheduler(const abstraction::Ectmc& e, const abstraction::AbstractRewards& rw,
                                       Direction dir, const CdScheduler& sched, double t, double eps,
                                       std::optional<std::span<const double>> final_override) {
    const std::size_t n = e.n_blocks;
    if (sched.n != n || sched.steps == 0 || sched.rate_offset.size() != sched.steps * n + 1)
        throw std::invalid_argument("scheduler does not match the abstraction");
    const auto& r = dir == Direction::Max ? rw.r_hi : rw.r_lo;
    std::span<const double> f =
        final_override ? *final_override : std::span<const double>(dir == Direction::Max ? rw.f_hi : rw.f_lo);
    auto terms = terms_for(e.lambda, t, eps, rw.r_hi, final_override ? f : std::span<const double>(rw.f_hi),
                           numerics::kDefaultIterationCap);
    std::vector<double> next(n, 0.0), cur(n, 0.0);
    for (std::size_t i = terms.k + 1; i-- > 0;) {
        std::size_t step = std::min(i, sched.steps - 1);
        for (std::size_t z = 0; z < n; ++z) {
            const auto& row = e.actions[z].at(sched.choice(step, z)).row;
            auto x = sched.chosen_rates(step, z);
            if (x.size() != row.size()) throw std::invalid_argument("scheduler rates do not match the row");
            double v = 0.0;
            for (std::size_t j = 0; j < row.size(); ++j) v += x[j] * next[row[j].block];
            cur[z] = v / e.lambda + terms.phi[i] * f[z] + terms.psi[i] * r[z] / e.lambda;
        }
        std::swap(cur, next);
    }
    return next;
}

namespace {

template <typename Solve>
ChainResult run_chain(std::span<const Phase> phases, double eps, Solve&& solve) {
    if (phases.empty()) throw std::invalid_argument("at least one phase is required");
    ChainResult out;
    const double phase_eps = eps / static_cast<double>(phases.size());
    for (std::size_t j = 0; j < phases.size(); ++j) {
        if (!(phases[j].delta >= 0.0)) throw std::invalid_argument("phase lengths must be >= 0");
        std::optional<std::span<const double>> final_override;
        if (j > 0) final_override = std::span<const double>(out.values.back());
        ValueResult r = solve(phases[j], phase_eps, final_override);
        out.ks.push_back(r.k);
        out.values.push_back(std::move(r.q));
        out.eps += phase_eps;
    }
    return out;
}

}  // namespace

ChainResult chain(const ctmdp::FiniteCtmdp& m, std::span<const Phase> phases, double eps, std::size_t iteration_cap) {
    return run_chain(phases, eps, [&](const Phase& ph, double e, std::optional<std::span<const double>> f) {
        Options opts;
        opts.iteration_cap = iteration_cap;
        opts.final_override = f;
        return value_ctmdp(m, ph.delta, e, ph.direction, opts);
    });
}

ChainResult chain(const abstraction::Ectmc& ec, const abstraction::AbstractRewards& rw, std::span<const Phase> phases,
                  double eps, std::size_t iteration_cap) {
    return run_chain(phases, eps, [&](const Phase& ph, double e, std::optional<std::span<const double>> f) {
        Options opts;
        opts.iteration_cap = iteration_cap;
        opts.final_override = f;
        return value_bounds(ec, rw, ph.delta, e, ph.direction, opts);
    });
}

}  // namespace symbound::vi
