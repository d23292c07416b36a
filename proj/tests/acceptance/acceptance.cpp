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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "symbound/explicit_engine.hpp"
#include "symbound/parser.hpp"
#include "symbound/poisson.hpp"
#include "symbound/value_iteration.hpp"

namespace {

using namespace symbound;
using vi::Direction;

const std::string kModels = SYMBOUND_MODELS_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

ctmdp::FiniteCtmdp fig1() { return ctmdp::parse_ctmdp_file(kModels + "/fig1.ctmdp"); }

Outcome fig1_max() {
    auto r = vi::value_ctmdp(fig1(), 4.0, 1e-5, Direction::Max);
    double v = r.q[0];
    return {std::abs(v - 0.659593) <= 2e-4, fmt("v(s0) = %.6f, expected 0.659593 +- 2e-4", v)};
}

Outcome fig1_two_phase() {
    auto m = fig1();
    double single = vi::value_ctmdp(m, 4.0, 1e-5, Direction::Max).q[0];
    std::vector<vi::Phase> phases = {{3.0, Direction::Max}, {1.0, Direction::Max}};
    double v = vi::chain(m, phases, 1e-5).values[1][0];
    return {std::abs(v - 0.671162) <= 4e-4 && v > single,
            fmt("v'(s0) = %.6f, expected 0.671162 +- 4e-4 and above %.6f", v, single)};
}

Outcome cluster_explicit() {
    model::ParseOptions opts;
    opts.constants["N"] = 32;
    auto m = std::make_shared<const model::GuardedModel>(model::parse_model_file(kModels + "/cluster.ctmc", opts));
    auto reach = model::reachable(*m);
    auto c = explicit_engine::build_explicit(model::uniformise(m, reach), reach);
    auto r = explicit_engine::explicit_value(c, 500.0, 1e-4);
    double v = r.q[0];
    return {std::abs(v - 64.176) <= 0.01,
            fmt("expected repairs %.5f over %zu states (k = %zu), expected 64.176 +- 0.01", v, c.n, r.k)};
}

// One random model with its explicit values.
struct Case {
    oracle::Rig rig;
    std::vector<double> exact;
    double t = 1.0;
};

Case random_case(oracle::Rng& rng, double eps) {
    Case c;
    c.rig = oracle::make_rig(oracle::random_model_text(rng));
    c.t = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
    auto chain = explicit_engine::build_explicit(c.rig.sem, c.rig.reach);
    c.exact = explicit_engine::explicit_value(chain, c.t, eps).q;
    return c;
}

Outcome soundness() {
    oracle::Rng rng(20260101);
    const double eps = 1e-6;
    std::size_t states = 0, violations = 0;
    std::string first;
    for (int i = 0; i < 200; ++i) {
        Case c = random_case(rng, eps);
        auto blocks = oracle::random_blocks(rng, c.rig.reach.states.size());
        auto a = oracle::abstract(c.rig, blocks);
        auto lo = vi::value_bounds(a.ectmc, a.rewards, c.t, eps, Direction::Min).q;
        auto hi = vi::value_bounds(a.ectmc, a.rewards, c.t, eps, Direction::Max).q;
        for (std::size_t s = 0; s < blocks.size(); ++s) {
            ++states;
            const std::size_t z = blocks[s];
            if (c.exact[s] < lo[z] - 2 * eps || c.exact[s] > hi[z] + 2 * eps) {
                if (violations++ == 0)
                    first = fmt(" first: model %d state %zu value %.9f bounds [%.9f, %.9f]", i, s, c.exact[s], lo[z],
                                hi[z]);
            }
        }
    }
    return {violations == 0, fmt("200 models, %zu states, %zu outside [lo - 2eps, hi + 2eps]", states, violations) + first};
}

Outcome monotonicity() {
    oracle::Rng rng(20260202);
    const double eps = 1e-6;
    std::size_t checks = 0, violations = 0, bad_chains = 0;
    double worst = 0.0;
    std::string first;
    for (int i = 0; i < 100; ++i) {
        Case c = random_case(rng, eps);
        const std::size_t n = c.rig.reach.states.size();
        // start coarse, at most four blocks, so the splits have room
        std::vector<std::vector<std::size_t>> chain(1, std::vector<std::size_t>(n));
        std::size_t coarse = 1 + rng() % std::min<std::size_t>(n, 4);
        for (std::size_t s = 0; s < n; ++s) chain[0][s] = s < coarse ? s : rng() % coarse;
        chain.push_back(oracle::random_split(rng, chain[0], 3));
        chain.push_back(oracle::random_split(rng, chain[1], 3));

        std::vector<std::vector<double>> lo, hi;
        for (const auto& blocks : chain) {
            auto a = oracle::abstract(c.rig, blocks);
            lo.push_back(vi::value_bounds(a.ectmc, a.rewards, c.t, eps, Direction::Min).q);
            hi.push_back(vi::value_bounds(a.ectmc, a.rewards, c.t, eps, Direction::Max).q);
        }
        bool chain_ok = true;
        for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
            for (std::size_t s = 0; s < n; ++s) {
                ++checks;
                double lo_c = lo[j][chain[j][s]], hi_c = hi[j][chain[j][s]];
                double lo_f = lo[j + 1][chain[j + 1][s]], hi_f = hi[j + 1][chain[j + 1][s]];
                double excess = std::max(lo_c - lo_f, hi_f - hi_c);
                if (excess > 2 * eps) {
                    chain_ok = false;
                    worst = std::max(worst, excess);
                    if (violations++ == 0)
                        first = fmt(" first: chain %d step %zu state %zu coarse [%.9f, %.9f] fine [%.9f, %.9f]", i,
                                    j, s, lo_c, hi_c, lo_f, hi_f);
                }
            }
        }
        if (!chain_ok) ++bad_chains;
    }
    return {violations == 0,
            fmt("100 chains, %zu state checks, %zu chains not nested (%zu checks, worst excess %.3g)", checks,
                bad_chains, violations, worst) +
                first};
}

Outcome singleton_exactness() {
    auto rig = oracle::make_rig(R"(ctmc
module m
  x : [0..1] init 0;
  [a] x=0 -> 3 : (x'=1);
  [b] x=1 -> 1 : (x'=0);
endmodule
rewards cumulative x=1 : 1; endrewards
)");
    const double eps = 1e-6;
    auto a = oracle::abstract(rig, {0, 1});
    double lo = vi::value_bounds(a.ectmc, a.rewards, 1.0, eps, Direction::Min).q[a.ectmc.initial_block];
    double hi = vi::value_bounds(a.ectmc, a.rewards, 1.0, eps, Direction::Max).q[a.ectmc.initial_block];
    double closed = 0.75 - 3.0 / 16.0 * (1.0 - std::exp(-4.0));
    double mid = (lo + hi) / 2;
    return {hi - lo <= 4 * eps && std::abs(mid - closed) <= 2 * eps,
            fmt("[%.9f, %.9f], width %.2g, midpoint off by %.2g (closed form %.6f)", lo, hi, hi - lo,
                std::abs(mid - closed), closed)};
}

Outcome poisson_suite() {
    double worst_tail = 0.0;
    for (double lt : {0.1, 1.0, 10.0, 100.0, 10000.0}) {
        auto p = numerics::poisson_terms(lt, 1e-8, 1.0, 1.0, 1.0);
        double sum = 0.0;
        for (double x : p.phi) sum += x;
        worst_tail = std::max(worst_tail, std::abs(sum + p.psi[p.k] - 1.0));
    }
    oracle::Rng rng(20260303);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int minimal = 0;
    std::string first;
    for (int i = 0; i < 100; ++i) {
        double lt = std::pow(10.0, -1.0 + 4.0 * u(rng));
        double eps = std::pow(10.0, -9.0 + 7.0 * u(rng));
        double r_max = u(rng) < 0.2 ? 0.0 : 4.0 * u(rng);
        double f_max = u(rng) < 0.2 ? 0.0 : 2.0 * u(rng);
        if (r_max == 0.0 && f_max == 0.0) r_max = 1.0;
        double Lambda = 0.5 + 20.0 * u(rng);
        auto p = numerics::poisson_terms(lt, eps, r_max, f_max, Lambda);
        auto holds = [&](std::size_t k) {
            long double mass = 0;
            for (std::size_t j = 0; j <= k; ++j) mass += oracle::poisson_tail(lt, j);
            bool cumulative = r_max == 0.0 || mass > lt - eps * Lambda / (2.0 * r_max);
            bool final = f_max == 0.0 || oracle::poisson_tail(lt, k) * f_max < eps / 2.0;
            return cumulative && final;
        };
        if (holds(p.k) && (p.k == 0 || !holds(p.k - 1)))
            ++minimal;
        else if (first.empty())
            first = fmt(" first miss: lambda_t %.6g eps %.3g r_max %.3g f_max %.3g k %zu", lt, eps, r_max, f_max, p.k);
    }
    return {worst_tail <= 1e-10 && minimal == 100,
            fmt("max |sum phi + psi(k) - 1| = %.2g, truncation minimal in %d/100 tuples", worst_tail, minimal) + first};
}

Outcome greedy_vs_exhaustive() {
    oracle::Rng rng(20260404);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        std::size_t m = 1 + rng() % 5;
        double lambda = 0.5 + 20.0 * u(rng);
        std::vector<double> lo(m), hi(m), q(m);
        for (std::size_t j = 0; j < m; ++j) {
            lo[j] = u(rng) < 0.3 ? 0.0 : u(rng) * lambda / static_cast<double>(m);
            hi[j] = lo[j] + u(rng) * lambda;
            q[j] = u(rng) < 0.3 ? std::floor(3.0 * u(rng)) : 5.0 * u(rng);
        }
        double sum_hi = 0.0;
        for (double h : hi) sum_hi += h;
        if (sum_hi < lambda) hi[rng() % m] += lambda - sum_hi;
        for (auto dir : {Direction::Max, Direction::Min}) {
            double greedy = vi::optimize_rate_row(lo, hi, q, lambda, dir).value;
            double exact = oracle::vertex_optimum(lo, hi, q, lambda, dir == Direction::Max);
            worst = std::max(worst, std::abs(greedy - exact));
        }
    }
    return {worst <= 1e-12, fmt("1000 rows x 2 directions, max deviation %.2g", worst)};
}

Outcome scheduler_consistency() {
    const double eps = 1e-5;
    double worst = 0.0;
    vi::Options opts;
    opts.record_scheduler = true;
    auto check = [&](const ctmdp::FiniteCtmdp& m, double t) {
        for (auto dir : {Direction::Max, Direction::Min}) {
            auto r = vi::value_ctmdp(m, t, eps, dir, opts);
            auto again = vi::evaluate_scheduler(m, *r.scheduler, t, eps);
            for (std::size_t s = 0; s < m.n; ++s) worst = std::max(worst, std::abs(again[s] - r.q[s]));
        }
    };
    check(fig1(), 4.0);

    oracle::Rng rng(20260505);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int enumerated = 0, enumeration_failures = 0;
    double worst_enum = 0.0;
    for (int i = 0; i < 50; ++i) {
        bool small = i < 25;
        std::size_t n = small ? 2 + rng() % 2 : 4 + rng() % 20;
        double lambda = 0.5 + 4.0 * u(rng);
        auto m = oracle::random_ctmdp(rng, n, small ? 2 : 3, lambda);
        double t = small ? 0.3 + 1.2 * u(rng) / lambda : 0.5 + 3.0 * u(rng);
        check(m, t);
        if (!small) continue;
        const double coarse = 1e-2;
        for (auto dir : {Direction::Max, Direction::Min}) {
            auto r = vi::value_ctmdp(m, t, coarse, dir);
            if (r.k > 12 || oracle::cd_scheduler_count(m, r.k, 1U << 22) > (1U << 22)) continue;
            auto best = oracle::enumerate_cd_optimum(m, t, r.k, dir == Direction::Max);
            ++enumerated;
            for (std::size_t s = 0; s < m.n; ++s) {
                double d = std::abs(static_cast<double>(best[s]) - r.q[s]);
                worst_enum = std::max(worst_enum, d);
                if (d > 2 * coarse) ++enumeration_failures;
            }
        }
    }
    return {worst <= 2 * eps && enumeration_failures == 0 && enumerated > 0,
            fmt("fig1 fixture + 50 CTMDPs: revaluation off by at most %.2g; %d runs enumerated exhaustively, "
                "max deviation %.2g",
                worst, enumerated, worst_enum)};
}

struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds, 0 for none
    std::function<Outcome()> run;
};

}  // namespace

// With no arguments every criterion runs; otherwise only the listed ids.
int main(int argc, char** argv) {
    std::vector<Criterion> criteria = {
        {1, "fig1-max", 1.0, fig1_max},
        {2, "fig1-two-phase", 1.0, fig1_two_phase},
        {3, "cluster-n32-explicit", 600.0, cluster_explicit},
        {4, "soundness", 120.0, soundness},
        {5, "monotonicity", 120.0, monotonicity},
        {6, "singleton-exactness", 1.0, singleton_exactness},
        {7, "poisson", 10.0, poisson_suite},
        {8, "greedy-vs-exhaustive", 10.0, greedy_vs_exhaustive},
        {9, "scheduler-consistency", 60.0, scheduler_consistency},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    auto wanted = [&](int id) { return selected.empty() || selected.count(id) > 0; };
    int failures = 0;
    for (const auto& c : criteria) {
        if (!wanted(c.id)) continue;
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = c.time_limit <= 0.0 || secs < c.time_limit;
        bool pass = o.pass && in_time;
        if (!pass) ++failures;
        std::printf("%s %2d %-22s %s; %.3f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs, c.time_limit, in_time ? "" : " TOO SLOW");
        std::fflush(stdout);
    }
    if (wanted(10))
        std::printf("PASS 10 %-22s declared exclusion, nothing measured: N >= 2048 runs, very large abstractions "
                "and wall-clock/memory figures; criteria 4 and 5 stand in for them\n",
                "excluded-rows");
    if (selected.empty()) std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
