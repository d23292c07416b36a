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

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "symbound/errors.hpp"
#include "symbound/explicit_engine.hpp"
#include "symbound/poisson.hpp"
#include "symbound/value_iteration.hpp"

namespace {

using namespace symbound;
using vi::Direction;

const char* kTwostate = R"(ctmc
module m
  x : [0..1] init 0;
  [a] x=0 -> 3 : (x'=1);
  [b] x=1 -> 1 : (x'=0);
endmodule
rewards cumulative x=1 : 1; endrewards
)";

const double kTwostateAt1 = 0.75 - 3.0 / 16.0 * (1.0 - std::exp(-4.0));

ctmdp::FiniteCtmdp fig1() { return ctmdp::parse_ctmdp_file(std::string(SYMBOUND_MODELS_DIR) + "/fig1.ctmdp"); }

TEST(RateRow, Examples) {
    std::vector<double> q = {1.0, 0.5, 0.0};
    std::vector<double> lo0 = {0, 0, 0}, hi10 = {10, 10, 10};
    auto a = vi::optimize_rate_row(lo0, hi10, q, 10.0, Direction::Max);
    EXPECT_EQ(a.x, (std::vector<double>{10, 0, 0}));
    EXPECT_DOUBLE_EQ(a.value, 1.0);

    std::vector<double> lo2 = {2, 2, 2}, hi6 = {6, 6, 6};
    auto b = vi::optimize_rate_row(lo2, hi6, q, 10.0, Direction::Max);
    EXPECT_EQ(b.x, (std::vector<double>{6, 2, 2}));
    EXPECT_DOUBLE_EQ(b.value, 0.7);
    EXPECT_DOUBLE_EQ(oracle::vertex_optimum(lo2, hi6, q, 10.0, true), 0.7);

    auto c = vi::optimize_rate_row(lo2, hi6, q, 10.0, Direction::Min);
    EXPECT_EQ(c.x, (std::vector<double>{2, 2, 6}));
    EXPECT_DOUBLE_EQ(c.value, 0.3);
    EXPECT_DOUBLE_EQ(oracle::vertex_optimum(lo2, hi6, q, 10.0, false), 0.3);
}

TEST(RateRow, TiesGoToLowerIndex) {
    std::vector<double> lo = {0, 0, 0}, hi = {5, 5, 5}, q = {0.5, 1.0, 1.0};
    auto r = vi::optimize_rate_row(lo, hi, q, 7.0, Direction::Max);
    EXPECT_EQ(r.x, (std::vector<double>{0, 5, 2}));
}

TEST(RateRow, Infeasible) {
    std::vector<double> q = {1, 1};
    std::vector<double> lo = {3, 3}, hi = {4, 4};
    EXPECT_THROW(vi::optimize_rate_row(lo, hi, q, 5.0, Direction::Max), InfeasibleAbstraction);
    std::vector<double> lo2 = {0, 0}, hi2 = {1, 1};
    EXPECT_THROW(vi::optimize_rate_row(lo2, hi2, q, 5.0, Direction::Max), InfeasibleAbstraction);
}

TEST(RateRow, MatchesVertexEnumeration) {
    oracle::Rng rng(71);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        std::size_t m = 1 + rng() % 5;
        double lambda = 1.0 + 9.0 * u(rng);
        std::vector<double> lo(m), hi(m), q(m);
        double sum_lo = 0;
        for (std::size_t j = 0; j < m; ++j) {
            lo[j] = u(rng) * lambda / static_cast<double>(m);
            hi[j] = lo[j] + u(rng) * lambda;
            q[j] = std::floor(u(rng) * 4.0) / 4.0;  // coarse values to exercise ties
            sum_lo += lo[j];
        }
        double sum_hi = 0;
        for (double h : hi) sum_hi += h;
        if (sum_hi < lambda) hi.back() += lambda - sum_hi;
        (void)sum_lo;
        for (auto dir : {Direction::Max, Direction::Min}) {
            auto r = vi::optimize_rate_row(lo, hi, q, lambda, dir);
            double sum = 0;
            for (std::size_t j = 0; j < m; ++j) {
                ASSERT_GE(r.x[j], lo[j] - 1e-12);
                ASSERT_LE(r.x[j], hi[j] + 1e-12);
                sum += r.x[j];
            }
            ASSERT_NEAR(sum, lambda, 1e-12 * lambda);
            ASSERT_NEAR(r.value, oracle::vertex_optimum(lo, hi, q, lambda, dir == Direction::Max), 1e-12);
        }
    }
}

TEST(ValueBounds, ConservationOfUnitFinalReward) {
    oracle::Rng rng(72);
    auto rig = oracle::make_rig(oracle::random_model_text(rng));
    auto a = oracle::abstract(rig, oracle::random_blocks(rng, rig.reach.states.size()));
    std::fill(a.rewards.r_lo.begin(), a.rewards.r_lo.end(), 0.0);
    std::fill(a.rewards.r_hi.begin(), a.rewards.r_hi.end(), 0.0);
    std::fill(a.rewards.f_lo.begin(), a.rewards.f_lo.end(), 1.0);
    std::fill(a.rewards.f_hi.begin(), a.rewards.f_hi.end(), 1.0);
    const double eps = 1e-6;
    for (auto dir : {Direction::Max, Direction::Min}) {
        auto r = vi::value_bounds(a.ectmc, a.rewards, 2.0, eps, dir);
        for (double q : r.q) EXPECT_NEAR(q, 1.0, eps);
    }
}

TEST(ValueBounds, TwostateSingletons) {
    auto rig = oracle::make_rig(kTwostate);
    auto a = oracle::abstract(rig, {0, 1});
    for (auto dir : {Direction::Max, Direction::Min}) {
        auto r = vi::value_bounds(a.ectmc, a.rewards, 1.0, 1e-6, dir);
        EXPECT_NEAR(r.q[a.ectmc.initial_block], kTwostateAt1, 2e-6);
        EXPECT_NEAR(r.q[a.ectmc.initial_block], 0.565934, 2e-6);
    }
}

// Backward iteration maximising over (action, vertex) pairs.
std::vector<double> brute_force_bounds(const abstraction::Ectmc& e, const abstraction::AbstractRewards& rw, double t,
                                       double eps, bool maximise) {
    double r_max = *std::max_element(rw.r_hi.begin(), rw.r_hi.end());
    double f_max = *std::max_element(rw.f_hi.begin(), rw.f_hi.end());
    auto terms = numerics::poisson_terms(e.lambda * t, eps, r_max, f_max, e.lambda);
    const auto& r = maximise ? rw.r_hi : rw.r_lo;
    const auto& f = maximise ? rw.f_hi : rw.f_lo;
    std::vector<double> next(e.n_blocks, 0.0), cur(e.n_blocks);
    for (std::size_t i = terms.k + 1; i-- > 0;) {
        for (std::size_t z = 0; z < e.n_blocks; ++z) {
            double best = maximise ? -1e300 : 1e300;
            for (const auto& act : e.actions[z]) {
                std::vector<double> lo, hi, q;
                for (const auto& entry : act.row) {
                    lo.push_back(entry.rate.lo);
                    hi.push_back(entry.rate.hi);
                    q.push_back(next[entry.block]);
                }
                double v = oracle::vertex_optimum(lo, hi, q, e.lambda, maximise);
                best = maximise ? std::max(best, v) : std::min(best, v);
            }
            cur[z] = best + terms.phi[i] * f[z] + terms.psi[i] * r[z] / e.lambda;
        }
        std::swap(cur, next);
    }
    return next;
}

TEST(ValueBounds, TwoLevelOptimality) {
    oracle::Rng rng(73);
    for (int i = 0; i < 30; ++i) {
        auto rig = oracle::make_rig(oracle::random_model_text(rng, {.max_commands = 4}));
        auto a = oracle::abstract(rig, oracle::random_blocks(rng, rig.reach.states.size()));
        for (bool maximise : {true, false}) {
            auto r = vi::value_bounds(a.ectmc, a.rewards, 0.7, 1e-6, maximise ? Direction::Max : Direction::Min);
            auto expected = brute_force_bounds(a.ectmc, a.rewards, 0.7, 1e-6, maximise);
            for (std::size_t z = 0; z < a.ectmc.n_blocks; ++z) ASSERT_NEAR(r.q[z], expected[z], 1e-10);
        }
    }
}

TEST(ValueBounds, UpperDominatesLower) {
    oracle::Rng rng(74);
    for (int i = 0; i < 30; ++i) {
        auto rig = oracle::make_rig(oracle::random_model_text(rng));
        auto a = oracle::abstract(rig, oracle::random_blocks(rng, rig.reach.states.size()));
        const double eps = 1e-6;
        auto hi = vi::value_bounds(a.ectmc, a.rewards, 1.3, eps, Direction::Max);
        auto lo = vi::value_bounds(a.ectmc, a.rewards, 1.3, eps, Direction::Min);
        for (std::size_t z = 0; z < a.ectmc.n_blocks; ++z) ASSERT_GE(hi.q[z], lo.q[z] - 2 * eps);
    }
}

TEST(ValueBounds, SchedulerRevaluation) {
    oracle::Rng rng(75);
    for (int i = 0; i < 20; ++i) {
        auto rig = oracle::make_rig(oracle::random_model_text(rng));
        auto a = oracle::abstract(rig, oracle::random_blocks(rng, rig.reach.states.size()));
        vi::Options opts;
        opts.record_scheduler = true;
        for (auto dir : {Direction::Max, Direction::Min}) {
            auto r = vi::value_bounds(a.ectmc, a.rewards, 1.0, 1e-6, dir, opts);
            ASSERT_TRUE(r.scheduler);
            auto again = vi::evaluate_scheduler(a.ectmc, a.rewards, dir, *r.scheduler, 1.0, 1e-6);
            for (std::size_t z = 0; z < a.ectmc.n_blocks; ++z) ASSERT_NEAR(again[z], r.q[z], 1e-12);
        }
    }
}

TEST(ValueBounds, RejectsInfeasibleRows) {
    auto rig = oracle::make_rig(kTwostate);
    auto a = oracle::abstract(rig, {0, 0});
    a.ectmc.actions[0][0].row[0].rate = {1.0, 2.0};
    EXPECT_THROW(vi::value_bounds(a.ectmc, a.rewards, 1.0, 1e-6, Direction::Max), InfeasibleAbstraction);
}

TEST(ValueCtmdp, Fig1) {
    auto m = fig1();
    vi::Options opts;
    opts.record_scheduler = true;
    auto r = vi::value_ctmdp(m, 4.0, 1e-5, Direction::Max, opts);
    EXPECT_NEAR(r.q[0], 0.659593, 2e-4);
    const auto& s = *r.scheduler;
    // beta (index 1) while much time is left, alpha near the end
    EXPECT_EQ(s.choice(0, 0), 1U);
    EXPECT_EQ(s.choice(s.steps - 1, 0), 0U);
    auto again = vi::evaluate_scheduler(m, s, 4.0, 1e-5);
    EXPECT_NEAR(again[0], r.q[0], 1e-12);
}

TEST(ValueCtmdp, PrecisionContract) {
    auto m = fig1();
    const double eps = 1e-4;
    auto coarse = vi::value_ctmdp(m, 4.0, eps, Direction::Max);
    auto fine = vi::value_ctmdp(m, 4.0, eps / 10, Direction::Max);
    for (std::size_t s = 0; s < m.n; ++s) EXPECT_LT(std::abs(coarse.q[s] - fine.q[s]), eps + eps / 10);
}

TEST(ValueCtmdp, SingleActionMatchesExplicit) {
    auto m = ctmdp::parse_ctmdp("2 3\n0 a 1 3\n1 b 0 1\nrewards\n1 1 0\n");
    for (auto dir : {Direction::Max, Direction::Min}) {
        vi::Options opts;
        opts.record_scheduler = true;
        auto r = vi::value_ctmdp(m, 1.0, 1e-6, dir, opts);
        EXPECT_NEAR(r.q[0], kTwostateAt1, 2e-6);
        for (auto a : r.scheduler->action) EXPECT_EQ(a, 0U);
        EXPECT_EQ(vi::evaluate_scheduler(m, *r.scheduler, 1.0, 1e-6), r.q);
    }
    auto rig = oracle::make_rig(kTwostate);
    auto c = explicit_engine::build_explicit(rig.sem, rig.reach);
    auto ex = explicit_engine::explicit_value(c, 1.0, 1e-6);
    EXPECT_NEAR(vi::value_ctmdp(m, 1.0, 1e-6, Direction::Max).q[0], ex.q[0], 2e-6);
}

TEST(ValueCtmdp, SmallModelsMatchSchedulerEnumeration) {
    oracle::Rng rng(76);
    int checked = 0;
    for (int attempt = 0; attempt < 200 && checked < 20; ++attempt) {
        auto m = oracle::random_ctmdp(rng, 3, 2, 2.0);
        const double t = 0.5, eps = 1e-2;
        for (auto dir : {Direction::Max, Direction::Min}) {
            auto r = vi::value_ctmdp(m, t, eps, dir);
            if (r.k > 12 || oracle::cd_scheduler_count(m, r.k, 1U << 20) > (1U << 20)) continue;
            auto best = oracle::enumerate_cd_optimum(m, t, r.k, dir == Direction::Max);
            for (std::size_t s = 0; s < m.n; ++s) ASSERT_NEAR(r.q[s], static_cast<double>(best[s]), 1e-12);
            ++checked;
        }
    }
    EXPECT_GE(checked, 20);
}

TEST(Chain, SinglePhaseEqualsSingleCall) {
    auto m = fig1();
    std::vector<vi::Phase> one = {{4.0, Direction::Max}};
    auto c = vi::chain(m, one, 1e-5);
    EXPECT_EQ(c.values[0], vi::value_ctmdp(m, 4.0, 1e-5, Direction::Max).q);

    auto rig = oracle::make_rig(kTwostate);
    auto a = oracle::abstract(rig, {0, 0});
    auto ca = vi::chain(a.ectmc, a.rewards, one, 1e-5);
    EXPECT_EQ(ca.values[0], vi::value_bounds(a.ectmc, a.rewards, 4.0, 1e-5, Direction::Max).q);
}

TEST(Chain, Fig1TwoPhases) {
    auto m = fig1();
    std::vector<vi::Phase> phases = {{3.0, Direction::Max}, {1.0, Direction::Max}};
    auto c = vi::chain(m, phases, 1e-5);
    ASSERT_EQ(c.values.size(), 2U);
    EXPECT_NEAR(c.values[1][0], 0.671162, 4e-4);
    EXPECT_GT(c.values[1][0], vi::value_ctmdp(m, 4.0, 1e-5, Direction::Max).q[0]);
    EXPECT_DOUBLE_EQ(c.eps, 1e-5);
}

TEST(Chain, TwostateHalves) {
    const double eps = 1e-6;
    std::vector<vi::Phase> halves = {{0.5, Direction::Max}, {0.5, Direction::Max}};
    auto m = ctmdp::parse_ctmdp("2 3\n0 a 1 3\n1 b 0 1\nrewards\n1 1 0\n");
    EXPECT_NEAR(vi::chain(m, halves, eps).values[1][0], kTwostateAt1, 2 * eps);

    auto rig = oracle::make_rig(kTwostate);
    auto a = oracle::abstract(rig, {0, 1});
    for (auto dir : {Direction::Max, Direction::Min}) {
        std::vector<vi::Phase> ph = {{0.5, dir}, {0.5, dir}};
        EXPECT_NEAR(vi::chain(a.ectmc, a.rewards, ph, eps).values[1][a.ectmc.initial_block], kTwostateAt1, 2 * eps);
    }
}

}  // namespace
