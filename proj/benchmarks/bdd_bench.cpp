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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "symbound/obdd.hpp"

using symbound::bdd::Bdd;
using symbound::bdd::Manager;
using symbound::bdd::VarId;

namespace {

// x == y over n-bit words, variables interleaved (x0 y0 x1 y1 ...).
void BM_EqualityChain(benchmark::State& state) {
    const auto n = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state) {
        Manager mgr(2 * n);
        Bdd eq = mgr.bdd_true();
        for (std::uint32_t i = 0; i < n; ++i) eq = eq & !(mgr.var(VarId{2 * i}) ^ mgr.var(VarId{2 * i + 1}));
        benchmark::DoNotOptimize(eq);
    }
}
BENCHMARK(BM_EqualityChain)->Arg(16)->Arg(64)->Arg(256);

// Conjunction of random 3-clauses; a fresh manager each round keeps the
// caches cold.
void BM_RandomClauses(benchmark::State& state) {
    const std::uint32_t vars = 40;
    const auto clauses = static_cast<int>(state.range(0));
    for (auto _ : state) {
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<std::uint32_t> pick_var(0, vars - 1);
        Manager mgr(vars);
        Bdd f = mgr.bdd_true();
        for (int c = 0; c < clauses; ++c) {
            Bdd clause = mgr.bdd_false();
            for (int l = 0; l < 3; ++l) {
                VarId v{pick_var(rng)};
                clause = clause | ((rng() & 1U) ? mgr.var(v) : mgr.nvar(v));
            }
            f = f & clause;
        }
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_RandomClauses)->Arg(30)->Arg(60);

void BM_AndExists(benchmark::State& state) {
    const std::uint32_t n = 32;
    Manager mgr(2 * n);
    // f relates x and y by y = x + 1 (mod 2^n) on interleaved bits
    Bdd carry = mgr.bdd_true();
    Bdd rel = mgr.bdd_true();
    for (std::uint32_t i = 0; i < n; ++i) {
        Bdd x = mgr.var(VarId{2 * i});
        Bdd y = mgr.var(VarId{2 * i + 1});
        rel = rel & !(y ^ (x ^ carry));
        carry = x & carry;
    }
    std::vector<VarId> xs;
    for (std::uint32_t i = 0; i < n; ++i) xs.push_back(VarId{2 * i});
    Bdd low = mgr.bdd_true();
    for (std::uint32_t i = n / 2; i < n; ++i) low = low & mgr.nvar(VarId{2 * i});
    for (auto _ : state) {
        Bdd image = mgr.and_exists(rel, low, xs);
        benchmark::DoNotOptimize(image);
    }
}
BENCHMARK(BM_AndExists);

}  // namespace
