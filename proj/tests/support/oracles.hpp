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

// Reference implementations used by the tests. Everything here is written
// against the plain definitions (truth tables, the backward Kolmogorov
// equation, Poisson pmfs via lgamma, vertex enumeration) and shares no code
// with the library beyond the parsed model.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symbound/abstraction.hpp"
#include "symbound/ctmdp.hpp"
#include "symbound/model.hpp"
#include "symbound/obdd.hpp"
#include "symbound/partition.hpp"
#include "symbound/semantics.hpp"
#include "symbound/symbolic.hpp"

namespace symbound::oracle {

using Rng = std::mt19937_64;

// --- models ---------------------------------------------------------------

struct RandomModelOptions {
    unsigned max_commands = 6;
    std::size_t max_states = 64;
    bool final_reward = true;
};

/// Text of a random guarded-command CTMC: two bounded integers and an
/// optional Boolean, up to `max_commands` commands with state-dependent
/// rates, cumulative and final rewards. The full variable space never
/// exceeds `max_states`.
std::string random_model_text(Rng& rng, const RandomModelOptions& opts = {});

/// Reachable part of a model computed straight from the expressions.
struct DenseChain {
    std::vector<std::vector<std::int64_t>> states;  // BFS order, states[0] initial
    std::vector<std::vector<std::pair<std::size_t, long double>>> rates;  // off-diagonal, merged
    std::vector<long double> r, f;
    long double max_exit = 0;
};

DenseChain dense_chain(const model::GuardedModel& m);

/// V(t) from dV/dt = r + Q V, V(0) = f, by classical Runge-Kutta with
/// `steps_per_unit_rate` steps per unit of max_exit * t (at least 1000 steps).
std::vector<long double> kolmogorov_value(const DenseChain& c, double t, double steps_per_unit_rate = 40.0);

// --- Poisson --------------------------------------------------------------

long double poisson_pmf(long double lambda_t, std::size_t i);
/// P(N > i) by direct summation of the upper tail.
long double poisson_tail(long double lambda_t, std::size_t i);

// --- rate rows ------------------------------------------------------------

/// Optimum of sum x_i q_i / lambda over the vertices of
/// {lo <= x <= hi, sum x = lambda}. NaN when no vertex is feasible.
double vertex_optimum(const std::vector<double>& lo, const std::vector<double>& hi, const std::vector<double>& q,
                      double lambda, bool maximise);

// --- CTMDPs ---------------------------------------------------------------

ctmdp::FiniteCtmdp random_ctmdp(Rng& rng, std::size_t n, std::size_t max_actions, double lambda);

/// Best truncated value at step `k` over every counting deterministic
/// scheduler, by enumeration. Uses direct Poisson weights of lambda * t.
std::vector<long double> enumerate_cd_optimum(const ctmdp::FiniteCtmdp& m, double t, std::size_t k, bool maximise);

/// Number of CD schedulers for k + 1 decision steps, saturating at `limit`.
std::uint64_t cd_scheduler_count(const ctmdp::FiniteCtmdp& m, std::size_t k, std::uint64_t limit);

// --- abstraction rig ------------------------------------------------------

/// Everything needed to abstract one model under a given assignment of
/// its reachable states to blocks.
struct Rig {
    std::shared_ptr<const model::GuardedModel> model;
    model::ReachResult reach;
    model::UniformisedSemantics sem;
    std::unique_ptr<bdd::Manager> mgr;
    symbolic::SymbolicLayout layout;
};

Rig make_rig(const std::string& text, std::optional<double> lambda = std::nullopt);

partition::Partition assign(Rig& rig, const std::vector<std::size_t>& block_of);
abstraction::Abstraction abstract(Rig& rig, const std::vector<std::size_t>& block_of);

/// Random surjection of n states onto 1..n blocks, ids contiguous.
std::vector<std::size_t> random_blocks(Rng& rng, std::size_t n);
/// Splits every block at random into up to `ways` parts.
std::vector<std::size_t> random_split(Rng& rng, const std::vector<std::size_t>& block_of, std::size_t ways);

/// Abstraction computed directly from the explicit states, for comparison
/// with the symbolic sweep. A non-empty `include` restricts the states that
/// contribute (a partial abstraction as produced by one sweep worker).
abstraction::Abstraction brute_force_abstraction(const Rig& rig, const std::vector<std::size_t>& block_of,
                                                 const std::vector<bool>& include = {});

}  // namespace symbound::oracle
