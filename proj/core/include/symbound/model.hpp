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

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symbound/expr.hpp"

namespace symbound::model {

/// Packed assignment to the model's encoded Boolean state variables.
class BitState {
   public:
    BitState() = default;
    explicit BitState(std::size_t bit_count) : words_((bit_count + 63) / 64, 0), bits_(bit_count) {}

    std::size_t size() const { return bits_; }
    bool get(std::size_t bit) const { return ((words_[bit / 64] >> (bit % 64)) & 1U) != 0; }
    void set(std::size_t bit, bool value) {
        auto mask = std::uint64_t{1} << (bit % 64);
        if (value)
            words_[bit / 64] |= mask;
        else
            words_[bit / 64] &= ~mask;
    }
    std::uint64_t field(std::size_t offset, unsigned width) const;
    void set_field(std::size_t offset, unsigned width, std::uint64_t value);
    std::span<const std::uint64_t> words() const { return words_; }

    auto operator<=>(const BitState&) const = default;
    bool operator==(const BitState&) const = default;

   private:
    std::vector<std::uint64_t> words_;
    std::size_t bits_ = 0;
};

struct BitStateHash {
    std::size_t operator()(const BitState& s) const noexcept;
};

struct VarDecl {
    std::string name;
    bool is_bool = false;
    std::int64_t lo = 0;
    std::int64_t hi = 1;
    std::int64_t init = 0;

    /// ceil(log2(hi - lo + 1)); Booleans take one bit.
    unsigned bit_width() const;
    Type type() const { return is_bool ? Type::Bool : Type::Int; }
};

struct Assignment {
    std::size_t var = 0;
    ExprPtr value;
};

/// One guarded command with a single deterministic successor branch.
struct Command {
    std::string label;
    ExprPtr guard;
    ExprPtr rate;
    std::vector<Assignment> updates;
};

/// `guard : value` entry of a reward block; the reward of a state is the
/// sum of the values of all entries whose guard holds.
struct RewardItem {
    ExprPtr guard;
    ExprPtr value;
};

struct Constant {
    std::string name;
    Type type = Type::Int;
    double value = 0.0;
};

struct Formula {
    std::string name;
    ExprPtr body;
};

/// Named constants and formulas visible to later expression parsing
/// (predicate files, command-line targets).
struct Definitions {
    std::vector<Constant> constants;
    std::vector<Formula> formulas;
};

/// Bit offsets of the declared variables: declaration order, offset binary
/// (value - lo), least-significant bit first.
class BitLayout {
   public:
    BitLayout() = default;
    explicit BitLayout(std::span<const VarDecl> vars);

    std::size_t bit_count() const { return total_; }
    std::size_t offset(std::size_t var) const { return offsets_[var]; }
    unsigned width(std::size_t var) const { return widths_[var]; }
    std::size_t var_count() const { return offsets_.size(); }

    BitState encode(std::span<const std::int64_t> values) const;
    void decode(const BitState& state, std::span<std::int64_t> values) const;
    std::vector<std::int64_t> decode(const BitState& state) const;

   private:
    std::vector<std::size_t> offsets_;
    std::vector<unsigned> widths_;
    std::vector<std::int64_t> lows_;
    std::size_t total_ = 0;
};

/// Flat single-module guarded-command CTMC with a reward structure.
/// Immutable after construction.
class GuardedModel {
   public:
    GuardedModel(std::vector<VarDecl> vars, std::vector<Command> commands, std::vector<RewardItem> cumulative,
                 std::vector<RewardItem> final_items, ExprPtr target = nullptr, Definitions definitions = {});

    const std::vector<VarDecl>& vars() const { return vars_; }
    const std::vector<Command>& commands() const { return commands_; }
    const std::vector<RewardItem>& cumulative_items() const { return cumulative_; }
    const std::vector<RewardItem>& final_items() const { return final_; }
    /// Null when the model declares no target predicate.
    const ExprPtr& target() const { return target_; }
    const BitLayout& layout() const { return layout_; }
    const Definitions& definitions() const { return definitions_; }
    const std::vector<std::string>& var_names() const { return names_; }

    std::optional<std::size_t> find_var(const std::string& name) const;
    std::vector<std::int64_t> initial_values() const;
    BitState initial_state() const { return layout_.encode(initial_values()); }

    double cumulative_reward(std::span<const std::int64_t> values) const;
    double final_reward(std::span<const std::int64_t> values) const;

    /// Same dynamics, different reward structure.
    GuardedModel with_rewards(std::vector<RewardItem> cumulative, std::vector<RewardItem> final_items) const;

    std::string describe(std::span<const std::int64_t> values) const;
    std::string describe(const BitState& state) const { return describe(layout_.decode(state)); }

   private:
    std::vector<VarDecl> vars_;
    std::vector<Command> commands_;
    std::vector<RewardItem> cumulative_;
    std::vector<RewardItem> final_;
    ExprPtr target_;
    Definitions definitions_;
    BitLayout layout_;
    std::vector<std::string> names_;
};

}  // namespace symbound::model
