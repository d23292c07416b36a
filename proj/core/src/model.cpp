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

#include "symbound/model.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace symbound::model {

std::uint64_t BitState::field(std::size_t offset, unsigned width) const {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i)
        if (get(offset + i)) v |= std::uint64_t{1} << i;
    return v;
}

void BitState::set_field(std::size_t offset, unsigned width, std::uint64_t value) {
    for (unsigned i = 0; i < width; ++i) set(offset + i, ((value >> i) & 1U) != 0);
}

std::size_t BitStateHash::operator()(const BitState& s) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ s.size();
    for (auto w : s.words()) {
        h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
        h ^= h >> 32;
    }
    return static_cast<std::size_t>(h);
}

unsigned VarDecl::bit_width() const {
    if (is_bool) return 1;
    auto span = static_cast<std::uint64_t>(hi - lo);
    if (span == 0) return 0;
    return static_cast<unsigned>(std::bit_width(span));
}

BitLayout::BitLayout(std::span<const VarDecl> vars) {
    for (const auto& v : vars) {
        offsets_.push_back(total_);
        widths_.push_back(v.bit_width());
        lows_.push_back(v.is_bool ? 0 : v.lo);
        total_ += v.bit_width();
    }
}

BitState BitLayout::encode(std::span<const std::int64_t> values) const {
    BitState s(total_);
    for (std::size_t i = 0; i < offsets_.size(); ++i)
        s.set_field(offsets_[i], widths_[i], static_cast<std::uint64_t>(values[i] - lows_[i]));
    return s;
}

void BitLayout::decode(const BitState& state, std::span<std::int64_t> values) const {
    for (std::size_t i = 0; i < offsets_.size(); ++i)
        values[i] = lows_[i] + static_cast<std::int64_t>(state.field(offsets_[i], widths_[i]));
}

std::vector<std::int64_t> BitLayout::decode(const BitState& state) const {
    std::vector<std::int64_t> values(offsets_.size());
    decode(state, values);
    return values;
}

GuardedModel::GuardedModel(std::vector<VarDecl> vars, std::vector<Command> commands,
                           std::vector<RewardItem> cumulative, std::vector<RewardItem> final_items, ExprPtr target,
                           Definitions definitions)
    : vars_(std::move(vars)),
      commands_(std::move(commands)),
      cumulative_(std::move(cumulative)),
      final_(std::move(final_items)),
      target_(std::move(target)),
      definitions_(std::move(definitions)),
      layout_(vars_) {
    for (const auto& v : vars_) {
        if (!v.is_bool && (v.init < v.lo || v.init > v.hi))
            throw std::invalid_argument("initial value of '" + v.name + "' is out of range");
        names_.push_back(v.name);
    }
    for (const auto& c : commands_) {
        if (!c.guard || c.guard->type() != Type::Bool)
            throw std::invalid_argument("guard of command '" + c.label + "' is not Boolean");
        if (!c.rate || c.rate->type() == Type::Bool)
            throw std::invalid_argument("rate of command '" + c.label + "' is not numeric");
    }
}

std::optional<std::size_t> GuardedModel::find_var(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return i;
    return std::nullopt;
}

std::vector<std::int64_t> GuardedModel::initial_values() const {
    std::vector<std::int64_t> values;
    values.reserve(vars_.size());
    for (const auto& v : vars_) values.push_back(v.init);
    return values;
}

namespace {
double sum_items(const std::vector<RewardItem>& items, std::span<const std::int64_t> values) {
    double total = 0.0;
    for (const auto& item : items)
        if (item.guard->holds(values)) total += item.value->evaluate(values);
    return total;
}
}  // namespace

double GuardedModel::cumulative_reward(std::span<const std::int64_t> values) const {
    return sum_items(cumulative_, values);
}

double GuardedModel::final_reward(std::span<const std::int64_t> values) const { return sum_items(final_, values); }

GuardedModel GuardedModel::with_rewards(std::vector<RewardItem> cumulative, std::vector<RewardItem> final_items) const {
    return GuardedModel(vars_, commands_, std::move(cumulative), std::move(final_items), target_, definitions_);
}

std::string GuardedModel::describe(std::span<const std::int64_t> values) const {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (i) out << ", ";
        out << vars_[i].name << "=";
        if (vars_[i].is_bool)
            out << (values[i] ? "true" : "false");
        else
            out << values[i];
    }
    out << ")";
    return out.str();
}

}  // namespace symbound::model
