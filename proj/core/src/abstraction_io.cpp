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

#include "symbound/abstraction_io.hpp"

#include <array>
#include <fstream>
#include <nlohmann/json.hpp>

#include "symbound/errors.hpp"

namespace symbound::abstraction {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "symbound-abstraction";
constexpr int kVersion = 1;

}  // namespace

void write_abstraction(std::ostream& out, const Abstraction& a) {
    const auto& e = a.ectmc;
    json blocks = json::array();
    for (std::size_t z = 0; z < e.n_blocks; ++z) {
        json actions = json::array();
        for (const auto& action : e.actions[z]) {
            json sig = json::array();
            for (const auto& [cmd, block] : action.signature) sig.push_back({cmd, block});
            json row = json::array();
            for (const auto& entry : action.row) row.push_back({entry.block, entry.rate.lo, entry.rate.hi});
            actions.push_back({{"signature", sig}, {"row", row}});
        }
        blocks.push_back({{"r", {a.rewards.r_lo[z], a.rewards.r_hi[z]}},
                          {"f", {a.rewards.f_lo[z], a.rewards.f_hi[z]}},
                          {"actions", actions}});
    }
    json doc = {{"format", kFormat},
                {"version", kVersion},
                {"lambda", e.lambda},
                {"n_blocks", e.n_blocks},
                {"initial_block", e.initial_block},
                {"concrete_states", a.concrete_states},
                {"commands", e.command_labels},
                {"blocks", blocks}};
    out << doc.dump(1) << '\n';
}

void write_abstraction_file(const std::filesystem::path& path, const Abstraction& a) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    write_abstraction(out, a);
}

Abstraction read_abstraction(std::istream& in) {
    Abstraction a;
    try {
        json doc = json::parse(in);
        if (doc.at("format") != kFormat || doc.at("version") != kVersion)
            throw Error("not a version " + std::to_string(kVersion) + " abstraction dump");
        auto& e = a.ectmc;
        e.lambda = doc.at("lambda").get<double>();
        e.n_blocks = doc.at("n_blocks").get<std::size_t>();
        e.initial_block = doc.at("initial_block").get<std::size_t>();
        a.concrete_states = doc.value("concrete_states", std::size_t{0});
        e.command_labels = doc.at("commands").get<std::vector<std::string>>();
        const auto& blocks = doc.at("blocks");
        if (blocks.size() != e.n_blocks) throw Error("block list does not match n_blocks");
        if (e.initial_block >= e.n_blocks) throw Error("initial block out of range");
        for (const auto& b : blocks) {
            auto r = b.at("r").get<std::array<double, 2>>();
            auto f = b.at("f").get<std::array<double, 2>>();
            a.rewards.r_lo.push_back(r[0]);
            a.rewards.r_hi.push_back(r[1]);
            a.rewards.f_lo.push_back(f[0]);
            a.rewards.f_hi.push_back(f[1]);
            std::vector<AbstractAction> actions;
            for (const auto& act : b.at("actions")) {
                AbstractAction action;
                for (const auto& pair : act.at("signature"))
                    action.signature.emplace_back(pair.at(0).get<std::uint32_t>(), pair.at(1).get<std::uint64_t>());
                for (const auto& entry : act.at("row")) {
                    RowEntry re;
                    re.block = entry.at(0).get<std::uint64_t>();
                    re.rate.lo = entry.at(1).get<double>();
                    re.rate.hi = entry.at(2).get<double>();
                    if (re.block >= e.n_blocks) throw Error("row refers to block " + std::to_string(re.block));
                    action.row.push_back(re);
                }
                actions.push_back(std::move(action));
            }
            e.actions.push_back(std::move(actions));
        }
    } catch (const json::exception& ex) {
        throw Error(std::string("malformed abstraction dump: ") + ex.what());
    }
    return a;
}

Abstraction read_abstraction_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return read_abstraction(in);
}

}  // namespace symbound::abstraction
