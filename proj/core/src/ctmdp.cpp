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

#include "symbound/ctmdp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "symbound/errors.hpp"

namespace symbound::ctmdp {

namespace {

std::vector<std::string> fields(const std::string& line) {
    std::istringstream in(line.substr(0, line.find('#')));
    std::vector<std::string> out;
    for (std::string f; in >> f;) out.push_back(f);
    return out;
}

double to_double(const std::string& s, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) throw ParseError("expected a number, found '" + s + "'", line, 1);
    return v;
}

std::size_t to_index(const std::string& s, std::size_t n, std::size_t line) {
    double v = to_double(s, line);
    if (v < 0 || std::floor(v) != v || v >= static_cast<double>(n))
        throw ParseError("state '" + s + "' is not in 0.." + std::to_string(n - 1), line, 1);
    return static_cast<std::size_t>(v);
}

}  // namespace

FiniteCtmdp parse_ctmdp(std::string_view text) {
    std::istringstream in{std::string(text)};
    FiniteCtmdp m;
    bool have_header = false;
    bool in_rewards = false;
    // per state, action name -> (first line, successor -> rate); keeps file order of actions
    std::vector<std::vector<std::pair<std::string, std::map<std::size_t, double>>>> rows;
    std::vector<std::vector<std::size_t>> action_lines;
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        auto f = fields(line);
        if (f.empty()) continue;
        if (!have_header) {
            if (f.size() != 2) throw ParseError("expected header 'n Lambda'", line_no, 1);
            double n = to_double(f[0], line_no);
            if (n < 1 || std::floor(n) != n) throw ParseError("state count must be a positive integer", line_no, 1);
            m.n = static_cast<std::size_t>(n);
            m.lambda = to_double(f[1], line_no);
            if (!(m.lambda > 0.0)) throw ParseError("Lambda must be positive", line_no, 1);
            m.r.assign(m.n, 0.0);
            m.f.assign(m.n, 0.0);
            rows.resize(m.n);
            action_lines.resize(m.n);
            have_header = true;
            continue;
        }
        if (f.size() == 1 && f[0] == "rewards") {
            if (in_rewards) throw ParseError("duplicate rewards section", line_no, 1);
            in_rewards = true;
            continue;
        }
        if (in_rewards) {
            if (f.size() != 3) throw ParseError("expected 'state r f'", line_no, 1);
            std::size_t s = to_index(f[0], m.n, line_no);
            m.r[s] = to_double(f[1], line_no);
            m.f[s] = to_double(f[2], line_no);
            if (m.r[s] < 0.0 || m.f[s] < 0.0) throw ParseError("rewards must be non-negative", line_no, 1);
            continue;
        }
        if (f.size() != 4) throw ParseError("expected 'state action successor rate'", line_no, 1);
        std::size_t s = to_index(f[0], m.n, line_no);
        std::size_t dst = to_index(f[2], m.n, line_no);
        double rate = to_double(f[3], line_no);
        if (!(rate > 0.0)) throw ParseError("rates must be positive", line_no, 1);
        auto& acts = rows[s];
        auto it = std::find_if(acts.begin(), acts.end(), [&](const auto& a) { return a.first == f[1]; });
        if (it == acts.end()) {
            acts.emplace_back(f[1], std::map<std::size_t, double>{});
            action_lines[s].push_back(line_no);
            it = std::prev(acts.end());
        }
        it->second[dst] += rate;
    }
    if (!have_header) throw ParseError("empty CTMDP file", line_no, 1);

    m.actions.resize(m.n);
    for (std::size_t s = 0; s < m.n; ++s) {
        if (rows[s].empty()) throw ParseError("state " + std::to_string(s) + " has no actions", line_no, 1);
        for (std::size_t a = 0; a < rows[s].size(); ++a) {
            auto& [name, succ] = rows[s][a];
            double total = 0.0;
            for (const auto& [dst, rate] : succ) total += rate;
            if (total > m.lambda * (1.0 + 1e-9))
                throw ParseError("rates of action '" + name + "' sum to " + std::to_string(total) + " > Lambda",
                                 action_lines[s][a], 1);
            if (total < m.lambda) succ[s] += m.lambda - total;
            CtmdpAction action{name, {succ.begin(), succ.end()}};
            m.actions[s].push_back(std::move(action));
        }
    }
    return m;
}

FiniteCtmdp parse_ctmdp_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open CTMDP file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_ctmdp(buffer.str());
}

void validate(const FiniteCtmdp& m) {
    if (m.actions.size() != m.n || m.r.size() != m.n || m.f.size() != m.n)
        throw std::invalid_argument("CTMDP vectors do not match the state count");
    if (!(m.lambda > 0.0)) throw std::invalid_argument("Lambda must be positive");
    for (std::size_t s = 0; s < m.n; ++s) {
        if (m.actions[s].empty()) throw std::invalid_argument("state " + std::to_string(s) + " has no actions");
        if (!(m.r[s] >= 0.0) || !(m.f[s] >= 0.0)) throw std::invalid_argument("rewards must be non-negative");
        for (const auto& a : m.actions[s]) {
            double total = 0.0;
            for (const auto& [dst, rate] : a.rates) {
                if (dst >= m.n || !(rate >= 0.0)) throw std::invalid_argument("bad transition in state " + std::to_string(s));
                total += rate;
            }
            if (std::abs(total - m.lambda) > 1e-9 * m.lambda)
                throw std::invalid_argument("action '" + a.name + "' of state " + std::to_string(s) +
                                            " does not sum to Lambda");
        }
    }
}

}  // namespace symbound::ctmdp
