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

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symbound::ctmdp {

struct CtmdpAction {
    std::string name;
    /// (successor, rate) sorted by successor; sums to the uniformisation rate.
    std::vector<std::pair<std::size_t, double>> rates;
};

/// Uniform CTMDP with finitely many actions per state.
struct FiniteCtmdp {
    std::size_t n = 0;
    double lambda = 1.0;
    std::vector<std::vector<CtmdpAction>> actions;
    std::vector<double> r;
    std::vector<double> f;
};

/// Text format:
///
///     n Lambda
///     state action successor rate     (one line per transition)
///     ...
///     rewards
///     state r f                        (missing states have zero rewards)
///
/// States are 0..n-1; `#` starts a comment. Rates of one (state, action)
/// add up; a row summing to less than Lambda gets the remainder as a
/// self-loop. Throws ParseError on malformed input, rows above Lambda and
/// states without actions.
FiniteCtmdp parse_ctmdp(std::string_view text);
FiniteCtmdp parse_ctmdp_file(const std::filesystem::path& path);

/// Checks the structural invariants; throws std::invalid_argument.
void validate(const FiniteCtmdp& m);

}  // namespace symbound::ctmdp
