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

#include <filesystem>
#include <iosfwd>

#include "symbound/abstraction.hpp"

namespace symbound::abstraction {

/// JSON dump of an abstraction (layout in docs/abstraction-format.md).
void write_abstraction(std::ostream& out, const Abstraction& a);
void write_abstraction_file(const std::filesystem::path& path, const Abstraction& a);

/// Throws Error on malformed input. Does not check feasibility.
Abstraction read_abstraction(std::istream& in);
Abstraction read_abstraction_file(const std::filesystem::path& path);

}  // namespace symbound::abstraction
