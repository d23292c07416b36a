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
#include <map>
#include <string>
#include <string_view>

#include "symbound/model.hpp"

namespace symbound::model {

struct ParseOptions {
    /// Values for `const` declarations; they override any value in the text.
    std::map<std::string, double> constants;
};

/// Parses a flat guarded-command CTMC.
///
/// Grammar (one module, `ctmc` semantics):
///
///     model    := "ctmc" top*
///     top      := const | formula | module | rewards | target
///     const    := "const" ("int" | "double" | "bool")? ident ("=" expr)? ";"
///     formula  := "formula" ident "=" expr ";"
///     module   := "module" ident vardecl* command* "endmodule"
///     vardecl  := ident ":" ("bool" | "[" expr ".." expr "]") ("init" expr)? ";"
///     command  := "[" ident? "]" expr "->" branch ("+" branch)* ";"
///     branch   := expr ":" (update | "true")
///     update   := "(" ident "'" "=" expr ")" ("&" "(" ... ")")*
///     rewards  := "rewards" string? ("cumulative" | "final")? (expr ":" expr ";")* "endrewards"
///     target   := "target" expr ";"
///
/// A command with n branches becomes n commands labelled `label#0` ...
/// `label#(n-1)` sharing the guard. Throws ParseError (with line and column)
/// for syntax errors and static semantic errors.
GuardedModel parse_model(std::string_view text, const ParseOptions& options = {});
GuardedModel parse_model_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// Parses a standalone expression over the variables, constants and
/// formulas of `model`.
ExprPtr parse_expression(std::string_view text, const GuardedModel& model);

}  // namespace symbound::model
