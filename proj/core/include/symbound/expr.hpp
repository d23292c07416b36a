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

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace symbound::model {

enum class Type : std::uint8_t { Bool, Int, Real };

enum class Op : std::uint8_t {
    Literal,
    Var,
    Neg,
    Not,
    Add,
    Sub,
    Mul,
    Div,
    Min,
    Max,
    Floor,
    Ceil,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Implies,
    Ite,
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. Variables are referenced by declaration
/// index; evaluation takes the decoded values of all model variables
/// (Booleans as 0/1).
class Expr {
   public:
    static ExprPtr literal(double value, Type type);
    static ExprPtr boolean(bool value) { return literal(value ? 1.0 : 0.0, Type::Bool); }
    static ExprPtr variable(std::size_t index, Type type);
    /// Builds an operator node, inferring its type. Folds constant operands.
    /// Throws std::invalid_argument on ill-typed operands.
    static ExprPtr make(Op op, std::vector<ExprPtr> args);

    Op op() const { return op_; }
    Type type() const { return type_; }
    double value() const { return value_; }
    std::size_t var_index() const { return var_; }
    const std::vector<ExprPtr>& args() const { return args_; }
    bool is_literal() const { return op_ == Op::Literal; }

    /// Throws SemanticError on division by zero.
    double evaluate(std::span<const std::int64_t> values) const;
    bool holds(std::span<const std::int64_t> values) const { return evaluate(values) != 0.0; }

    /// Appends the indices of referenced variables (may repeat).
    void collect_vars(std::vector<std::size_t>& out) const;
    std::vector<std::size_t> support() const;

    std::string to_string(std::span<const std::string> var_names) const;

    Expr(Op op, Type type, double value, std::size_t var, std::vector<ExprPtr> args)
        : op_(op), type_(type), value_(value), var_(var), args_(std::move(args)) {}

   private:
    Op op_;
    Type type_;
    double value_;
    std::size_t var_;
    std::vector<ExprPtr> args_;
};

const char* to_string(Type t);

}  // namespace symbound::model
