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

#include "symbound/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "symbound/errors.hpp"

namespace symbound::model {

namespace {

bool is_numeric(Type t) { return t == Type::Int || t == Type::Real; }

Type infer(Op op, const std::vector<ExprPtr>& args) {
    auto need = [&](std::size_t n) {
        if (args.size() != n) throw std::invalid_argument("wrong number of operands");
    };
    switch (op) {
        case Op::Neg:
            need(1);
            if (!is_numeric(args[0]->type())) throw std::invalid_argument("unary minus needs a numeric operand");
            return args[0]->type();
        case Op::Not:
            need(1);
            if (args[0]->type() != Type::Bool) throw std::invalid_argument("'!' needs a Boolean operand");
            return Type::Bool;
        case Op::Floor:
        case Op::Ceil:
            need(1);
            if (!is_numeric(args[0]->type())) throw std::invalid_argument("floor/ceil need a numeric operand");
            return Type::Int;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Min:
        case Op::Max:
            need(2);
            if (!is_numeric(args[0]->type()) || !is_numeric(args[1]->type()))
                throw std::invalid_argument("arithmetic needs numeric operands");
            return args[0]->type() == Type::Int && args[1]->type() == Type::Int ? Type::Int : Type::Real;
        case Op::Div:
            need(2);
            if (!is_numeric(args[0]->type()) || !is_numeric(args[1]->type()))
                throw std::invalid_argument("division needs numeric operands");
            return Type::Real;
        case Op::Eq:
        case Op::Ne:
            need(2);
            if ((args[0]->type() == Type::Bool) != (args[1]->type() == Type::Bool))
                throw std::invalid_argument("cannot compare a Boolean with a number");
            return Type::Bool;
        case Op::Lt:
        case Op::Le:
        case Op::Gt:
        case Op::Ge:
            need(2);
            if (!is_numeric(args[0]->type()) || !is_numeric(args[1]->type()))
                throw std::invalid_argument("ordering comparison needs numeric operands");
            return Type::Bool;
        case Op::And:
        case Op::Or:
        case Op::Implies:
            need(2);
            if (args[0]->type() != Type::Bool || args[1]->type() != Type::Bool)
                throw std::invalid_argument("logical operator needs Boolean operands");
            return Type::Bool;
        case Op::Ite:
            need(3);
            if (args[0]->type() != Type::Bool) throw std::invalid_argument("condition must be Boolean");
            if (args[1]->type() == Type::Bool && args[2]->type() == Type::Bool) return Type::Bool;
            if (is_numeric(args[1]->type()) && is_numeric(args[2]->type()))
                return args[1]->type() == Type::Int && args[2]->type() == Type::Int ? Type::Int : Type::Real;
            throw std::invalid_argument("branches of a conditional must have compatible types");
        case Op::Literal:
        case Op::Var:
            break;
    }
    throw std::invalid_argument("not an operator");
}

const char* op_symbol(Op op) {
    switch (op) {
        case Op::Add: return "+";
        case Op::Sub: return "-";
        case Op::Mul: return "*";
        case Op::Div: return "/";
        case Op::Eq: return "=";
        case Op::Ne: return "!=";
        case Op::Lt: return "<";
        case Op::Le: return "<=";
        case Op::Gt: return ">";
        case Op::Ge: return ">=";
        case Op::And: return "&";
        case Op::Or: return "|";
        case Op::Implies: return "=>";
        default: return "?";
    }
}

}  // namespace

const char* to_string(Type t) {
    switch (t) {
        case Type::Bool: return "bool";
        case Type::Int: return "int";
        case Type::Real: return "double";
    }
    return "?";
}

ExprPtr Expr::literal(double value, Type type) {
    if (type == Type::Bool) value = value != 0.0 ? 1.0 : 0.0;
    return std::make_shared<const Expr>(Op::Literal, type, value, 0, std::vector<ExprPtr>{});
}

ExprPtr Expr::variable(std::size_t index, Type type) {
    if (type == Type::Real) throw std::invalid_argument("state variables are Boolean or integer");
    return std::make_shared<const Expr>(Op::Var, type, 0.0, index, std::vector<ExprPtr>{});
}

ExprPtr Expr::make(Op op, std::vector<ExprPtr> args) {
    Type type = infer(op, args);
    bool all_literal = std::all_of(args.begin(), args.end(), [](const ExprPtr& a) { return a->is_literal(); });
    auto node = std::make_shared<const Expr>(op, type, 0.0, 0, std::move(args));
    if (all_literal) return literal(node->evaluate({}), type);
    return node;
}

double Expr::evaluate(std::span<const std::int64_t> values) const {
    auto a = [&](std::size_t i) { return args_[i]->evaluate(values); };
    switch (op_) {
        case Op::Literal: return value_;
        case Op::Var: return static_cast<double>(values[var_]);
        case Op::Neg: return -a(0);
        case Op::Not: return a(0) != 0.0 ? 0.0 : 1.0;
        case Op::Floor: return std::floor(a(0));
        case Op::Ceil: return std::ceil(a(0));
        case Op::Add: return a(0) + a(1);
        case Op::Sub: return a(0) - a(1);
        case Op::Mul: return a(0) * a(1);
        case Op::Div: {
            double d = a(1);
            if (d == 0.0) throw SemanticError("division by zero");
            return a(0) / d;
        }
        case Op::Min: return std::min(a(0), a(1));
        case Op::Max: return std::max(a(0), a(1));
        case Op::Eq: return a(0) == a(1) ? 1.0 : 0.0;
        case Op::Ne: return a(0) != a(1) ? 1.0 : 0.0;
        case Op::Lt: return a(0) < a(1) ? 1.0 : 0.0;
        case Op::Le: return a(0) <= a(1) ? 1.0 : 0.0;
        case Op::Gt: return a(0) > a(1) ? 1.0 : 0.0;
        case Op::Ge: return a(0) >= a(1) ? 1.0 : 0.0;
        case Op::And: return a(0) != 0.0 && a(1) != 0.0 ? 1.0 : 0.0;
        case Op::Or: return a(0) != 0.0 || a(1) != 0.0 ? 1.0 : 0.0;
        case Op::Implies: return a(0) == 0.0 || a(1) != 0.0 ? 1.0 : 0.0;
        case Op::Ite: return a(0) != 0.0 ? a(1) : a(2);
    }
    return 0.0;
}

void Expr::collect_vars(std::vector<std::size_t>& out) const {
    if (op_ == Op::Var) out.push_back(var_);
    for (const auto& arg : args_) arg->collect_vars(out);
}

std::vector<std::size_t> Expr::support() const {
    std::vector<std::size_t> out;
    collect_vars(out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string Expr::to_string(std::span<const std::string> var_names) const {
    std::ostringstream out;
    switch (op_) {
        case Op::Literal:
            if (type_ == Type::Bool)
                out << (value_ != 0.0 ? "true" : "false");
            else
                out << value_;
            break;
        case Op::Var:
            out << (var_ < var_names.size() ? var_names[var_] : "v" + std::to_string(var_));
            break;
        case Op::Neg: out << "-(" << args_[0]->to_string(var_names) << ")"; break;
        case Op::Not: out << "!(" << args_[0]->to_string(var_names) << ")"; break;
        case Op::Floor: out << "floor(" << args_[0]->to_string(var_names) << ")"; break;
        case Op::Ceil: out << "ceil(" << args_[0]->to_string(var_names) << ")"; break;
        case Op::Min:
        case Op::Max:
            out << (op_ == Op::Min ? "min(" : "max(") << args_[0]->to_string(var_names) << ", "
                << args_[1]->to_string(var_names) << ")";
            break;
        case Op::Ite:
            out << "(" << args_[0]->to_string(var_names) << " ? " << args_[1]->to_string(var_names) << " : "
                << args_[2]->to_string(var_names) << ")";
            break;
        default:
            out << "(" << args_[0]->to_string(var_names) << " " << op_symbol(op_) << " "
                << args_[1]->to_string(var_names) << ")";
    }
    return out.str();
}

}  // namespace symbound::model
