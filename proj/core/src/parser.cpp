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

#include "symbound/parser.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lexer.hpp"
#include "symbound/errors.hpp"

namespace symbound::model {

namespace {

using detail::Token;
using detail::TokenKind;

const std::set<std::string, std::less<>> kKeywords = {
    "ctmc",  "module", "endmodule", "rewards", "endrewards", "const", "formula", "int",   "double", "bool",
    "init",  "true",   "false",     "target",  "cumulative", "final", "min",     "max",   "floor",  "ceil"};

class Parser {
   public:
    Parser(std::vector<Token> tokens, const ParseOptions& options) : tokens_(std::move(tokens)), options_(options) {}

    GuardedModel parse_model() {
        expect_keyword("ctmc");
        bool have_module = false;
        const Token* module_end = nullptr;
        while (peek().kind != TokenKind::End) {
            const Token& t = peek();
            if (is_keyword(t, "const")) {
                parse_const();
            } else if (is_keyword(t, "formula")) {
                parse_formula();
            } else if (is_keyword(t, "module")) {
                if (have_module) fail(t, "only a single module is supported");
                have_module = true;
                module_end = &parse_module();
            } else if (is_keyword(t, "rewards")) {
                parse_rewards();
            } else if (is_keyword(t, "target")) {
                next();
                if (target_) fail(t, "duplicate target declaration");
                const Token& at = peek();
                target_ = parse_expr();
                if (target_->type() != Type::Bool) fail(at, "target predicate is not Boolean");
                expect_symbol(";");
            } else {
                fail(t, "expected 'const', 'formula', 'module', 'rewards' or 'target'");
            }
        }
        if (!have_module) fail(peek(), "model has no module");
        if (commands_.empty()) fail(*module_end, "model has no commands");
        for (const auto& [name, entry] : consts_) resolve_const(name);
        for (const auto& [name, value] : options_.constants)
            if (!consts_.count(name)) throw ParseError("unknown constant '" + name + "' given as override", 1, 1);

        Definitions defs;
        for (const auto& [name, entry] : consts_) defs.constants.push_back(*entry.value);
        for (auto& [name, entry] : formulas_) {
            if (!entry.body) entry.body = resolve_formula(name, tokens_[entry.pos]);
            defs.formulas.push_back({name, entry.body});
        }
        try {
            return GuardedModel(vars_, commands_, cumulative_, final_, target_, std::move(defs));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), 1, 1);
        }
    }

    ExprPtr parse_standalone(const GuardedModel& model) {
        vars_ = model.vars();
        for (std::size_t i = 0; i < vars_.size(); ++i) var_index_[vars_[i].name] = i;
        for (const auto& c : model.definitions().constants) {
            ConstEntry e;
            e.value = c;
            consts_.emplace(c.name, e);
        }
        for (const auto& f : model.definitions().formulas) {
            FormulaEntry e;
            e.body = f.body;
            formulas_.emplace(f.name, e);
        }
        in_module_scope_ = true;
        auto e = parse_expr();
        if (peek().kind != TokenKind::End) fail(peek(), "unexpected trailing input");
        return e;
    }

   private:
    struct ConstEntry {
        std::optional<Type> declared;
        std::size_t pos = 0;
        bool has_expr = false;
        bool resolving = false;
        std::optional<Constant> value;
        std::size_t decl_pos = 0;
    };
    struct FormulaEntry {
        std::size_t pos = 0;
        bool resolving = false;
        ExprPtr body;
    };

    [[noreturn]] void fail(const Token& t, const std::string& message) const {
        throw ParseError(message, t.line, t.column);
    }

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    static bool is_symbol(const Token& t, std::string_view s) { return t.kind == TokenKind::Symbol && t.text == s; }
    static bool is_keyword(const Token& t, std::string_view s) {
        return t.kind == TokenKind::Identifier && t.text == s;
    }
    void expect_symbol(std::string_view s) {
        if (!is_symbol(peek(), s)) fail(peek(), "expected '" + std::string(s) + "'" + found());
        next();
    }
    void expect_keyword(std::string_view s) {
        if (!is_keyword(peek(), s)) fail(peek(), "expected '" + std::string(s) + "'" + found());
        next();
    }
    std::string found() const {
        const Token& t = peek();
        if (t.kind == TokenKind::End) return " but reached end of input";
        return " but found '" + t.text + "'";
    }
    const Token& expect_identifier() {
        const Token& t = peek();
        if (t.kind != TokenKind::Identifier) fail(t, "expected an identifier" + found());
        if (kKeywords.count(t.text)) fail(t, "'" + t.text + "' is a reserved word");
        return next();
    }
    void skip_to_semicolon() {
        int depth = 0;
        while (peek().kind != TokenKind::End) {
            const Token& t = peek();
            if (is_symbol(t, "(")) ++depth;
            if (is_symbol(t, ")")) --depth;
            if (depth == 0 && is_symbol(t, ";")) return;
            next();
        }
        fail(peek(), "expected ';'" + found());
    }
    void check_fresh_name(const Token& t) const {
        if (consts_.count(t.text) || formulas_.count(t.text) || var_index_.count(t.text))
            fail(t, "'" + t.text + "' is already defined");
    }

    // --- declarations -----------------------------------------------------

    void parse_const() {
        next();
        ConstEntry entry;
        if (is_keyword(peek(), "int")) {
            entry.declared = Type::Int;
            next();
        } else if (is_keyword(peek(), "double")) {
            entry.declared = Type::Real;
            next();
        } else if (is_keyword(peek(), "bool")) {
            entry.declared = Type::Bool;
            next();
        }
        entry.decl_pos = pos_;
        const Token& name = expect_identifier();
        check_fresh_name(name);
        if (is_symbol(peek(), "=")) {
            next();
            entry.has_expr = true;
            entry.pos = pos_;
            skip_to_semicolon();
        }
        expect_symbol(";");
        consts_.emplace(name.text, entry);
    }

    void parse_formula() {
        next();
        const Token& name = expect_identifier();
        check_fresh_name(name);
        expect_symbol("=");
        FormulaEntry entry;
        entry.pos = pos_;
        skip_to_semicolon();
        expect_symbol(";");
        formulas_.emplace(name.text, entry);
    }

    const Constant& resolve_const(const std::string& name) {
        auto& entry = consts_.at(name);
        if (entry.value) return *entry.value;
        const Token& decl = tokens_[entry.decl_pos];
        if (entry.resolving) fail(decl, "constant '" + name + "' is defined in terms of itself");
        Constant c;
        c.name = name;
        auto override_it = options_.constants.find(name);
        if (override_it != options_.constants.end()) {
            c.type = entry.declared.value_or(std::floor(override_it->second) == override_it->second ? Type::Int
                                                                                                    : Type::Real);
            c.value = override_it->second;
        } else if (entry.has_expr) {
            entry.resolving = true;
            std::size_t saved = pos_;
            bool saved_scope = in_module_scope_;
            in_module_scope_ = false;
            pos_ = entry.pos;
            const Token& at = peek();
            ExprPtr e = parse_expr();
            if (!is_symbol(peek(), ";")) fail(peek(), "expected ';'" + found());
            pos_ = saved;
            in_module_scope_ = saved_scope;
            entry.resolving = false;
            if (!e->is_literal()) fail(at, "value of constant '" + name + "' is not a constant expression");
            c.type = entry.declared.value_or(e->type());
            c.value = e->value();
            if (c.type == Type::Bool && e->type() != Type::Bool) fail(at, "constant '" + name + "' must be Boolean");
            if (c.type != Type::Bool && e->type() == Type::Bool) fail(at, "constant '" + name + "' must be numeric");
        } else {
            fail(decl, "constant '" + name + "' has no value (pass one with --const " + name + "=...)");
        }
        if (c.type == Type::Int && std::floor(c.value) != c.value)
            fail(decl, "integer constant '" + name + "' has a non-integral value");
        entry.value = c;
        return *entry.value;
    }

    ExprPtr resolve_formula(const std::string& name, const Token& use) {
        auto& entry = formulas_.at(name);
        if (entry.body) return entry.body;
        if (entry.resolving) fail(use, "formula '" + name + "' is defined in terms of itself");
        entry.resolving = true;
        std::size_t saved = pos_;
        pos_ = entry.pos;
        ExprPtr e = parse_expr();
        if (!is_symbol(peek(), ";")) fail(peek(), "expected ';'" + found());
        pos_ = saved;
        entry.resolving = false;
        entry.body = e;
        return e;
    }

    std::int64_t constant_int(const Token& at, const ExprPtr& e, const std::string& what) {
        if (!e->is_literal() || e->type() == Type::Bool) fail(at, what + " must be a constant integer");
        if (std::floor(e->value()) != e->value()) fail(at, what + " must be integral");
        return static_cast<std::int64_t>(e->value());
    }

    const Token& parse_module() {
        next();
        expect_identifier();
        in_module_scope_ = true;
        while (true) {
            const Token& t = peek();
            if (is_keyword(t, "endmodule")) {
                next();
                return t;
            }
            if (t.kind == TokenKind::End) fail(t, "expected 'endmodule' but reached end of input");
            if (t.kind == TokenKind::Identifier && is_symbol(peek(1), ":")) {
                if (!commands_.empty()) fail(t, "variable declarations must precede commands");
                parse_vardecl();
            } else if (is_symbol(t, "[")) {
                parse_command();
            } else {
                fail(t, "expected a variable declaration, a command or 'endmodule'");
            }
        }
    }

    void parse_vardecl() {
        const Token& name = expect_identifier();
        check_fresh_name(name);
        expect_symbol(":");
        VarDecl v;
        v.name = name.text;
        if (is_keyword(peek(), "bool")) {
            next();
            v.is_bool = true;
            v.lo = 0;
            v.hi = 1;
        } else {
            expect_symbol("[");
            const Token& lo_tok = peek();
            v.lo = constant_int(lo_tok, parse_expr(), "lower bound");
            expect_symbol("..");
            const Token& hi_tok = peek();
            v.hi = constant_int(hi_tok, parse_expr(), "upper bound");
            expect_symbol("]");
            if (v.lo > v.hi) fail(lo_tok, "empty range for variable '" + v.name + "'");
            if (v.hi - v.lo > (std::int64_t{1} << 40)) fail(lo_tok, "range of '" + v.name + "' is too large");
        }
        v.init = v.lo;
        if (is_keyword(peek(), "init")) {
            next();
            const Token& at = peek();
            ExprPtr e = parse_expr();
            if (!e->is_literal()) fail(at, "initial value must be constant");
            if (v.is_bool) {
                if (e->type() != Type::Bool) fail(at, "initial value of Boolean '" + v.name + "' must be Boolean");
                v.init = e->value() != 0.0 ? 1 : 0;
            } else {
                v.init = constant_int(at, e, "initial value");
                if (v.init < v.lo || v.init > v.hi)
                    fail(at, "initial value " + std::to_string(v.init) + " of '" + v.name + "' is out of range [" +
                                 std::to_string(v.lo) + ".." + std::to_string(v.hi) + "]");
            }
        }
        expect_symbol(";");
        var_index_[v.name] = vars_.size();
        vars_.push_back(v);
    }

    std::vector<Assignment> parse_updates() {
        std::vector<Assignment> updates;
        if (is_keyword(peek(), "true")) {
            next();
            return updates;
        }
        std::set<std::size_t> assigned;
        while (true) {
            expect_symbol("(");
            const Token& name = peek();
            if (name.kind != TokenKind::Identifier) fail(name, "expected a variable name" + found());
            next();
            auto it = var_index_.find(name.text);
            if (it == var_index_.end()) fail(name, "unknown variable '" + name.text + "'");
            expect_symbol("'");
            expect_symbol("=");
            const Token& at = peek();
            ExprPtr value = parse_expr();
            const VarDecl& v = vars_[it->second];
            if (v.is_bool && value->type() != Type::Bool)
                fail(at, "Boolean variable '" + v.name + "' assigned a numeric value");
            if (!v.is_bool && value->type() != Type::Int)
                fail(at, "integer variable '" + v.name + "' assigned a non-integer value");
            if (!assigned.insert(it->second).second) fail(name, "variable '" + v.name + "' assigned twice");
            updates.push_back({it->second, value});
            expect_symbol(")");
            if (!is_symbol(peek(), "&")) break;
            next();
        }
        return updates;
    }

    void parse_command() {
        const Token& open = next();
        std::string label;
        if (!is_symbol(peek(), "]")) label = expect_identifier().text;
        expect_symbol("]");
        if (label.empty()) label = "_" + std::to_string(command_statements_);
        ++command_statements_;
        const Token& guard_tok = peek();
        ExprPtr guard = parse_expr();
        if (guard->type() != Type::Bool) fail(guard_tok, "guard of command '" + label + "' is not Boolean");
        expect_symbol("->");
        std::vector<std::pair<ExprPtr, std::vector<Assignment>>> branches;
        while (true) {
            const Token& rate_tok = peek();
            ExprPtr rate = parse_expr();
            if (rate->type() == Type::Bool) fail(rate_tok, "rate of command '" + label + "' is not numeric");
            expect_symbol(":");
            branches.emplace_back(rate, parse_updates());
            if (!is_symbol(peek(), "+")) break;
            next();
        }
        expect_symbol(";");
        (void)open;
        if (branches.size() == 1) {
            commands_.push_back({label, guard, branches[0].first, std::move(branches[0].second)});
        } else {
            for (std::size_t i = 0; i < branches.size(); ++i)
                commands_.push_back(
                    {label + "#" + std::to_string(i), guard, branches[i].first, std::move(branches[i].second)});
        }
    }

    void parse_rewards() {
        next();
        if (peek().kind == TokenKind::String) next();
        bool final_kind = false;
        if (is_keyword(peek(), "final")) {
            final_kind = true;
            next();
        } else if (is_keyword(peek(), "cumulative")) {
            next();
        }
        while (!is_keyword(peek(), "endrewards")) {
            if (peek().kind == TokenKind::End) fail(peek(), "expected 'endrewards' but reached end of input");
            if (is_symbol(peek(), "["))
                fail(peek(), "transition rewards are not supported; fold them into cumulative reward rates");
            const Token& guard_tok = peek();
            ExprPtr guard = parse_expr();
            if (guard->type() != Type::Bool) fail(guard_tok, "reward guard is not Boolean");
            expect_symbol(":");
            const Token& value_tok = peek();
            ExprPtr value = parse_expr();
            if (value->type() == Type::Bool) fail(value_tok, "reward value is not numeric");
            expect_symbol(";");
            (final_kind ? final_ : cumulative_).push_back({guard, value});
        }
        next();
    }

    // --- expressions ------------------------------------------------------

    ExprPtr build(const Token& at, Op op, std::vector<ExprPtr> args) {
        try {
            return Expr::make(op, std::move(args));
        } catch (const std::invalid_argument& e) {
            fail(at, e.what());
        } catch (const SemanticError& e) {
            fail(at, e.what());
        }
    }

    ExprPtr parse_expr() {
        ExprPtr cond = parse_implies();
        if (is_symbol(peek(), "?")) {
            const Token& q = next();
            ExprPtr a = parse_expr();
            expect_symbol(":");
            ExprPtr b = parse_expr();
            return build(q, Op::Ite, {cond, a, b});
        }
        return cond;
    }

    ExprPtr parse_implies() {
        ExprPtr lhs = parse_or();
        if (is_symbol(peek(), "=>")) {
            const Token& op = next();
            return build(op, Op::Implies, {lhs, parse_implies()});
        }
        return lhs;
    }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (is_symbol(peek(), "|")) {
            const Token& op = next();
            lhs = build(op, Op::Or, {lhs, parse_and()});
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_not();
        while (is_symbol(peek(), "&")) {
            const Token& op = next();
            lhs = build(op, Op::And, {lhs, parse_not()});
        }
        return lhs;
    }

    ExprPtr parse_not() {
        if (is_symbol(peek(), "!")) {
            const Token& op = next();
            return build(op, Op::Not, {parse_not()});
        }
        return parse_relational();
    }

    ExprPtr parse_relational() {
        ExprPtr lhs = parse_additive();
        static const std::map<std::string, Op, std::less<>> ops = {{"=", Op::Eq}, {"!=", Op::Ne}, {"<", Op::Lt},
                                                                   {"<=", Op::Le}, {">", Op::Gt}, {">=", Op::Ge}};
        const Token& t = peek();
        if (t.kind == TokenKind::Symbol) {
            auto it = ops.find(t.text);
            if (it != ops.end()) {
                next();
                return build(t, it->second, {lhs, parse_additive()});
            }
        }
        return lhs;
    }

    ExprPtr parse_additive() {
        ExprPtr lhs = parse_multiplicative();
        while (is_symbol(peek(), "+") || is_symbol(peek(), "-")) {
            const Token& op = next();
            lhs = build(op, op.text == "+" ? Op::Add : Op::Sub, {lhs, parse_multiplicative()});
        }
        return lhs;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr lhs = parse_unary();
        while (is_symbol(peek(), "*") || is_symbol(peek(), "/")) {
            const Token& op = next();
            lhs = build(op, op.text == "*" ? Op::Mul : Op::Div, {lhs, parse_unary()});
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (is_symbol(peek(), "-")) {
            const Token& op = next();
            return build(op, Op::Neg, {parse_unary()});
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Integer:
                next();
                return Expr::literal(std::stod(t.text), Type::Int);
            case TokenKind::Real:
                next();
                return Expr::literal(std::stod(t.text), Type::Real);
            case TokenKind::Symbol:
                if (t.text == "(") {
                    next();
                    ExprPtr e = parse_expr();
                    expect_symbol(")");
                    return e;
                }
                fail(t, "expected an expression" + found());
            case TokenKind::Identifier:
                return parse_identifier();
            default:
                fail(t, "expected an expression" + found());
        }
    }

    ExprPtr parse_identifier() {
        const Token& t = next();
        if (t.text == "true") return Expr::boolean(true);
        if (t.text == "false") return Expr::boolean(false);
        if (t.text == "min" || t.text == "max" || t.text == "floor" || t.text == "ceil") {
            expect_symbol("(");
            std::vector<ExprPtr> args{parse_expr()};
            while (is_symbol(peek(), ",")) {
                next();
                args.push_back(parse_expr());
            }
            expect_symbol(")");
            if (t.text == "floor" || t.text == "ceil") {
                if (args.size() != 1) fail(t, t.text + " takes one argument");
                return build(t, t.text == "floor" ? Op::Floor : Op::Ceil, {args[0]});
            }
            if (args.size() < 2) fail(t, t.text + " takes at least two arguments");
            ExprPtr acc = args[0];
            for (std::size_t i = 1; i < args.size(); ++i)
                acc = build(t, t.text == "min" ? Op::Min : Op::Max, {acc, args[i]});
            return acc;
        }
        if (kKeywords.count(t.text)) fail(t, "unexpected keyword '" + t.text + "'");
        if (auto it = var_index_.find(t.text); it != var_index_.end()) {
            if (!in_module_scope_) fail(t, "constant expressions cannot refer to variable '" + t.text + "'");
            return Expr::variable(it->second, vars_[it->second].type());
        }
        if (consts_.count(t.text)) {
            const Constant& c = resolve_const(t.text);
            return Expr::literal(c.value, c.type);
        }
        if (formulas_.count(t.text)) return resolve_formula(t.text, t);
        fail(t, "unknown identifier '" + t.text + "'");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    const ParseOptions& options_;
    bool in_module_scope_ = false;

    std::vector<VarDecl> vars_;
    std::map<std::string, std::size_t> var_index_;
    std::map<std::string, ConstEntry> consts_;
    std::map<std::string, FormulaEntry> formulas_;
    std::vector<Command> commands_;
    std::size_t command_statements_ = 0;
    std::vector<RewardItem> cumulative_;
    std::vector<RewardItem> final_;
    ExprPtr target_;
};

}  // namespace

GuardedModel parse_model(std::string_view text, const ParseOptions& options) {
    Parser parser(detail::tokenize(text), options);
    return parser.parse_model();
}

GuardedModel parse_model_file(const std::filesystem::path& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str(), options);
}

ExprPtr parse_expression(std::string_view text, const GuardedModel& model) {
    ParseOptions options;
    Parser parser(detail::tokenize(text), options);
    return parser.parse_standalone(model);
}

}  // namespace symbound::model
