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

#include "lexer.hpp"

#include <array>
#include <cctype>

#include "symbound/errors.hpp"

namespace symbound::model::detail {

namespace {

constexpr std::array<std::string_view, 8> kTwoCharSymbols = {"->", "=>", "<=", ">=", "!=", "..", "&&", "||"};
constexpr std::string_view kOneCharSymbols = "'[](){};:,=<>+-*/&|!?";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
            std::size_t l = line, cl = col;
            advance(2);
            while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) advance(1);
            if (i + 1 >= text.size()) throw ParseError("unterminated comment", l, cl);
            advance(2);
            continue;
        }
        std::size_t start = i, l = line, cl = col;
        if (ident_start(c)) {
            while (i < text.size() && ident_char(text[i])) advance(1);
            tokens.push_back({TokenKind::Identifier, std::string(text.substr(start, i - start)), l, cl});
            continue;
        }
        if (digit(c) || (c == '.' && i + 1 < text.size() && digit(text[i + 1]))) {
            bool real = false;
            while (i < text.size() && digit(text[i])) advance(1);
            if (i + 1 < text.size() && text[i] == '.' && digit(text[i + 1])) {
                real = true;
                advance(1);
                while (i < text.size() && digit(text[i])) advance(1);
            } else if (i < text.size() && text[i] == '.' && (i + 1 >= text.size() || text[i + 1] != '.')) {
                real = true;
                advance(1);
            }
            if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t save_i = i, save_line = line, save_col = col;
                advance(1);
                if (i < text.size() && (text[i] == '+' || text[i] == '-')) advance(1);
                if (i < text.size() && digit(text[i])) {
                    real = true;
                    while (i < text.size() && digit(text[i])) advance(1);
                } else {
                    i = save_i;
                    line = save_line;
                    col = save_col;
                }
            }
            tokens.push_back({real ? TokenKind::Real : TokenKind::Integer, std::string(text.substr(start, i - start)),
                              l, cl});
            continue;
        }
        if (c == '"') {
            advance(1);
            while (i < text.size() && text[i] != '"' && text[i] != '\n') advance(1);
            if (i >= text.size() || text[i] != '"') throw ParseError("unterminated string", l, cl);
            tokens.push_back({TokenKind::String, std::string(text.substr(start + 1, i - start - 1)), l, cl});
            advance(1);
            continue;
        }
        bool matched = false;
        if (i + 1 < text.size()) {
            for (auto sym : kTwoCharSymbols) {
                if (text.substr(i, 2) == sym) {
                    std::string s(sym);
                    if (s == "&&") s = "&";
                    if (s == "||") s = "|";
                    tokens.push_back({TokenKind::Symbol, s, l, cl});
                    advance(2);
                    matched = true;
                    break;
                }
            }
        }
        if (matched) continue;
        if (kOneCharSymbols.find(c) != std::string_view::npos) {
            tokens.push_back({TokenKind::Symbol, std::string(1, c), l, cl});
            advance(1);
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
    tokens.push_back({TokenKind::End, "", line, col});
    return tokens;
}

}  // namespace symbound::model::detail
