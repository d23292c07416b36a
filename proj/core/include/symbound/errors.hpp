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
#include <stdexcept>
#include <string>

namespace symbound {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Malformed model text, with a 1-based source position.
class ParseError : public Error {
   public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

   private:
    std::size_t line_;
    std::size_t column_;
};

/// A model that parses but misbehaves on some reachable state
/// (non-positive rate, out-of-range update, negative reward, ...).
class SemanticError : public Error {
   public:
    using Error::Error;
};

/// Explicit enumeration hit the configured state cap.
class StateCapExceeded : public Error {
   public:
    explicit StateCapExceeded(std::size_t cap)
        : Error("reachable state count exceeds the cap of " + std::to_string(cap)), cap_(cap) {}
    std::size_t cap() const { return cap_; }

   private:
    std::size_t cap_;
};

/// The Poisson truncation depth would exceed the configured iteration cap.
class IterationCapExceeded : public Error {
   public:
    IterationCapExceeded(std::size_t required, std::size_t cap)
        : Error("truncation depth of about " + std::to_string(required) + " exceeds the iteration cap of " +
                std::to_string(cap)),
          required_(required) {}
    std::size_t required() const { return required_; }

   private:
    std::size_t required_;
};

/// Interval rows whose bounds admit no rate vector summing to the
/// uniformisation rate. Indicates a corrupt abstraction.
class InfeasibleAbstraction : public Error {
   public:
    using Error::Error;
};

}  // namespace symbound
