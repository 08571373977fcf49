// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace airgnn {

/// Shape or width mismatch between an input and the object consuming it.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A precondition of an algorithm was violated by the caller.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// NaN/Inf or an otherwise unusable numeric value.
class NumericError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed file content. `line()` is 1-based, or 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &what, std::size_t line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace airgnn
