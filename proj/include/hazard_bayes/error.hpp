#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hazard_bayes {

/// Bad arguments or data handed to a library routine.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A malformed row in an innings file.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Nested sampling could not run or could not finish.
class SamplerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quantity is undefined for the given input (e.g. the average of an
/// all-not-out career, or the ellipse of collinear points).
class Degenerate : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace hazard_bayes
