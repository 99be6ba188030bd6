#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dbd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatch, empty sets, out-of-range k, ...
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A caller broke a state contract (e.g. removing a point twice). Signals a logic bug.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Path reconstruction requested for a point no search reached.
class NotReached : public Error {
public:
    using Error::Error;
};

/// File parse failure. `line()` is 1-based, 0 when the format has no lines.
class ParseError : public Error {
public:
    ParseError(const std::string& where, std::size_t line, const std::string& what)
        : Error(where + (line ? ":" + std::to_string(line) : std::string{}) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace dbd
