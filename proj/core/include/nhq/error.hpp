#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nhq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter set violates a QubitParams invariant.
class InvalidParams : public Error {
public:
    using Error::Error;
};

/// Complex Rabi frequency is exactly zero: the RWA generator is a Jordan block
/// and the mixing angle is undefined.
class ExceptionalPoint : public Error {
public:
    using Error::Error;
};

/// |Im(arg)| of a complex trig evaluation exceeded the configured bound.
class OverflowGuard : public Error {
public:
    using Error::Error;
};

/// Relative deviation requested where the reference population vanishes.
class UndefinedDeviation : public Error {
public:
    using Error::Error;
};

class UnitError : public Error {
public:
    using Error::Error;
};

class IntegrationError : public Error {
public:
    enum class Kind { StepLimit, StepUnderflow, NonFinite, InvalidInterval };

    IntegrationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Text input could not be parsed. line() is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace nhq
