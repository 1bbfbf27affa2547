#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skewform {

// Base for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string &msg, std::size_t position)
        : Error(msg + " (at position " + std::to_string(position) + ")"), position_(position), detail_(msg) {}

    std::size_t position() const noexcept { return position_; }
    const std::string &detail() const noexcept { return detail_; }

private:
    std::size_t position_;
    std::string detail_;
};

class UnknownFunctionError : public ParseError {
public:
    using ParseError::ParseError;
};

class UndeclaredVariableError : public Error {
public:
    using Error::Error;
};

class UnboundVariableError : public Error {
public:
    using Error::Error;
};

// Division by zero, either symbolic (zero denominator) or at an evaluation point.
class PoleError : public Error {
public:
    using Error::Error;
};

// Every sampling attempt of a randomized test landed on a pole.
class SamplingError : public Error {
public:
    using Error::Error;
};

class ChartMismatchError : public Error {
public:
    using Error::Error;
};

class DegreeError : public Error {
public:
    using Error::Error;
};

class NotClosedError : public Error {
public:
    using Error::Error;
};

class NonPolynomialError : public Error {
public:
    using Error::Error;
};

class MetricError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class UnknownEntryError : public Error {
public:
    using Error::Error;
};

} // namespace skewform
