#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reslab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

struct ConfigError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct SingularMetricError : Error {
    using Error::Error;
};

struct SignatureError : Error {
    using Error::Error;
};

struct GeodesicError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

struct ConditioningError : Error {
    double condition;
    ConditioningError(const std::string& msg, double cond)
        : Error(msg), condition(cond) {}
};

struct PoleError : Error {
    using Error::Error;
};

}  // namespace reslab
