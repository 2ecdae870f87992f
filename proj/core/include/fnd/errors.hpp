#pragma once

#include <stdexcept>
#include <string>

namespace fnd {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mis-configured value group / field, mismatched configurations, bad ranks.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// A result would depend on coefficients beyond a scalar's truncation cutoff.
// Recomputing with a larger window is the suggested remedy.
struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& msg) : Error(msg) {}
};

// Line-numbered diagnostics from the .fnc / chain-file parsers.
struct ParseError : Error {
    ParseError(int line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line(line) {}
    int line;
};

// Discrete value group, requested re-basing window smaller than the generator.
struct WindowInfeasible : Error {
    explicit WindowInfeasible(const std::string& msg) : Error(msg) {}
};

// Left witness at a non-generic alpha (-alpha realized by a degree-(k-1)
// generator action and only level-(-alpha) primitives exist).
struct UnsupportedAlpha : Error {
    explicit UnsupportedAlpha(const std::string& msg) : Error(msg) {}
};

// A documented precondition of an operation was violated by the caller.
struct ContractViolation : Error {
    explicit ContractViolation(const std::string& msg) : Error(msg) {}
};

} // namespace fnd
