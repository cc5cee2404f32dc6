#pragma once

#include <stdexcept>
#include <string>

namespace imdiff {

/// Invalid user input: bad config keys/values, violated preconditions,
/// mismatched grids. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical fault detected while stepping (instability, negativity).
/// CLI maps this to exit code 3.
class SolverFault : public std::runtime_error {
public:
    explicit SolverFault(const std::string& msg) : std::runtime_error(msg) {}
};

/// A supplied scalar field evaluated to a non-finite value.
class EvaluationError : public std::runtime_error {
public:
    explicit EvaluationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace imdiff
