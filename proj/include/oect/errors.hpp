#pragma once

// Exception types thrown by the simulator. Everything derives from
// oect::Error so callers that only care about "a trial failed" can catch one
// type.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oect {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes of matrices/vectors handed to an operation do not agree.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A precondition on a parameter or configuration value was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A time integration produced a non-finite state.
class IntegrationDivergence : public Error {
public:
    IntegrationDivergence(const std::string& what, std::size_t step)
        : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// The regression system is too badly conditioned to give a meaningful answer.
class IllConditioned : public Error {
public:
    IllConditioned(const std::string& what, double condition)
        : Error(what), condition_(condition) {}

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument(msg);
}

inline void require_shape(bool ok, const std::string& msg) {
    if (!ok) throw DimensionMismatch(msg);
}

}  // namespace detail
}  // namespace oect
