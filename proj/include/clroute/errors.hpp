/**
 * @file errors.hpp
 * @brief Exception types shared by the clroute library.
 */

#ifndef CLROUTE_ERRORS_HPP
#define CLROUTE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace clroute {

/// Bad argument passed to a generator or command.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed instance file or JSON document.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Instance data violates a model invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A loss or planner was asked to work in the wrong (m, n) regime.
class RegimeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exact solvers refuse instances whose state space is too large.
class SizeLimitError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Internal consistency check failed. Always a bug.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace clroute

#endif
