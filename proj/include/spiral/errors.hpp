#pragma once

#include <stdexcept>
#include <string>

namespace spiral {

/// Invalid numeric parameter (a <= 0, tol <= 0, bad schedule, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data violates a structural requirement (non-monotone table, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Query outside the domain a data-backed object covers.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A configured size budget would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation requires something the object does not provide (e.g. an inverse).
class CapabilityError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A precondition of a construction is not met.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Random sampling produced nothing usable.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed spec string; `token()` names the offending piece.
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& message, std::string token)
        : std::invalid_argument(message), token_(std::move(token)) {}

    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

} // namespace spiral

namespace spiral {

/// Adaptive quadrature exhausted its panel budget before reaching the tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace spiral
