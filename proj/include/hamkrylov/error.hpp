#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hamkrylov {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A pivot fell below tolerance during a dense factorization.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// An H-weighted inner product was requested for a weight that is not
/// positive definite.
class IndefiniteWeightError : public Error {
public:
    using Error::Error;
};

/// A Krylov recurrence could not continue.
class BreakdownError : public Error {
public:
    BreakdownError(const std::string& what, std::size_t step) : Error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace hamkrylov
