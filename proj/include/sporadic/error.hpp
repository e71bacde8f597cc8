#pragma once

#include <stdexcept>
#include <string>

namespace sporadic {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on model or estimator parameters was violated.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Problem size exceeds what a code path supports (dense cap, addressable size).
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Energy or interval outside the region where an estimator is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative or factorization-based numeric kernel did not meet its tolerance.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Not enough data for a statistic or hypothesis test.
class InsufficientSampleError : public Error {
public:
    using Error::Error;
};

}  // namespace sporadic
