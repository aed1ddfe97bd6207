#pragma once

#include <stdexcept>
#include <string>

namespace mqsr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (invalid delta,
/// s = 1 for n_INF, mismatched lengths, malformed config).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A configured size cap was exceeded (n*p entries, C(p,s) candidates).
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Non-finite or otherwise unusable numeric input.
class DataError : public Error {
public:
    using Error::Error;
};

/// Rank-deficient or ill-conditioned support design in the KKT witness.
class DegenerateInstanceError : public Error {
public:
    using Error::Error;
};

/// Filesystem failures; the message always carries the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mqsr
