#pragma once

#include <stdexcept>
#include <string>

namespace qkerr {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (q not in (0, 1], n_max too large, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative procedure (series, eigensolver) did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A truncated expansion discards more weight than allowed.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// A computed object violates a physical invariant (non-Hermitian, negative eigenvalue, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace qkerr
