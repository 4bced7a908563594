#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace isoproxim {

/// Base class of every exception thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed external data: unreadable files, bad matrix/frame payloads,
/// unparsable gauge strings.
class InputError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation was violated (rank out of
/// range, non-finite entries, shape mismatch, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The iterative SVD ran out of sweeps. Carries the iteration count.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::size_t sweeps)
        : Error(what), sweeps_(sweeps) {}

    std::size_t sweeps() const noexcept { return sweeps_; }

private:
    std::size_t sweeps_;
};

/// Global approximation of the zero matrix is rejected: every rank-1
/// partial isometry lies at the same distance, which this error carries.
class ZeroMatrixError : public PreconditionError {
public:
    ZeroMatrixError(const std::string& what, double rank_one_distance)
        : PreconditionError(what), rank_one_distance_(rank_one_distance) {}

    double rank_one_distance() const noexcept { return rank_one_distance_; }

private:
    double rank_one_distance_;
};

/// The frame spans a subspace orthogonal to the requested one, so every
/// Parseval frame inside the subspace is equally close.
class SubspaceError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

} // namespace isoproxim
