#pragma once

#include <stdexcept>
#include <string>

namespace mpindep {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, invalid parameters, impossible requests.
// The CLI maps these to exit code 1.
struct UsageError : Error {
    using Error::Error;
};

// Numeric failure inside an algorithm. The CLI maps these to exit code 2.
struct NumericError : Error {
    using Error::Error;
};

struct NonConvergence : NumericError {
    int index_reached;
    explicit NonConvergence(int idx)
        : NumericError("eigenvalue iteration failed to converge at index " +
                       std::to_string(idx)),
          index_reached(idx) {}
};

struct NotHermitian : UsageError {
    using UsageError::UsageError;
};

struct NonPositiveRatio : UsageError {
    using UsageError::UsageError;
};

struct LowerHalfPlane : UsageError {
    using UsageError::UsageError;
};

struct QuadratureTooCoarse : NumericError {
    using NumericError::NumericError;
};

struct CalibrationMismatch : UsageError {
    using UsageError::UsageError;
};

struct InsufficientReplicates : UsageError {
    using UsageError::UsageError;
};

struct BadCoefficient : UsageError {
    using UsageError::UsageError;
};

struct DimensionMismatch : UsageError {
    using UsageError::UsageError;
};

struct SingularWeights : NumericError {
    using NumericError::NumericError;
};

struct SeriesTooShort : UsageError {
    using UsageError::UsageError;
};

struct DegenerateSeries : UsageError {
    using UsageError::UsageError;
};

struct NotEnoughTickers : UsageError {
    using UsageError::UsageError;
};

struct ParseError : UsageError {
    using UsageError::UsageError;
};

}  // namespace mpindep
