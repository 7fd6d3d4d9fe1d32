#pragma once

#include <stdexcept>
#include <string>

namespace hle {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyDomainError : Error { using Error::Error; };
struct SpacingTooCoarseError : Error { using Error::Error; };
struct NoConvergenceError : Error {
    NoConvergenceError(const std::string& what, double last_residual, int iterations)
        : Error(what), last_residual(last_residual), iterations(iterations) {}
    double last_residual;
    int iterations;
};
struct DomainMismatchError : Error { using Error::Error; };
struct GridMismatchError : Error { using Error::Error; };
struct InvalidExponentError : Error { using Error::Error; };
struct InvalidDimensionError : Error { using Error::Error; };
struct MissingGammaError : Error { using Error::Error; };
struct ZeroFieldError : Error { using Error::Error; };
struct BallNotContainedError : Error { using Error::Error; };
struct GeometryMismatchError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace hle
