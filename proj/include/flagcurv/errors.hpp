#pragma once

#include <stdexcept>
#include <string>

namespace flagcurv {

/// Shapes of two operands do not line up for the requested operation.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An affine-chart operation hit a singular chart matrix (the point lies
/// outside the chart); callers may catch this and report, there is no
/// second chart.
struct ChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A matrix that must be inverted is numerically singular.
struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A constructor- or call-level invariant failed validation.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A two-form on R^4 is neither self-dual nor anti-self-dual, or its
/// imaginary components disagree about the sign.
struct MixedDualityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad harness configuration or CLI usage (maps to exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace flagcurv
