#pragma once

#include <stdexcept>
#include <string>

namespace soqo {

// One exception type per rejectable condition so callers can catch precisely.
// invalid_argument for bad inputs, runtime_error for failures discovered
// while computing.

struct NotSymmetric : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotPositiveDefinite : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct RangeViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct GammaOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct EigvalOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct HorizonMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotScalarMatrix : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct HorizonTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct EmptyInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SolveFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IOFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace soqo
