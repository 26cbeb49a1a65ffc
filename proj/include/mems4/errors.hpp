#pragma once

#include <stdexcept>
#include <string>

namespace mems4 {

struct DegenerateGrid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidCoefficient : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The deflection reached the ground plate (1 + u <= 0) where the source
// term is evaluated; callers near a quench event catch this and refine.
struct TouchdownDomain : std::domain_error {
    using std::domain_error::domain_error;
};

struct NonPositivePivot : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SizeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BracketInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mems4
