#pragma once

#include <stdexcept>
#include <string>

namespace llocg {

/// Invalid input to a library call (bad dimension, non-finite data, out-of-range parameter).
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input was well-formed but the object it refers to is in an invalid state
/// (e.g. a decomposition whose point has left the polytope).
struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inconsistent solver or experiment configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reading or writing an experiment file failed.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace llocg
