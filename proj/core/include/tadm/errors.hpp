#pragma once

#include <stdexcept>
#include <string>

namespace tadm {

struct TadmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : TadmError {
    using TadmError::TadmError;
};

struct CapacityError : TadmError {
    using TadmError::TadmError;
};

struct InputError : TadmError {
    using TadmError::TadmError;
};

struct DecompositionError : TadmError {
    using TadmError::TadmError;
};

struct ToleranceNotMetError : TadmError {
    ToleranceNotMetError(const std::string &msg, double achieved)
        : TadmError(msg), achieved_residual(achieved) {}
    double achieved_residual;
};

struct UnsupportedConfigError : TadmError {
    using TadmError::TadmError;
};

struct ComparisonError : TadmError {
    using TadmError::TadmError;
};

struct ConfigError : TadmError {
    using TadmError::TadmError;
};

struct IoError : TadmError {
    using TadmError::TadmError;
};

} // namespace tadm
