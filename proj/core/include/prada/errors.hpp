#pragma once

#include <stdexcept>

namespace prada {

/// Bad input values or broken type invariants.
class ValidationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The requested model parameters violate a modeling assumption
/// (e.g. per-frame transition mass exceeding 1).
class ModelValidityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent tabular input.
class IngestionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numeric routine failed to converge.
class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Problems with run configuration files or missing artifacts.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace prada
