#pragma once

#include <stdexcept>
#include <string>

namespace relaynet {

/// Conditioning sub-matrix is numerically singular even after
/// regularization; signals a degenerate channel draw. Monte Carlo callers
/// count these per draw instead of aborting.
class SingularConditioning : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A covariance determinant came out non-positive, so the differential
/// entropy is undefined.
class NonPositiveDeterminant : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid model construction (non-Hermitian / non-PSD covariance,
/// inconsistent policies, unsupported sizes).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed experiment configuration text (bad JSON, unknown keys).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structurally valid configuration violating an invariant; the message
/// names the offending field.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& field, const std::string& detail)
        : std::runtime_error("invalid field '" + field + "': " + detail), field_(field) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Filesystem failure while emitting results.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace relaynet
