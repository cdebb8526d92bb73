#pragma once

#include <stdexcept>
#include <string>

namespace metro {

// Every error raised by the library derives from Error so callers (the CLI in
// particular) can map families of failures onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed caller input: length mismatches, labels outside {+1, -1}, bad CSV rows.
class InputError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or preset parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The empirical denominator of a metric evaluated to zero.
class DegenerateDenominatorError : public Error {
public:
    DegenerateDenominatorError(double numerator)
        : Error("metric denominator is zero (numerator = " + std::to_string(numerator) + ")"),
          numerator_(numerator) {}

    double numerator() const noexcept { return numerator_; }

private:
    double numerator_;
};

/// The denominator changes sign across hypotheses, so the ratio cannot be
/// reduced to a single sign-normalized form.
class UnsupportedMetricError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    DivergenceError(int epoch)
        : Error("training diverged at epoch " + std::to_string(epoch)), epoch_(epoch) {}

    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

/// A lambda search interval does not bracket the crossing point.
class BracketError : public Error {
public:
    using Error::Error;
};

/// A synthetic generator could not satisfy its acceptance property.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// A verification routine was called outside the conditions it requires.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A fixture or serialized object failed validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace metro
