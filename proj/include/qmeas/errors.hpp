#pragma once

#include <stdexcept>
#include <string>

namespace qmeas {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: shapes, labels, parameters, geometry. CLI exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The computation itself cannot proceed (stability, zero denominator). CLI exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public ValidationError {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual, const std::string& where)
        : ValidationError(where + ": dimension mismatch (" + std::to_string(expected) + " vs " +
                          std::to_string(actual) + ")") {}
};

class NotPositive : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class Overcomplete : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Two effects fail the commutativity condition, so their product is not an observable.
/// `first` and `second` name the offending factors (outcome labels or tree nodes).
class NonCommuting : public ValidationError {
public:
    NonCommuting(std::string first, std::string second, double commutator)
        : ValidationError("non-commuting factors '" + first + "' and '" + second +
                          "' (commutator norm " + std::to_string(commutator) + ")"),
          first_(std::move(first)),
          second_(std::move(second)),
          commutator_(commutator) {}

    const std::string& first() const noexcept { return first_; }
    const std::string& second() const noexcept { return second_; }
    double commutator() const noexcept { return commutator_; }

private:
    std::string first_;
    std::string second_;
    double commutator_;
};

class NodeMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ZeroDenominator : public NumericError {
public:
    using NumericError::NumericError;
};

class UnresolvableScale : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class GeometryOutOfDomain : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class StabilityViolation : public NumericError {
public:
    using NumericError::NumericError;
};

class EmptyWindow : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidAmplitudes : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class IoFailure : public Error {
public:
    using Error::Error;
};

}  // namespace qmeas
