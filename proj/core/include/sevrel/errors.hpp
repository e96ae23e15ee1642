#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sevrel {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Normalized deficit at or beyond the Gaussian endpoint 2/sqrt(2*pi). Callers
// treat this as the Extreme-severity diagnostic rather than as a failure.
class OutOfGaussianDomain : public std::domain_error {
public:
    explicit OutOfGaussianDomain(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

class NoFailuresObserved : public std::runtime_error {
public:
    explicit NoFailuresObserved(std::size_t sampleCount);
    std::size_t sample_count() const noexcept { return sampleCount_; }

private:
    std::size_t sampleCount_;
};

// Invalid model, distribution, or simulation parameters.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Config file problems. `where` is a JSON pointer or "line L, column C".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string where, const std::string& message);
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

}  // namespace sevrel
