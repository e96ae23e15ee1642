#include "sevrel/errors.hpp"

#include "sevrel/format.hpp"

namespace sevrel {

OutOfGaussianDomain::OutOfGaussianDomain(double value)
    : std::domain_error("normalized deficit " + format_general(value, 12) +
                        " is at or beyond the Gaussian endpoint 0.797884560803"),
      value_(value) {}

NoFailuresObserved::NoFailuresObserved(std::size_t sampleCount)
    : std::runtime_error("no failures at N = " + std::to_string(sampleCount) +
                         "; p_f < 1/N bound"),
      sampleCount_(sampleCount) {}

ConfigError::ConfigError(std::string where, const std::string& message)
    : std::runtime_error(where.empty() ? message : where + ": " + message),
      where_(std::move(where)) {}

}  // namespace sevrel
