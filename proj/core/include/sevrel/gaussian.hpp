#pragma once

// Standard-normal special functions and the deficit map
//
//     F(b) = phi(b) / Phi(-b) - b,    b > 0,
//
// which sends a reliability index to the normalized expected failure deficit
// of a Gaussian limit state. F decreases strictly from 2/sqrt(2*pi) at b = 0+
// towards 0 as b grows, so every deficit in that open interval has exactly one
// Gaussian-equivalent index. All functions are pure and thread-safe.

#include <optional>

namespace sevrel::gaussian {

// 2/sqrt(2*pi) = sqrt(2/pi), the supremum of F.
inline constexpr double kDeficitEndpoint = 0.7978845608028654;

inline constexpr double kInvSqrt2Pi = 0.3989422804014327;

// Branch point of conditional_tail_mean: direct ratio below, continued fraction above.
inline constexpr double kContinuedFractionSwitch = 8.0;

// Residual tolerance |F(b) - y| of invert_deficit_map.
inline constexpr double kInverseTolerance = 1e-12;
inline constexpr int kInverseMaxNewtonIterations = 100;

double pdf(double x);

// Phi(x) through the complementary error function; stays positive far into the lower tail.
double cdf(double x);

// Inverse of cdf on (0, 1). Throws DomainError outside the open interval.
double quantile(double p);

// r(b) = E[Z | Z > b] = phi(b) / Phi(-b).
double conditional_tail_mean(double b);

// F(b) = r(b) - b. Throws DomainError for b <= 0.
double deficit_map(double b);

// F'(b) = r(b) F(b) - 1, strictly negative. Throws DomainError for b <= 0.
double deficit_map_slope(double b);

// Var(Z | Z > b) = 1 + b r(b) - r(b)^2 = 1 - r(b) F(b).
double truncated_variance(double b);

// A normalized deficit known to lie strictly inside (0, 2/sqrt(2*pi)).
class DeficitDomain {
public:
    // Throws DomainError for value <= 0 (or non-finite) and OutOfGaussianDomain
    // for value >= kDeficitEndpoint.
    explicit DeficitDomain(double value);

    static std::optional<DeficitDomain> try_make(double value) noexcept;

    double value() const noexcept { return value_; }

private:
    struct Unchecked {};
    DeficitDomain(double value, Unchecked) noexcept : value_(value) {}

    double value_;
};

// Unique b > 0 with F(b) = y. Safeguarded Newton inside a bisection bracket.
double invert_deficit_map(DeficitDomain y);

// Convenience overload; validates like the DeficitDomain constructor.
double invert_deficit_map(double y);

}  // namespace sevrel::gaussian
