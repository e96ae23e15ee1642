#include "sevrel/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "sevrel/errors.hpp"
#include "sevrel/format.hpp"

namespace sevrel::gaussian {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865476;

// Backward evaluation of F(b) = 1/(b + 2/(b + 3/(b + ...))). Converges quickly
// for b >= 8; the depth keeps the truncation error far below double precision.
double deficit_continued_fraction(double b) {
    constexpr int kDepth = 150;
    double tail = b;
    for (int k = kDepth; k >= 2; --k) tail = b + k / tail;
    return 1.0 / tail;
}

// F without the domain check; F(0) is the endpoint.
double deficit_unchecked(double b) {
    if (b >= kContinuedFractionSwitch) return deficit_continued_fraction(b);
    return pdf(b) / cdf(-b) - b;
}

double slope_unchecked(double b) {
    const double f = deficit_unchecked(b);
    return (b + f) * f - 1.0;
}

// Wichura's AS241 (PPND16), accurate to about 1e-16 relative.
double quantile_lower_half(double p, double q) {
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                  6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
              1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
        const double den =
            (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                  3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
              4.2313330701600911252e+1) * r + 1.0);
        return q * num / den;
    }
    // p is the smaller tail probability here.
    double r = std::sqrt(-std::log(p));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
        x = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        x = num / den;
    }
    return -x;
}

}  // namespace

double pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("normal quantile requires 0 < p < 1, got " + format_general(p, 17));
    }
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) return quantile_lower_half(p, q);
    // 1 - p is exact for p >= 0.5.
    return q < 0 ? quantile_lower_half(p, q) : -quantile_lower_half(1.0 - p, -q);
}

double conditional_tail_mean(double b) {
    if (b >= kContinuedFractionSwitch) return b + deficit_continued_fraction(b);
    return pdf(b) / cdf(-b);
}

double deficit_map(double b) {
    if (!(b > 0.0)) {
        throw DomainError("deficit map requires b > 0, got " + format_general(b, 17));
    }
    return deficit_unchecked(b);
}

double deficit_map_slope(double b) {
    if (!(b > 0.0)) {
        throw DomainError("deficit map slope requires b > 0, got " + format_general(b, 17));
    }
    return slope_unchecked(b);
}

double truncated_variance(double b) {
    const double r = conditional_tail_mean(b);
    return 1.0 - r * (r - b);
}

DeficitDomain::DeficitDomain(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError("normalized deficit must be positive and finite, got " +
                          format_general(value, 17));
    }
    if (value >= kDeficitEndpoint) throw OutOfGaussianDomain(value);
}

std::optional<DeficitDomain> DeficitDomain::try_make(double value) noexcept {
    if (!(value > 0.0) || !(value < kDeficitEndpoint)) return std::nullopt;
    return DeficitDomain(value, Unchecked{});
}

double invert_deficit_map(DeficitDomain domain) {
    const double y = domain.value();
    // F(b) < 1/b, so the root lies below 2/y; F(0) is the endpoint.
    double lo = 0.0;
    double hi = std::max(40.0, 2.0 / y);
    double x = y < 0.2 ? 1.0 / y : 0.5 * (1e-8 + 40.0);
    x = std::clamp(x, lo, hi);

    double best = x;
    double bestResidual = std::abs(deficit_unchecked(x) - y);
    for (int it = 0; it < kInverseMaxNewtonIterations; ++it) {
        const double residual = deficit_unchecked(x) - y;
        if (std::abs(residual) < bestResidual) {
            best = x;
            bestResidual = std::abs(residual);
        }
        if (std::abs(residual) <= kInverseTolerance) return x;
        if (residual > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        double next = x - residual / slope_unchecked(x);
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }
    // Bisection fallback.
    for (int it = 0; it < 2000 && bestResidual > kInverseTolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double residual = deficit_unchecked(mid) - y;
        if (std::abs(residual) < bestResidual) {
            best = mid;
            bestResidual = std::abs(residual);
        }
        if (residual > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return best;
}

double invert_deficit_map(double y) { return invert_deficit_map(DeficitDomain(y)); }

}  // namespace sevrel::gaussian
