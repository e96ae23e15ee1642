#pragma once

// Parametric scalar distributions used as limit-state inputs.
//
// Every family is sampled with exactly one uniform per draw (inverse
// transform, Normal through the Gaussian quantile); a mixture consumes one
// uniform for the branch and then the chosen component's draw, so the number
// of uniforms per sample is fixed for a given spec.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sevrel/random.hpp"

namespace sevrel {

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct Normal {
    double mean;
    double stddev;
};

struct Lognormal {
    double logMean;
    double logStd;
};

// Largest-extreme-value (max-type) Gumbel: F(x) = exp(-exp(-(x - location)/scale)).
struct Gumbel {
    double location;
    double scale;
};

// Smallest-extreme-value (min-type) Gumbel: F(x) = 1 - exp(-exp((x - location)/scale)).
struct GumbelMin {
    double location;
    double scale;
};

struct Pareto {
    double xMin;
    double alpha;
};

class DistributionSpec;

struct MixtureComponent;

struct Mixture {
    std::vector<MixtureComponent> components;
};

class DistributionSpec {
public:
    using Variant = std::variant<Normal, Lognormal, Gumbel, GumbelMin, Pareto, Mixture>;

    // Each constructor validates its parameters and throws InvalidArgument.
    DistributionSpec(Normal d);
    DistributionSpec(Lognormal d);
    DistributionSpec(Gumbel d);
    DistributionSpec(GumbelMin d);
    DistributionSpec(Pareto d);
    DistributionSpec(Mixture d);

    const Variant& variant() const noexcept { return value_; }

    template <class T>
    const T* get_if() const noexcept { return std::get_if<T>(&value_); }

    // "normal", "lognormal", "gumbel", "gumbel-min", "pareto", "mixture".
    std::string_view kind() const noexcept;

    bool operator==(const DistributionSpec&) const;

private:
    Variant value_;
};

struct MixtureComponent {
    double weight;
    DistributionSpec distribution;

    bool operator==(const MixtureComponent&) const = default;
};

inline bool operator==(const Normal& a, const Normal& b) { return a.mean == b.mean && a.stddev == b.stddev; }
inline bool operator==(const Lognormal& a, const Lognormal& b) { return a.logMean == b.logMean && a.logStd == b.logStd; }
inline bool operator==(const Gumbel& a, const Gumbel& b) { return a.location == b.location && a.scale == b.scale; }
inline bool operator==(const GumbelMin& a, const GumbelMin& b) { return a.location == b.location && a.scale == b.scale; }
inline bool operator==(const Pareto& a, const Pareto& b) { return a.xMin == b.xMin && a.alpha == b.alpha; }
inline bool operator==(const Mixture& a, const Mixture& b) { return a.components == b.components; }

// Lognormal with the given median and coefficient of variation:
// logMean = ln(median), logStd = sqrt(ln(1 + cov^2)).
DistributionSpec lognormal_from_median_cov(double median, double cov);

// Mean and variance; non-existent moments are reported as +infinity.
struct MomentReport {
    double mean;
    double variance;
    bool varianceFinite;
};

MomentReport moments(const DistributionSpec& spec);

// Inverse CDF on (0, 1). Throws DomainError for p outside (0, 1) and
// InvalidArgument for mixtures.
double quantile(const DistributionSpec& spec, double p);

double cdf(const DistributionSpec& spec, double x);

// One draw.
double draw(const DistributionSpec& spec, RandomStream& stream);

// Fills `out` with consecutive draws.
void sample(const DistributionSpec& spec, RandomStream& stream, std::span<double> out);

std::vector<double> sample(const DistributionSpec& spec, RandomStream& stream, std::size_t n);

// Human-readable one-liner, e.g. "Normal(10, 1)".
std::string describe(const DistributionSpec& spec);

}  // namespace sevrel
