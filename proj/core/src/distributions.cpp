#include "sevrel/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sevrel/errors.hpp"
#include "sevrel/format.hpp"
#include "sevrel/gaussian.hpp"

namespace sevrel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

void validate(const Normal& d) {
    require(std::isfinite(d.mean), "normal: mean must be finite");
    require(positive(d.stddev), "normal: stddev must be > 0");
}

void validate(const Lognormal& d) {
    require(std::isfinite(d.logMean), "lognormal: logMean must be finite");
    require(positive(d.logStd), "lognormal: logStd must be > 0");
}

void validate(const Gumbel& d) {
    require(std::isfinite(d.location), "gumbel: location must be finite");
    require(positive(d.scale), "gumbel: scale must be > 0");
}

void validate(const GumbelMin& d) {
    require(std::isfinite(d.location), "gumbel-min: location must be finite");
    require(positive(d.scale), "gumbel-min: scale must be > 0");
}

void validate(const Pareto& d) {
    require(positive(d.xMin), "pareto: xMin must be > 0");
    require(positive(d.alpha), "pareto: alpha must be > 0");
}

void validate(const Mixture& d) {
    require(!d.components.empty(), "mixture: at least one component required");
    double total = 0.0;
    for (const auto& c : d.components) {
        require(positive(c.weight), "mixture: weights must be > 0");
        total += c.weight;
    }
    require(std::abs(total - 1.0) <= 1e-12,
            "mixture: weights must sum to 1 (got " + format_general(total, 17) + ")");
}

// Branch selection by cumulative weight; the last component absorbs rounding.
const MixtureComponent& pick_component(const Mixture& m, double u) {
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < m.components.size(); ++i) {
        cumulative += m.components[i].weight;
        if (u < cumulative) return m.components[i];
    }
    return m.components.back();
}

double pareto_quantile(const Pareto& d, double p) { return d.xMin * std::pow(1.0 - p, -1.0 / d.alpha); }

}  // namespace

DistributionSpec::DistributionSpec(Normal d) : value_(d) { validate(d); }
DistributionSpec::DistributionSpec(Lognormal d) : value_(d) { validate(d); }
DistributionSpec::DistributionSpec(Gumbel d) : value_(d) { validate(d); }
DistributionSpec::DistributionSpec(GumbelMin d) : value_(d) { validate(d); }
DistributionSpec::DistributionSpec(Pareto d) : value_(d) { validate(d); }
DistributionSpec::DistributionSpec(Mixture d) : value_(std::move(d)) { validate(std::get<Mixture>(value_)); }

std::string_view DistributionSpec::kind() const noexcept {
    return std::visit(Overloaded{
                          [](const Normal&) { return std::string_view{"normal"}; },
                          [](const Lognormal&) { return std::string_view{"lognormal"}; },
                          [](const Gumbel&) { return std::string_view{"gumbel"}; },
                          [](const GumbelMin&) { return std::string_view{"gumbel-min"}; },
                          [](const Pareto&) { return std::string_view{"pareto"}; },
                          [](const Mixture&) { return std::string_view{"mixture"}; },
                      },
                      value_);
}

bool DistributionSpec::operator==(const DistributionSpec& other) const { return value_ == other.value_; }

DistributionSpec lognormal_from_median_cov(double median, double cov) {
    require(positive(median), "lognormal: median must be > 0");
    require(positive(cov), "lognormal: cov must be > 0");
    return Lognormal{std::log(median), std::sqrt(std::log1p(cov * cov))};
}

MomentReport moments(const DistributionSpec& spec) {
    return std::visit(
        Overloaded{
            [](const Normal& d) { return MomentReport{d.mean, d.stddev * d.stddev, true}; },
            [](const Lognormal& d) {
                const double s2 = d.logStd * d.logStd;
                const double mean = std::exp(d.logMean + 0.5 * s2);
                return MomentReport{mean, std::expm1(s2) * mean * mean, true};
            },
            [](const Gumbel& d) {
                return MomentReport{d.location + kEulerGamma * d.scale,
                                    std::numbers::pi * std::numbers::pi * d.scale * d.scale / 6.0, true};
            },
            [](const GumbelMin& d) {
                return MomentReport{d.location - kEulerGamma * d.scale,
                                    std::numbers::pi * std::numbers::pi * d.scale * d.scale / 6.0, true};
            },
            [](const Pareto& d) {
                const double a = d.alpha;
                const double mean = a > 1.0 ? a * d.xMin / (a - 1.0) : kInf;
                if (a <= 2.0) return MomentReport{mean, kInf, false};
                return MomentReport{mean, d.xMin * d.xMin * a / ((a - 1.0) * (a - 1.0) * (a - 2.0)), true};
            },
            [](const Mixture& d) {
                double mean = 0.0;
                double second = 0.0;
                bool finite = true;
                bool meanFinite = true;
                for (const auto& c : d.components) {
                    const MomentReport m = moments(c.distribution);
                    finite = finite && m.varianceFinite;
                    meanFinite = meanFinite && std::isfinite(m.mean);
                    mean += c.weight * m.mean;
                    second += c.weight * (m.variance + m.mean * m.mean);
                }
                if (!meanFinite) return MomentReport{kInf, kInf, false};
                if (!finite) return MomentReport{mean, kInf, false};
                return MomentReport{mean, std::max(0.0, second - mean * mean), true};
            },
        },
        spec.variant());
}

double quantile(const DistributionSpec& spec, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("quantile requires 0 < p < 1, got " + format_general(p, 17));
    }
    return std::visit(
        Overloaded{
            [p](const Normal& d) { return d.mean + d.stddev * gaussian::quantile(p); },
            [p](const Lognormal& d) { return std::exp(d.logMean + d.logStd * gaussian::quantile(p)); },
            [p](const Gumbel& d) { return d.location - d.scale * std::log(-std::log(p)); },
            [p](const GumbelMin& d) { return d.location + d.scale * std::log(-std::log1p(-p)); },
            [p](const Pareto& d) { return pareto_quantile(d, p); },
            [](const Mixture&) -> double {
                throw InvalidArgument("quantile is not supported for mixture distributions");
            },
        },
        spec.variant());
}

double cdf(const DistributionSpec& spec, double x) {
    return std::visit(
        Overloaded{
            [x](const Normal& d) { return gaussian::cdf((x - d.mean) / d.stddev); },
            [x](const Lognormal& d) {
                return x <= 0.0 ? 0.0 : gaussian::cdf((std::log(x) - d.logMean) / d.logStd);
            },
            [x](const Gumbel& d) { return std::exp(-std::exp(-(x - d.location) / d.scale)); },
            [x](const GumbelMin& d) { return -std::expm1(-std::exp((x - d.location) / d.scale)); },
            [x](const Pareto& d) { return x <= d.xMin ? 0.0 : 1.0 - std::pow(d.xMin / x, d.alpha); },
            [x](const Mixture& d) {
                double total = 0.0;
                for (const auto& c : d.components) total += c.weight * cdf(c.distribution, x);
                return total;
            },
        },
        spec.variant());
}

double draw(const DistributionSpec& spec, RandomStream& stream) {
    return std::visit(
        Overloaded{
            [&stream](const Normal& d) { return d.mean + d.stddev * gaussian::quantile(stream.uniform()); },
            [&stream](const Lognormal& d) {
                return std::exp(d.logMean + d.logStd * gaussian::quantile(stream.uniform()));
            },
            [&stream](const Gumbel& d) { return d.location - d.scale * std::log(-std::log(stream.uniform())); },
            [&stream](const GumbelMin& d) {
                return d.location + d.scale * std::log(-std::log1p(-stream.uniform()));
            },
            [&stream](const Pareto& d) { return pareto_quantile(d, stream.uniform()); },
            [&stream](const Mixture& d) {
                const double branch = stream.uniform();
                return draw(pick_component(d, branch).distribution, stream);
            },
        },
        spec.variant());
}

void sample(const DistributionSpec& spec, RandomStream& stream, std::span<double> out) {
    for (double& v : out) v = draw(spec, stream);
}

std::vector<double> sample(const DistributionSpec& spec, RandomStream& stream, std::size_t n) {
    std::vector<double> out(n);
    sample(spec, stream, out);
    return out;
}

std::string describe(const DistributionSpec& spec) {
    auto g = [](double v) { return format_general(v, 6); };
    return std::visit(
        Overloaded{
            [&](const Normal& d) { return "Normal(" + g(d.mean) + ", " + g(d.stddev) + ")"; },
            [&](const Lognormal& d) { return "Lognormal(" + g(d.logMean) + ", " + g(d.logStd) + ")"; },
            [&](const Gumbel& d) { return "Gumbel(" + g(d.location) + ", " + g(d.scale) + ")"; },
            [&](const GumbelMin& d) { return "GumbelMin(" + g(d.location) + ", " + g(d.scale) + ")"; },
            [&](const Pareto& d) { return "Pareto(" + g(d.xMin) + ", " + g(d.alpha) + ")"; },
            [&](const Mixture& d) {
                std::string out;
                for (const auto& c : d.components) {
                    if (!out.empty()) out += " + ";
                    out += g(c.weight) + "*" + describe(c.distribution);
                }
                return out;
            },
        },
        spec.variant());
}

}  // namespace sevrel
