#include "sevrel/severity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "sevrel/errors.hpp"
#include "sevrel/format.hpp"
#include "sevrel/gaussian.hpp"
#include "sevrel/random.hpp"

namespace sevrel {

namespace {

struct LevelInfo {
    std::string_view name;
    std::string_view roman;
    std::string_view label;
    std::string_view key;
    std::string_view text;
};

constexpr LevelInfo kLevels[] = {
    {"I: Mild", "I", "mild", "no-mitigation", "Shallow failures; the classical index governs and no extra mitigation is needed."},
    {"II: Moderate", "II", "moderate", "enhanced-qa", "Noticeable failure depth; strengthen quality assurance, monitoring optional."},
    {"III: High", "III", "high", "reinforce-or-redundancy", "Deep failures; add reinforcement or redundancy."},
    {"IV: Critical", "IV", "critical", "strengthen-or-redesign", "Close to the Gaussian limit; strengthen or redesign the member."},
    {"V: Extreme", "V", "extreme", "conceptual-redesign", "Beyond the Gaussian-calibrated domain; revisit the concept and the load model."},
};

const LevelInfo& info(SeverityLevel level) { return kLevels[static_cast<int>(level) - 1]; }

std::string lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Maps u64 to [0, m) without modulo bias worth mentioning at these sizes.
__extension__ using u128 = unsigned __int128;

std::size_t bounded(std::uint64_t x, std::size_t m) {
    return static_cast<std::size_t>((static_cast<u128>(x) * m) >> 64);
}

}  // namespace

std::string_view level_name(SeverityLevel level) { return info(level).name; }
std::string_view level_roman(SeverityLevel level) { return info(level).roman; }
std::string_view recommendation_key(SeverityLevel level) { return info(level).key; }
std::string_view recommendation_text(SeverityLevel level) { return info(level).text; }

std::optional<SeverityLevel> parse_level(std::string_view text) {
    const std::string t = lower(text);
    for (int i = 0; i < 5; ++i) {
        const LevelInfo& l = kLevels[i];
        if (t == lower(l.name) || t == lower(l.roman) || t == l.label || t == std::to_string(i + 1)) {
            return static_cast<SeverityLevel>(i + 1);
        }
    }
    return std::nullopt;
}

std::string_view flag_name(ExtremeFlag flag) {
    switch (flag) {
        case ExtremeFlag::None: return "none";
        case ExtremeFlag::DeficitBeyondEndpoint: return "deficit-beyond-endpoint";
        case ExtremeFlag::VarianceInfiniteOrUnstable: return "variance-infinite-or-unstable";
    }
    return "none";
}

const SeverityThresholds& severity_thresholds() {
    static const SeverityThresholds thresholds{gaussian::deficit_map(3.0), gaussian::deficit_map(2.0),
                                               gaussian::deficit_map(1.0), gaussian::kDeficitEndpoint};
    return thresholds;
}

double beta_from_pf(double pf) {
    if (pf == 0.0) {
        throw DomainError("p_f = 0: no failures observed, beta is undefined; with N samples beta > -Phi^-1(1/N)");
    }
    if (!(pf > 0.0 && pf < 1.0)) throw DomainError("beta requires 0 < p_f < 1, got " + format_general(pf, 17));
    return -gaussian::quantile(pf);
}

double beta_lower_bound(std::size_t n) {
    if (n < 2) throw DomainError("beta lower bound needs n >= 2");
    return -gaussian::quantile(1.0 / static_cast<double>(n));
}

double expected_failure_deficit(const SimulationSummary& summary) {
    if (summary.failureCount == 0) throw NoFailuresObserved(summary.n);
    return summary.deficitSum / static_cast<double>(summary.failureCount);
}

NormalizedDeficit normalized_deficit(const SimulationSummary& summary, const MomentReport& finiteness) {
    const double ef = expected_failure_deficit(summary);
    if (!finiteness.varianceFinite) return {std::nullopt, ExtremeFlag::VarianceInfiniteOrUnstable};
    const double sigma = summary.stdG();
    if (!(sigma > 0.0)) return {std::nullopt, ExtremeFlag::VarianceInfiniteOrUnstable};
    return {ef / sigma, ExtremeFlag::None};
}

SeverityIndex severity_index(double efStar) {
    if (!(efStar > 0.0)) {
        throw DomainError("severity index requires E_f* > 0, got " + format_general(efStar, 17));
    }
    if (efStar >= gaussian::kDeficitEndpoint) return {std::nullopt, ExtremeFlag::DeficitBeyondEndpoint};
    return {gaussian::invert_deficit_map(efStar), ExtremeFlag::None};
}

double gaussian_closed_form(double beta) { return gaussian::deficit_map(beta); }

SeverityLevel classify(double efStar) {
    if (!(efStar > 0.0)) throw DomainError("classification requires E_f* > 0, got " + format_general(efStar, 17));
    const SeverityThresholds& t = severity_thresholds();
    if (efStar < t.moderate) return SeverityLevel::Mild;
    if (efStar < t.high) return SeverityLevel::Moderate;
    if (efStar < t.critical) return SeverityLevel::High;
    if (efStar < t.extreme) return SeverityLevel::Critical;
    return SeverityLevel::Extreme;
}

SeverityLevel classify(ExtremeFlag flag) {
    if (flag == ExtremeFlag::None) throw InvalidArgument("classify(flag) needs an extreme flag");
    return SeverityLevel::Extreme;
}

SeverityLevel classify(const NormalizedDeficit& deficit) {
    if (deficit.flag != ExtremeFlag::None) return classify(deficit.flag);
    if (!deficit.value) throw InvalidArgument("normalized deficit carries neither a value nor a flag");
    return classify(*deficit.value);
}

SeverityLevel classify_by_index(double betaS) {
    if (!(betaS > 0.0)) throw DomainError("classification requires beta_S > 0, got " + format_general(betaS, 17));
    return classify(gaussian::deficit_map(betaS));
}

Interval bootstrap_normalized_deficit(std::span<const double> deficits, double sigma, std::size_t resamples,
                                      double confidence, std::uint64_t seed) {
    if (deficits.empty() || resamples == 0) throw InvalidArgument("bootstrap needs deficits and resamples");
    RandomStream stream(seed, kAuxiliaryStreamBase + 0xb007);
    std::vector<double> stats;
    stats.reserve(resamples);
    const std::size_t m = deficits.size();
    for (std::size_t b = 0; b < resamples; ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) sum += deficits[bounded(stream.next_u64(), m)];
        stats.push_back(sum / static_cast<double>(m) / sigma);
    }
    const double alpha = 0.5 * (1.0 - confidence);
    return {sample_quantile(stats, alpha), sample_quantile(stats, 1.0 - alpha)};
}

SeverityReport analyze(const SimulationSummary& summary, const MomentReport& finiteness,
                       const AnalysisOptions& options) {
    SeverityReport r;
    r.n = summary.n;
    r.failureCount = summary.failureCount;
    r.pf = summary.failure_fraction();
    r.pfStdError = summary.n > 0 ? std::sqrt(r.pf * (1.0 - r.pf) / static_cast<double>(summary.n)) : 0.0;
    r.meanG = summary.meanG;
    r.stdG = summary.stdG();
    r.analyticVarianceFinite = finiteness.varianceFinite;
    if (summary.n >= 2) r.betaLowerBound = beta_lower_bound(summary.n);
    if (finiteness.varianceFinite && r.stdG > 0.0) r.betaMoment = summary.meanG / r.stdG;

    if (summary.n >= 2 && !summary.robustSubsample.empty()) {
        r.robust = robust_scales(summary);
        r.stability = scale_stability(summary);
    }

    if (summary.failureCount == 0) {
        r.notes.push_back("no failures at N = " + std::to_string(summary.n) + "; p_f < 1/N bound, beta > " +
                          format_fixed(r.betaLowerBound, 4));
    } else if (summary.failureCount == summary.n) {
        r.notes.push_back("every sample failed; beta is undefined");
    } else {
        r.beta = beta_from_pf(r.pf);
        if (*r.beta > 0.0) r.gaussianBenchmarkEfStar = gaussian_closed_form(*r.beta);
    }

    if (!finiteness.varianceFinite) {
        r.extremeFlag = ExtremeFlag::VarianceInfiniteOrUnstable;
        r.notes.push_back("an input has infinite variance, so sigma_g and E_f* do not exist");
    } else if (options.scaleStabilityCheck && r.stability.unstable) {
        r.extremeFlag = ExtremeFlag::VarianceInfiniteOrUnstable;
        r.notes.push_back("sigma_g/MAD drifts by " + format_fixed(100.0 * r.stability.drift, 1) +
                          "% between run halves; sample variance treated as unstable");
    }

    if (summary.failureCount > 0) {
        r.ef = expected_failure_deficit(summary);
        if (r.extremeFlag == ExtremeFlag::None && r.stdG > 0.0) {
            r.efStar = *r.ef / r.stdG;
            const SeverityIndex index = severity_index(*r.efStar);
            r.betaS = index.betaS;
            r.extremeFlag = index.flag;
            if (index.flag == ExtremeFlag::DeficitBeyondEndpoint) {
                r.notes.push_back("E_f* exceeds the Gaussian endpoint 0.797884560803; no Gaussian-equivalent index");
            }
            if (options.bootstrapResamples > 0 && !summary.failureDeficits.empty()) {
                r.efStarInterval = bootstrap_normalized_deficit(summary.failureDeficits, r.stdG,
                                                                options.bootstrapResamples, options.confidence,
                                                                options.bootstrapSeed);
                const auto lo = gaussian::DeficitDomain::try_make(r.efStarInterval->lower);
                const auto hi = gaussian::DeficitDomain::try_make(r.efStarInterval->upper);
                if (lo && hi) {
                    r.betaSInterval = Interval{gaussian::invert_deficit_map(*hi), gaussian::invert_deficit_map(*lo)};
                }
            }
        }
    }

    if (r.extremeFlag != ExtremeFlag::None) {
        r.level = SeverityLevel::Extreme;
    } else if (r.efStar) {
        r.level = classify(*r.efStar);
    }
    return r;
}

std::string_view verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::RejectFrequency: return "reject-frequency";
        case Verdict::ExtremeRedesign: return "extreme-redesign";
        case Verdict::AcceptWithLevel: return "accept";
    }
    return "reject-frequency";
}

WorkflowDecision assess(const SeverityReport& report, double betaTarget, SeverityLevel maxAcceptableLevel) {
    if (!(betaTarget > 0.0)) throw DomainError("target reliability index must be > 0");
    WorkflowDecision d;
    d.betaTarget = betaTarget;
    d.maxAcceptableLevel = maxAcceptableLevel;

    if (report.beta) {
        d.frequencyPass = *report.beta >= betaTarget;
    } else if (report.failureCount == 0) {
        // Only the lower bound is known.
        d.frequencyPass = report.betaLowerBound >= betaTarget;
    }
    if (!d.frequencyPass) {
        d.verdict = Verdict::RejectFrequency;
        d.message = report.beta ? "beta " + format_fixed(*report.beta, 4) + " < target " + format_fixed(betaTarget, 4)
                                : "frequency requirement cannot be demonstrated at this sample size";
        return d;
    }

    d.severityLevel = report.level;
    if (report.level == SeverityLevel::Extreme) {
        d.verdict = Verdict::ExtremeRedesign;
        d.message = "frequency check passed but severity is V: Extreme";
        return d;
    }
    d.verdict = Verdict::AcceptWithLevel;
    if (!report.level) {
        d.message = "frequency check passed; no failures observed, severity not assessable at this N";
        return d;
    }
    d.advisory = *report.level > maxAcceptableLevel;
    d.message = "frequency check passed; severity " + std::string(level_name(*report.level));
    if (d.advisory) d.message += " exceeds the acceptable level " + std::string(level_name(maxAcceptableLevel));
    return d;
}

}  // namespace sevrel
