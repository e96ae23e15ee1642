#pragma once

// Severity metrics on top of a simulation summary: failure probability and
// classical index, expected failure deficit E_f, its normalization E_f*, the
// severity-aware index beta_S, the five-level classification and the
// frequency-then-severity design check.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sevrel/distributions.hpp"
#include "sevrel/limit_state.hpp"

namespace sevrel {

enum class SeverityLevel { Mild = 1, Moderate = 2, High = 3, Critical = 4, Extreme = 5 };

// "I: Mild" ... "V: Extreme".
std::string_view level_name(SeverityLevel level);
// "I" ... "V".
std::string_view level_roman(SeverityLevel level);
// Short machine key and one-line recommended action for each level.
std::string_view recommendation_key(SeverityLevel level);
std::string_view recommendation_text(SeverityLevel level);

// Accepts "II", "2", "II: Moderate" or "moderate" (case-insensitive).
std::optional<SeverityLevel> parse_level(std::string_view text);

enum class ExtremeFlag { None, DeficitBeyondEndpoint, VarianceInfiniteOrUnstable };

// "none", "deficit-beyond-endpoint", "variance-infinite-or-unstable".
std::string_view flag_name(ExtremeFlag flag);

// Level boundaries on E_f*: F(3), F(2), F(1) and the Gaussian endpoint.
struct SeverityThresholds {
    double moderate;  // F(3): lower bound of level II
    double high;      // F(2): lower bound of level III
    double critical;  // F(1): lower bound of level IV
    double extreme;   // 2/sqrt(2*pi): lower bound of level V
};

const SeverityThresholds& severity_thresholds();

// -Phi^{-1}(pf). Throws DomainError outside (0, 1); for pf = 0 the message
// carries the 1/N lower-bound hint.
double beta_from_pf(double pf);

// Index implied by one failure in n samples, -Phi^{-1}(1/n).
double beta_lower_bound(std::size_t n);

// deficitSum / failureCount. Throws NoFailuresObserved when failureCount = 0.
double expected_failure_deficit(const SimulationSummary& summary);

struct NormalizedDeficit {
    std::optional<double> value;
    ExtremeFlag flag = ExtremeFlag::None;
};

// E_f / sigma_hat when `finiteness` reports a finite variance of g; otherwise
// no value and VarianceInfiniteOrUnstable. Throws NoFailuresObserved.
NormalizedDeficit normalized_deficit(const SimulationSummary& summary, const MomentReport& finiteness);

struct SeverityIndex {
    std::optional<double> betaS;
    ExtremeFlag flag = ExtremeFlag::None;
};

// beta_S for efStar inside the Gaussian domain, DeficitBeyondEndpoint at or
// above the endpoint. Throws DomainError for efStar <= 0.
SeverityIndex severity_index(double efStar);

// E_f* of a Gaussian limit state with reliability index beta: F(beta).
double gaussian_closed_form(double beta);

// Throws DomainError for efStar <= 0 (or NaN).
SeverityLevel classify(double efStar);
// Extreme for any set flag; InvalidArgument for ExtremeFlag::None.
SeverityLevel classify(ExtremeFlag flag);
SeverityLevel classify(const NormalizedDeficit& deficit);
// Level from a severity-aware index, defined as classify(F(betaS)) so both
// classifications agree at every point. Throws DomainError for betaS <= 0.
SeverityLevel classify_by_index(double betaS);

struct Interval {
    double lower;
    double upper;
};

struct AnalysisOptions {
    std::size_t bootstrapResamples = 200;
    double confidence = 0.95;
    std::uint64_t bootstrapSeed = 1;
    // Also flag VarianceInfiniteOrUnstable when sigma/MAD drifts between run halves.
    bool scaleStabilityCheck = true;
};

struct SeverityReport {
    std::size_t n = 0;
    std::size_t failureCount = 0;
    double pf = 0.0;
    double pfStdError = 0.0;
    std::optional<double> beta;
    double betaLowerBound = 0.0;
    std::optional<double> betaMoment;
    double meanG = 0.0;
    double stdG = 0.0;
    std::optional<double> ef;
    std::optional<double> efStar;
    std::optional<Interval> efStarInterval;
    std::optional<double> betaS;
    std::optional<Interval> betaSInterval;
    std::optional<double> gaussianBenchmarkEfStar;
    ExtremeFlag extremeFlag = ExtremeFlag::None;
    std::optional<SeverityLevel> level;
    bool analyticVarianceFinite = true;
    std::optional<RobustScales> robust;
    ScaleStability stability;
    std::vector<std::string> notes;
};

SeverityReport analyze(const SimulationSummary& summary, const MomentReport& finiteness,
                       const AnalysisOptions& options = {});

// Percentile-bootstrap interval of mean(deficits) / sigma.
Interval bootstrap_normalized_deficit(std::span<const double> deficits, double sigma, std::size_t resamples,
                                      double confidence, std::uint64_t seed);

enum class Verdict { RejectFrequency, ExtremeRedesign, AcceptWithLevel };

// "reject-frequency", "extreme-redesign", "accept".
std::string_view verdict_name(Verdict verdict);

struct WorkflowDecision {
    double betaTarget = 0.0;
    SeverityLevel maxAcceptableLevel = SeverityLevel::High;
    bool frequencyPass = false;
    std::optional<SeverityLevel> severityLevel;
    Verdict verdict = Verdict::RejectFrequency;
    // Level worse than maxAcceptableLevel on an accepted design.
    bool advisory = false;
    std::string message;
};

// Frequency check first (beta >= betaTarget); severity is only evaluated when
// it passes. Throws DomainError for betaTarget <= 0.
WorkflowDecision assess(const SeverityReport& report, double betaTarget,
                        SeverityLevel maxAcceptableLevel = SeverityLevel::High);

}  // namespace sevrel
