#pragma once

// Canned reference experiments and the diagnostic-grid data sets. Each
// scenario fixes its model, sample size and seed, and carries expectations
// with the reference values and tolerances they are checked against.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sevrel/limit_state.hpp"
#include "sevrel/report_io.hpp"
#include "sevrel/severity.hpp"

namespace sevrel {

enum class ExpectationKind {
    Near,                 // |metric - value| <= tolerance
    WithinStdErrors,      // |pf - value| <= tolerance * pfStdError
    FlagIs,               // extreme flag equals `flag`
    LevelIs,              // severity level equals `level`
    Defined,              // metric has a value
    Absent,               // metric has no value
    GreaterThanReference, // metric exceeds the reference scenario's metric
    MoreSevereThanReference, // DeficitBeyondEndpoint, or betaS below the reference betaS
    GreaterThanMetric,    // metric exceeds `otherMetric`
};

struct Expectation {
    std::string metric;
    ExpectationKind kind = ExpectationKind::Near;
    double value = 0.0;
    double tolerance = 0.0;
    ExtremeFlag flag = ExtremeFlag::None;
    SeverityLevel level = SeverityLevel::Mild;
    std::string otherMetric;
    // Where the reference value comes from.
    std::string source;
};

struct Scenario {
    std::string id;
    std::string title;
    LimitStateModel model;
    SimulationConfig config;
    std::optional<double> calibrateToPf;
    std::optional<double> betaTarget;
    SeverityLevel maxAcceptableLevel = SeverityLevel::High;
    std::optional<std::string> reference;
    std::vector<Expectation> expectations;
};

const std::vector<std::string>& builtin_ids();

// Throws InvalidArgument for an unknown id.
Scenario builtin(std::string_view id);

struct ExpectationCheck {
    Expectation expectation;
    std::optional<double> computed;
    std::string computedText;
    bool pass = false;
};

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> sampleCount;
    ExecutionOptions exec;
    bool histograms = true;
    std::size_t gBins = 200;
    std::size_t deficitBins = 100;
};

struct ScenarioResult {
    std::string id;
    LimitStateModel model;  // after calibration
    SimulationConfig config;
    std::optional<double> calibratedShift;
    std::optional<double> calibrationTargetPf;
    SimulationSummary summary;
    SeverityReport report;
    std::optional<WorkflowDecision> decision;
    Histogram gHistogram;
    Histogram deficitHistogram;
    std::optional<SeverityReport> referenceReport;
    std::vector<ExpectationCheck> checks;

    bool passed() const;
};

ScenarioResult run(const Scenario& scenario, const RunOptions& options = {});

// Value of a named report metric: pf, beta, betaMoment, ef, efStar, betaS,
// analyticBeta, betaSRelativeGap, gaussianBenchmarkEfStar.
std::optional<double> metric_value(const SeverityReport& report, const LimitStateModel& model,
                                   std::string_view metric);

// g histogram: uniform bins over [minG, maxG], every sample counted.
// Deficit histogram: logarithmic bins when max/min deficit > 1e3, uniform
// otherwise; every failure counted. Regenerates the sample deterministically.
std::pair<Histogram, Histogram> histograms(const LimitStateModel& model, const SimulationConfig& config,
                                           const SimulationSummary& summary, const ExecutionOptions& exec,
                                           std::size_t gBins, std::size_t deficitBins);

enum class ExportFormat { ReportJson, HistogramCsv, DeficitCsv, FcurveCsv };

std::optional<ExportFormat> parse_export_format(std::string_view name);
std::string_view export_format_name(ExportFormat format);
std::string_view export_default_filename(ExportFormat format);

// Throws std::runtime_error for unwritable paths.
void export_result(const ScenarioResult& result, ExportFormat format, const std::filesystem::path& path);

std::vector<ExpectationRow> expectation_rows(const ScenarioResult& result);

std::string describe(const Expectation& expectation);
std::string tolerance_text(const Expectation& expectation);

}  // namespace sevrel
