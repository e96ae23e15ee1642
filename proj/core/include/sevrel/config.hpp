#pragma once

// JSON analysis configuration (schema: docs/config.md). Every object rejects
// unknown keys; errors carry a JSON pointer or a line/column position.

#include <optional>
#include <string>
#include <string_view>

#include "sevrel/distributions.hpp"
#include "sevrel/limit_state.hpp"
#include "sevrel/severity.hpp"

namespace sevrel {

struct OutputSpec {
    std::optional<std::string> report;        // JSON report path
    std::optional<std::string> histogramCsv;  // g and deficit histograms
    std::optional<std::string> deficitCsv;    // stored failure deficits
};

struct AnalysisConfig {
    LimitStateModel model;
    SimulationConfig simulation;
    std::size_t bootstrapResamples = 200;
    std::optional<double> betaTarget;
    SeverityLevel maxAcceptableLevel = SeverityLevel::High;
    OutputSpec output;
};

// Throws ConfigError.
AnalysisConfig parse_analysis_config(std::string_view text);

// Reads and parses a file. Throws ConfigError (including for unreadable files).
AnalysisConfig load_analysis_config(const std::string& path);

// Distribution <-> JSON text in the config's "distribution" object format.
DistributionSpec parse_distribution(std::string_view jsonText);
std::string distribution_to_json(const DistributionSpec& spec);

std::string analysis_config_to_json(const AnalysisConfig& config);

}  // namespace sevrel
