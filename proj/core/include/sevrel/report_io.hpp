#pragma once

// Persistent formats: the versioned JSON report and the CSV exports
// (comma-separated, header row, 17 significant digits, '.' decimal point).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sevrel/limit_state.hpp"
#include "sevrel/severity.hpp"

namespace sevrel {

inline constexpr int kReportSchemaVersion = 1;

struct Histogram {
    std::vector<double> edges;          // strictly increasing, counts.size() + 1 entries
    std::vector<std::uint64_t> counts;
    bool logarithmic = false;

    std::uint64_t total() const;
};

// Optional scenario-level additions to a report.
struct ExpectationRow {
    std::string metric;
    std::string expected;
    std::string computed;
    std::string tolerance;
    std::string source;
    bool pass = false;
};

struct ReportContext {
    const LimitStateModel* model = nullptr;
    const SimulationConfig* config = nullptr;
    const SimulationSummary* summary = nullptr;
    const WorkflowDecision* decision = nullptr;
    std::optional<std::string> scenarioId;
    std::optional<double> calibratedShift;
    std::optional<double> calibrationTargetPf;
    const std::vector<ExpectationRow>* expectations = nullptr;
};

// Pretty-printed JSON with "schemaVersion": 1; reals use shortest round-trip
// formatting and undefined values are null.
std::string report_to_json(const SeverityReport& report, const ReportContext& context = {});

void write_histogram_csv(std::ostream& out, const Histogram& gHistogram, const Histogram& deficitHistogram);
void write_deficit_csv(std::ostream& out, std::span<const double> deficits);

// (b, F(b)) for b = 0.05, 0.06, ..., 5.00 with the level thresholds marked.
void write_fcurve_csv(std::ostream& out);

// CSV real: 17 significant digits.
std::string csv_real(double value);

// Writes `content` to `path` via a temporary sibling and rename, so a failed
// write never leaves a partial file. Throws std::runtime_error.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace sevrel
