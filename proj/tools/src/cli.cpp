#include "sevrel/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "sevrel/config.hpp"
#include "sevrel/errors.hpp"
#include "sevrel/format.hpp"
#include "sevrel/gaussian.hpp"
#include "sevrel/report_io.hpp"
#include "sevrel/scenarios.hpp"
#include "sevrel/severity.hpp"
#include "table.hpp"

namespace sevrel::cli {

namespace {

struct SolveArgs {
    std::optional<double> f;
    std::optional<double> inverse;
    std::optional<double> closedForm;
};

struct ClassifyArgs {
    std::optional<double> efStar;
    std::optional<double> betaS;
};

struct SimulateArgs {
    std::string configPath;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
    std::optional<std::string> report;
};

struct ScenarioArgs {
    std::string id;
    std::optional<std::string> exportDir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
    bool list = false;
};

std::string num(double v) { return format_general(v, 12); }

std::string opt_num(const std::optional<double>& v, int digits = 6) {
    return v ? format_general(*v, digits) : std::string("-");
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    const int modes = int(a.f.has_value()) + int(a.inverse.has_value()) + int(a.closedForm.has_value());
    if (modes != 1) {
        err << "solve: give exactly one of --f, --inverse, --closed-form\n";
        return kExitUsage;
    }
    const double x = a.f ? *a.f : a.inverse ? *a.inverse : *a.closedForm;
    if (!(x > 0.0) || !std::isfinite(x)) {
        err << "solve: argument must be positive and finite, got " << format_shortest(x) << '\n';
        return kExitUsage;
    }
    if (a.inverse) {
        if (x >= gaussian::kDeficitEndpoint) {
            out << "EXTREME: beyond Gaussian endpoint 0.797884560803\n";
            return kExitOk;
        }
        out << num(gaussian::invert_deficit_map(x)) << '\n';
        return kExitOk;
    }
    // --f and --closed-form evaluate the same map; the latter reads its
    // argument as the index of a Gaussian limit state.
    out << num(gaussian::deficit_map(x)) << '\n';
    return kExitOk;
}

int cmd_classify(const ClassifyArgs& a, std::ostream& out, std::ostream& err) {
    if (a.efStar.has_value() == a.betaS.has_value()) {
        err << "classify: give exactly one of --efstar, --betas\n";
        return kExitUsage;
    }
    const double x = a.efStar ? *a.efStar : *a.betaS;
    if (!(x > 0.0) || !std::isfinite(x)) {
        err << "classify: value must be positive and finite, got " << format_shortest(x) << '\n';
        return kExitUsage;
    }
    const SeverityLevel level = a.efStar ? classify(x) : classify_by_index(x);
    out << "Level " << level_name(level) << '\n';
    out << "recommendation: " << recommendation_key(level) << " (" << recommendation_text(level) << ")\n";
    return kExitOk;
}

void print_report_table(const SeverityReport& r, const std::optional<WorkflowDecision>& decision, std::ostream& out) {
    Table t({"quantity", "value"});
    t.add_row({"N", std::to_string(r.n)});
    t.add_row({"failures", std::to_string(r.failureCount)});
    t.add_row({"p_f +/- SE", format_general(r.pf, 6) + " +/- " + format_general(r.pfStdError, 3)});
    t.add_row({"beta", r.beta ? format_general(*r.beta, 6) : "> " + format_general(r.betaLowerBound, 6)});
    t.add_row({"mean g", format_general(r.meanG, 6)});
    t.add_row({"sigma g", r.analyticVarianceFinite ? format_general(r.stdG, 6) : "does not exist"});
    t.add_row({"E_f", opt_num(r.ef)});
    std::string efStar = opt_num(r.efStar);
    if (r.efStar && r.efStarInterval) {
        efStar += "  [" + format_general(r.efStarInterval->lower, 6) + ", " +
                  format_general(r.efStarInterval->upper, 6) + "]";
    }
    t.add_row({"E_f* [95% CI]", efStar});
    t.add_row({"beta_S", r.betaS ? format_general(*r.betaS, 6) : std::string(flag_name(r.extremeFlag))});
    t.add_row({"flag", std::string(flag_name(r.extremeFlag))});
    t.add_row({"level", r.level ? "Level " + std::string(level_name(*r.level)) : "-"});
    if (decision) {
        t.add_row({"beta target", format_general(decision->betaTarget, 6)});
        t.add_row({"verdict", std::string(verdict_name(decision->verdict)) + (decision->advisory ? " (advisory)" : "")});
    }
    t.print(out);
    if (decision && !decision->message.empty()) out << decision->message << '\n';
    for (const auto& note : r.notes) out << "note: " << note << '\n';
}

int verdict_exit(const std::optional<WorkflowDecision>& decision) {
    if (!decision) return kExitOk;
    switch (decision->verdict) {
        case Verdict::RejectFrequency: return kExitRejectFrequency;
        case Verdict::ExtremeRedesign: return kExitExtremeRedesign;
        case Verdict::AcceptWithLevel: return kExitOk;
    }
    return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, const ExecutionOptions& exec, std::ostream& out, std::ostream& err) {
    std::optional<AnalysisConfig> loaded;
    try {
        loaded = load_analysis_config(a.configPath);
        AnalysisConfig& config = *loaded;
        if (a.seed) config.simulation.masterSeed = *a.seed;
        if (a.n) {
            config.simulation.sampleCount = *a.n;
            config.simulation.chunkSize = std::min(config.simulation.chunkSize, std::max<std::size_t>(1, *a.n));
        }
        config.simulation.validate();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
    AnalysisConfig& config = *loaded;

    const SimulationSummary summary = simulate(config.model, config.simulation, exec);
    AnalysisOptions options;
    options.bootstrapResamples = config.bootstrapResamples;
    options.bootstrapSeed = config.simulation.masterSeed;
    const SeverityReport report = analyze(summary, config.model.analytic_moments(), options);
    std::optional<WorkflowDecision> decision;
    if (config.betaTarget) decision = assess(report, *config.betaTarget, config.maxAcceptableLevel);

    // Render everything before touching the filesystem.
    ReportContext ctx;
    ctx.model = &config.model;
    ctx.config = &config.simulation;
    ctx.summary = &summary;
    ctx.decision = decision ? &*decision : nullptr;
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    const std::string reportPath = a.report ? *a.report
                                   : config.output.report
                                       ? *config.output.report
                                       : std::filesystem::path(a.configPath).stem().string() + ".report.json";
    files.emplace_back(reportPath, report_to_json(report, ctx));
    if (config.output.deficitCsv) {
        std::ostringstream csv;
        write_deficit_csv(csv, summary.failureDeficits);
        files.emplace_back(*config.output.deficitCsv, csv.str());
    }
    if (config.output.histogramCsv) {
        auto [g, d] = histograms(config.model, config.simulation, summary, exec, 200, 100);
        std::ostringstream csv;
        write_histogram_csv(csv, g, d);
        files.emplace_back(*config.output.histogramCsv, csv.str());
    }

    print_report_table(report, decision, out);
    try {
        for (const auto& [path, content] : files) {
            write_file_atomically(path, content);
            out << "wrote " << path.string() << '\n';
        }
    } catch (const std::exception& e) {
        err << "output error: " << e.what() << '\n';
        return kExitIoError;
    }
    return verdict_exit(decision);
}

int cmd_scenario(const ScenarioArgs& a, const ExecutionOptions& exec, std::ostream& out, std::ostream& err) {
    if (a.list) {
        for (const auto& id : builtin_ids()) out << id << "  " << builtin(id).title << '\n';
        return kExitOk;
    }
    if (a.id.empty()) {
        err << "scenario: missing scenario id (see --list)\n";
        return kExitUsage;
    }
    std::optional<Scenario> found;
    try {
        found = builtin(a.id);
    } catch (const InvalidArgument& e) {
        err << "scenario: " << e.what() << '\n';
        return kExitUsage;
    }
    const Scenario& scenario = *found;

    RunOptions options;
    options.seed = a.seed;
    options.sampleCount = a.n;
    options.exec = exec;
    options.histograms = a.exportDir.has_value();
    const ScenarioResult result = run(scenario, options);

    out << scenario.id << ": " << scenario.title << '\n';
    out << "N = " << result.config.sampleCount << ", seed = " << result.config.masterSeed;
    if (result.calibratedShift) out << ", calibrated shift = " << format_general(*result.calibratedShift, 8);
    out << "\n\n";
    print_report_table(result.report, result.decision, out);
    out << '\n';

    Table t({"metric", "reference", "computed", "tolerance", "status", "source"});
    for (const auto& row : expectation_rows(result)) {
        t.add_row({row.metric, row.expected, row.computed, row.tolerance, row.pass ? "PASS" : "FAIL", row.source});
    }
    t.print(out);

    if (a.exportDir) {
        try {
            std::filesystem::create_directories(*a.exportDir);
            for (ExportFormat f : {ExportFormat::ReportJson, ExportFormat::HistogramCsv, ExportFormat::DeficitCsv,
                                   ExportFormat::FcurveCsv}) {
                const auto path = std::filesystem::path(*a.exportDir) / export_default_filename(f);
                export_result(result, f, path);
                out << "wrote " << path.string() << '\n';
            }
        } catch (const std::exception& e) {
            err << "export error: " << e.what() << '\n';
            return kExitIoError;
        }
    }
    return result.passed() ? kExitOk : kExitExpectationFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Severity-aware structural reliability analysis"};
    app.name("sevrel");
    app.require_subcommand(1);

    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (0: SEVREL_THREADS or hardware concurrency)");

    SolveArgs solve;
    auto* solveCmd = app.add_subcommand("solve", "Evaluate or invert the Gaussian deficit map");
    solveCmd->add_option("--f", solve.f, "Print F(b) for an index b > 0");
    solveCmd->add_option("--inverse", solve.inverse, "Print the index b with F(b) = E_f*");
    solveCmd->add_option("--closed-form", solve.closedForm, "Print E_f* of a Gaussian limit state with this beta");

    ClassifyArgs classifyArgs;
    auto* classifyCmd = app.add_subcommand("classify", "Severity level of a normalized deficit or severity index");
    classifyCmd->add_option("--efstar", classifyArgs.efStar, "Normalized expected failure deficit");
    classifyCmd->add_option("--betas", classifyArgs.betaS, "Severity-aware reliability index");

    SimulateArgs sim;
    auto* simCmd = app.add_subcommand("simulate", "Run a Monte Carlo analysis from a JSON config");
    simCmd->add_option("config", sim.configPath, "Analysis config file")->required();
    simCmd->add_option("--seed", sim.seed, "Override simulation.masterSeed");
    simCmd->add_option("--n", sim.n, "Override simulation.sampleCount")->check(CLI::PositiveNumber);
    simCmd->add_option("--report", sim.report, "Report path (default: output.report or <config>.report.json)");

    ScenarioArgs sc;
    auto* scCmd = app.add_subcommand("scenario", "Reproduce a built-in scenario and check its expectations");
    scCmd->add_option("id", sc.id, "Scenario id");
    scCmd->add_option("--export", sc.exportDir, "Write report.json, histogram.csv, deficits.csv, fcurve.csv here");
    scCmd->add_option("--seed", sc.seed, "Override the scenario seed");
    scCmd->add_option("--n", sc.n, "Override the sample count")->check(CLI::PositiveNumber);
    scCmd->add_flag("--list", sc.list, "List scenario ids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        if (app.got_subcommand(solveCmd)) err << solveCmd->help();
        return kExitUsage;
    }

    ExecutionOptions exec;
    exec.threads = threads;
    try {
        if (*solveCmd) return cmd_solve(solve, out, err);
        if (*classifyCmd) return cmd_classify(classifyArgs, out, err);
        if (*simCmd) return cmd_simulate(sim, exec, out, err);
        if (*scCmd) return cmd_scenario(sc, exec, out, err);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"sevrel"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sevrel::cli
