#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "sevrel/errors.hpp"
#include "sevrel/gaussian.hpp"
#include "sevrel/scenarios.hpp"

using namespace sevrel;

namespace {

RunOptions quick(std::size_t n) {
    RunOptions o;
    o.sampleCount = n;
    return o;
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("every builtin id resolves and carries expectations") {
    for (const auto& id : builtin_ids()) {
        const Scenario s = builtin(id);
        CHECK(s.id == id);
        CHECK_FALSE(s.title.empty());
        CHECK_FALSE(s.expectations.empty());
        for (const auto& e : s.expectations) CHECK_FALSE(e.source.empty());
    }
    CHECK_THROWS_AS(builtin("example4"), InvalidArgument);
}

TEST_CASE("builtin models") {
    const Scenario e1 = builtin("example1-gaussian");
    CHECK(e1.config.sampleCount == 5'000'000);
    const MomentReport m = e1.model.analytic_moments();
    CHECK(m.mean / std::sqrt(m.variance) == doctest::Approx(2.7735).epsilon(2e-5));

    const Scenario cs = builtin("case-study");
    CHECK(cs.config.sampleCount == 2'000'000);
    CHECK(cs.betaTarget == 3.5);
    CHECK(cs.model.terms().size() == 3);
    CHECK(cs.model.terms()[1].coefficient == -1.2);
    CHECK(cs.model.terms()[2].coefficient == -1.6);

    CHECK_FALSE(builtin("example3-extreme").model.analytic_moments().varianceFinite);
    CHECK(builtin("scenarioA").calibrateToPf == 0.01);
    CHECK(builtin("scenarioB").reference == std::optional<std::string>("scenarioA"));
}

TEST_CASE("metric lookup") {
    const Scenario s = builtin("example1-gaussian");
    SeverityReport r;
    r.beta = 2.0;
    r.betaS = 2.2;
    r.pf = 0.02;
    CHECK(metric_value(r, s.model, "beta") == 2.0);
    CHECK(*metric_value(r, s.model, "betaSRelativeGap") == doctest::Approx(0.1));
    CHECK(*metric_value(r, s.model, "analyticBeta") == doctest::Approx(2.7735009811261456).epsilon(1e-15));
    CHECK_FALSE(metric_value(r, s.model, "efStar").has_value());
    CHECK_THROWS_AS(metric_value(r, s.model, "bogus"), InvalidArgument);
}

TEST_CASE("gaussian scenario at reduced size") {
    const ScenarioResult r = run(builtin("figure-grid-gaussian"), quick(400'000));
    CHECK(r.config.sampleCount == 400'000);
    CHECK(r.checks.size() == 3);
    CHECK(r.gHistogram.total() == 400'000);
    CHECK(r.deficitHistogram.total() == r.summary.failureCount);
    const auto [lo, hi] = std::minmax_element(r.summary.failureDeficits.begin(), r.summary.failureDeficits.end());
    CHECK(r.deficitHistogram.logarithmic == (std::max(*hi, -r.summary.minG) / *lo > 1e3));
    for (std::size_t i = 1; i < r.deficitHistogram.edges.size(); ++i) {
        REQUIRE(r.deficitHistogram.edges[i] > r.deficitHistogram.edges[i - 1]);
    }
    CHECK(r.checks[0].pass);
}

TEST_CASE("heavy-tailed deficits get logarithmic bins") {
    RunOptions o = quick(400'000);
    const ScenarioResult r = run(builtin("example3-extreme"), o);
    CHECK(r.report.extremeFlag == ExtremeFlag::VarianceInfiniteOrUnstable);
    CHECK(r.deficitHistogram.total() == r.summary.failureCount);
    CHECK(r.deficitHistogram.logarithmic);
    REQUIRE(r.decision.has_value());
    CHECK(r.decision->verdict == Verdict::ExtremeRedesign);
}

TEST_CASE("calibrated pair keeps its ordering at reduced size") {
    const ScenarioResult b = run(builtin("scenarioB"), quick(300'000));
    REQUIRE(b.calibratedShift.has_value());
    REQUIRE(b.referenceReport.has_value());
    CHECK(b.passed());
}

TEST_CASE("runs are deterministic for a seed") {
    RunOptions o = quick(100'000);
    o.seed = 9;
    o.histograms = false;
    const ScenarioResult a = run(builtin("example2-mild"), o);
    const ScenarioResult b = run(builtin("example2-mild"), o);
    CHECK(a.report.pf == b.report.pf);
    CHECK(a.report.efStar == b.report.efStar);
    o.seed = 10;
    CHECK(run(builtin("example2-mild"), o).report.pf != a.report.pf);
}

TEST_CASE("export formats") {
    CHECK(parse_export_format("report-json") == ExportFormat::ReportJson);
    CHECK_FALSE(parse_export_format("xml").has_value());
    CHECK(export_format_name(ExportFormat::FcurveCsv) == "fcurve-csv");

    const auto dir = std::filesystem::temp_directory_path() / "sevrel-scenario-export-test";
    std::filesystem::create_directories(dir);
    const ScenarioResult r = run(builtin("case-study"), quick(200'000));
    for (ExportFormat f :
         {ExportFormat::ReportJson, ExportFormat::HistogramCsv, ExportFormat::DeficitCsv, ExportFormat::FcurveCsv}) {
        const auto path = dir / export_default_filename(f);
        export_result(r, f, path);
        CHECK(std::filesystem::file_size(path) > 0);
    }
    std::ifstream in(dir / "report.json");
    const auto j = nlohmann::json::parse(in);
    CHECK(j.at("scenario") == "case-study");
    CHECK(j.at("expectations").size() == r.checks.size());
    CHECK(j.at("assessment").at("maxAcceptableLevel") == "II: Moderate");
    std::filesystem::remove_all(dir);
}

TEST_CASE("expectation descriptions") {
    Expectation e;
    e.kind = ExpectationKind::Near;
    e.value = 2.7748;
    e.tolerance = 0.03;
    CHECK(describe(e) == "2.7748");
    CHECK(tolerance_text(e) == "+/- 0.03");
    e.kind = ExpectationKind::LevelIs;
    e.level = SeverityLevel::High;
    CHECK(describe(e) == "III: High");
    CHECK(tolerance_text(e) == "-");
}

}
