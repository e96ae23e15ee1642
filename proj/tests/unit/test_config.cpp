#include <doctest.h>

#include <string>

#include "sevrel/config.hpp"
#include "sevrel/errors.hpp"

using namespace sevrel;

namespace {

const char* kMinimal = R"({
  "model": { "terms": [
    { "name": "R", "distribution": { "type": "normal", "mean": 10, "stddev": 1 } },
    { "name": "S", "coefficient": -1, "distribution": { "type": "gumbel", "location": 2, "scale": 0.6 } }
  ] }
})";

std::string where_of(std::string_view text) {
    try {
        parse_analysis_config(text);
    } catch (const ConfigError& e) {
        return e.where();
    }
    return "no error";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config takes defaults") {
    const AnalysisConfig c = parse_analysis_config(kMinimal);
    REQUIRE(c.model.terms().size() == 2);
    CHECK(c.model.terms()[0].coefficient == 1.0);
    CHECK(c.model.terms()[1].distribution == DistributionSpec(Gumbel{2, 0.6}));
    CHECK(c.simulation.sampleCount == 1'000'000);
    CHECK(c.simulation.chunkSize == 65'536);
    CHECK(c.bootstrapResamples == 200);
    CHECK_FALSE(c.betaTarget.has_value());
    CHECK(c.maxAcceptableLevel == SeverityLevel::High);
    CHECK_FALSE(c.output.report.has_value());
}

TEST_CASE("full config") {
    const AnalysisConfig c = parse_analysis_config(R"({
      "model": { "terms": [
        { "name": "R", "distribution": { "type": "lognormal", "median": 1520, "cov": 0.1 } },
        { "name": "L", "coefficient": -1.6, "distribution": { "type": "mixture", "components": [
          { "weight": 0.9995, "distribution": { "type": "gumbel-min", "location": 150, "scale": 30 } },
          { "weight": 0.0005, "distribution": { "type": "pareto", "xMin": 500, "alpha": 3 } } ] } }
        ], "shift": -2.5 },
      "simulation": { "sampleCount": 1000, "masterSeed": 42, "chunkSize": 100,
                      "failureReservoirCap": 10, "robustSubsampleCap": 20, "bootstrapResamples": 50 },
      "assessment": { "betaTarget": 3.5, "maxAcceptableLevel": "moderate" },
      "output": { "report": "r.json", "histogramCsv": "h.csv", "deficitCsv": "d.csv" }
    })");
    CHECK(c.model.shift() == -2.5);
    CHECK(c.model.terms()[0].distribution == lognormal_from_median_cov(1520, 0.1));
    CHECK(c.model.terms()[1].distribution.kind() == "mixture");
    CHECK(c.simulation.sampleCount == 1000);
    CHECK(c.simulation.masterSeed == 42);
    CHECK(c.simulation.chunkSize == 100);
    CHECK(c.simulation.failureReservoirCap == 10);
    CHECK(c.simulation.robustSubsampleCap == 20);
    CHECK(c.bootstrapResamples == 50);
    CHECK(c.betaTarget == 3.5);
    CHECK(c.maxAcceptableLevel == SeverityLevel::Moderate);
    CHECK(c.output.report == "r.json");
    CHECK(c.output.histogramCsv == "h.csv");
    CHECK(c.output.deficitCsv == "d.csv");
}

TEST_CASE("small sample counts shrink the default chunk") {
    const AnalysisConfig c = parse_analysis_config(R"({
      "model": { "terms": [ { "name": "R", "distribution": { "type": "normal", "mean": 1, "stddev": 1 } } ] },
      "simulation": { "sampleCount": 500 } })");
    CHECK(c.simulation.chunkSize == 500);
}

TEST_CASE("errors point at the offending location") {
    CHECK(where_of(R"({ "model": { "terms": [] }, "extra": 1 })") == "/extra");
    CHECK(where_of(R"({ "model": { "terms": [] } })") == "/model/terms");
    CHECK(where_of(R"({ "simulation": {} })") == "/");
    CHECK(where_of(R"({ "model": { "terms": [ { "name": "R", "distribution":
        { "type": "normal", "mean": 1, "stddev": 1, "sd": 2 } } ] } })") == "/model/terms/0/distribution/sd");
    CHECK(where_of(R"({ "model": { "terms": [ { "name": "R", "distribution":
        { "type": "weibull" } } ] } })") == "/model/terms/0/distribution/type");
    CHECK(where_of(R"({ "model": { "terms": [ { "name": "R", "distribution":
        { "type": "normal", "mean": "ten", "stddev": 1 } } ] } })") == "/model/terms/0/distribution/mean");
    CHECK(where_of(std::string(kMinimal).insert(1, R"("assessment": { "betaTarget": -1 },)")) ==
          "/assessment/betaTarget");
    CHECK(where_of(R"({ "model": { "terms": [ { "name": "R", "distribution":
        { "type": "normal", "mean": 1, "stddev": 1 } } ] }, "simulation": { "sampleCount": 2.5 } })") ==
          "/simulation/sampleCount");
}

TEST_CASE("syntax errors report line and column") {
    const std::string where = where_of("{\n  \"model\": {\n    \"terms\": [ , ]\n  }\n}");
    CHECK(where.rfind("line 3, column", 0) == 0);
}

TEST_CASE("invalid parameters surface as config errors") {
    CHECK(where_of(R"({ "model": { "terms": [ { "name": "R", "distribution":
        { "type": "normal", "mean": 1, "stddev": -1 } } ] } })") != "no error");
    CHECK(where_of(R"({ "model": { "terms": [ { "name": "R", "distribution": { "type": "mixture", "components": [
        { "weight": 0.5, "distribution": { "type": "normal", "mean": 1, "stddev": 1 } } ] } } ] } })") != "no error");
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_analysis_config("/nonexistent/sevrel.json"), ConfigError);
}

TEST_CASE("distribution json round trip") {
    const std::vector<DistributionSpec> specs{
        Normal{10, 1}, Lognormal{2.3, 0.2}, Gumbel{2, 0.6}, GumbelMin{150, 30}, Pareto{10, 1.5},
        Mixture{{{0.999, Normal{5, 2}}, {0.001, Pareto{10, 1.5}}}}};
    for (const auto& spec : specs) {
        CAPTURE(describe(spec));
        CHECK(parse_distribution(distribution_to_json(spec)) == spec);
    }
}

TEST_CASE("config json round trip") {
    AnalysisConfig c = parse_analysis_config(kMinimal);
    c.betaTarget = 3.0;
    c.output.report = "x.json";
    const AnalysisConfig back = parse_analysis_config(analysis_config_to_json(c));
    CHECK(back.model == c.model);
    CHECK(back.betaTarget == c.betaTarget);
    CHECK(back.simulation.sampleCount == c.simulation.sampleCount);
    CHECK(back.output.report == c.output.report);
}

}
