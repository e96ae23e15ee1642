#include "sevrel/report_io.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "json_fields.hpp"
#include "sevrel/format.hpp"
#include "sevrel/gaussian.hpp"

namespace sevrel {

using detail::Json;
using detail::number_or_null;

namespace {

Json interval_json(const std::optional<Interval>& interval) {
    if (!interval) return nullptr;
    return Json::array({number_or_null(interval->lower), number_or_null(interval->upper)});
}

Json level_json(const std::optional<SeverityLevel>& level) {
    return level ? Json(std::string(level_name(*level))) : Json(nullptr);
}

}  // namespace

std::uint64_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

std::string report_to_json(const SeverityReport& r, const ReportContext& ctx) {
    Json root;
    root["schemaVersion"] = kReportSchemaVersion;
    if (ctx.scenarioId) root["scenario"] = *ctx.scenarioId;
    if (ctx.model) root["model"] = detail::model_json(*ctx.model);
    if (ctx.config) root["simulation"] = detail::simulation_json(*ctx.config);
    if (ctx.calibratedShift) {
        root["calibration"] = Json{{"targetPf", number_or_null(ctx.calibrationTargetPf)},
                                   {"shift", number_or_null(*ctx.calibratedShift)}};
    }

    Json summary{{"n", r.n},
                 {"failureCount", r.failureCount},
                 {"meanG", number_or_null(r.meanG)},
                 {"stdG", number_or_null(r.stdG)}};
    if (ctx.summary) {
        summary["varG"] = number_or_null(ctx.summary->varG);
        summary["minG"] = number_or_null(ctx.summary->minG);
        summary["maxG"] = number_or_null(ctx.summary->maxG);
        summary["storedDeficits"] = ctx.summary->failureDeficits.size();
        summary["robustSubsampleSize"] = ctx.summary->robustSubsample.size();
    }
    if (r.robust) {
        summary["mad"] = number_or_null(r.robust->mad);
        summary["iqr"] = number_or_null(r.robust->iqr);
        summary["conditionalStd"] = number_or_null(r.robust->conditionalStd);
    }
    summary["scaleStability"] = Json{{"firstHalfRatio", number_or_null(r.stability.firstRatio)},
                                     {"secondHalfRatio", number_or_null(r.stability.secondRatio)},
                                     {"drift", number_or_null(r.stability.drift)},
                                     {"unstable", r.stability.unstable}};
    root["summary"] = std::move(summary);

    Json metrics{{"pf", number_or_null(r.pf)},
                 {"pfStdError", number_or_null(r.pfStdError)},
                 {"beta", number_or_null(r.beta)},
                 {"betaLowerBound", number_or_null(r.betaLowerBound)},
                 {"betaMoment", number_or_null(r.betaMoment)},
                 {"ef", number_or_null(r.ef)},
                 {"efStar", number_or_null(r.efStar)},
                 {"efStarInterval", interval_json(r.efStarInterval)},
                 {"gaussianBenchmarkEfStar", number_or_null(r.gaussianBenchmarkEfStar)},
                 {"betaS", number_or_null(r.betaS)},
                 {"betaSInterval", interval_json(r.betaSInterval)},
                 {"analyticVarianceFinite", r.analyticVarianceFinite},
                 {"extremeFlag", std::string(flag_name(r.extremeFlag))},
                 {"level", level_json(r.level)},
                 {"notes", r.notes}};
    root["metrics"] = std::move(metrics);

    if (ctx.decision) {
        const WorkflowDecision& d = *ctx.decision;
        root["assessment"] = Json{{"betaTarget", number_or_null(d.betaTarget)},
                                  {"maxAcceptableLevel", std::string(level_name(d.maxAcceptableLevel))},
                                  {"frequencyPass", d.frequencyPass},
                                  {"severityLevel", level_json(d.severityLevel)},
                                  {"verdict", std::string(verdict_name(d.verdict))},
                                  {"advisory", d.advisory},
                                  {"message", d.message}};
    }

    if (ctx.expectations) {
        Json rows = Json::array();
        for (const auto& e : *ctx.expectations) {
            rows.push_back(Json{{"metric", e.metric},
                                {"expected", e.expected},
                                {"computed", e.computed},
                                {"tolerance", e.tolerance},
                                {"source", e.source},
                                {"pass", e.pass}});
        }
        root["expectations"] = std::move(rows);
    }
    return root.dump(2) + "\n";
}

std::string csv_real(double value) { return format_general(value, 17); }

void write_histogram_csv(std::ostream& out, const Histogram& g, const Histogram& deficits) {
    out << "series,lower,upper,count\n";
    auto emit = [&out](std::string_view series, const Histogram& h) {
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            out << series << ',' << csv_real(h.edges[i]) << ',' << csv_real(h.edges[i + 1]) << ',' << h.counts[i]
                << '\n';
        }
    };
    emit("g", g);
    emit("deficit", deficits);
}

void write_deficit_csv(std::ostream& out, std::span<const double> deficits) {
    out << "deficit\n";
    for (double d : deficits) out << csv_real(d) << '\n';
}

void write_fcurve_csv(std::ostream& out) {
    out << "b,F,threshold\n";
    for (int hundredths = 5; hundredths <= 500; ++hundredths) {
        const double b = hundredths / 100.0;
        std::string_view marker;
        if (hundredths == 300) marker = "II";
        if (hundredths == 200) marker = "III";
        if (hundredths == 100) marker = "IV";
        out << csv_real(b) << ',' << csv_real(gaussian::deficit_map(b)) << ',' << marker << '\n';
    }
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << content;
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw std::runtime_error("cannot write " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot write " + path.string());
    }
}

}  // namespace sevrel
