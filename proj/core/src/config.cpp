#include "sevrel/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "json_fields.hpp"
#include "sevrel/errors.hpp"
#include "sevrel/format.hpp"

namespace sevrel {

using detail::Json;

namespace {

std::string child(const std::string& pointer, std::string_view key) { return pointer + "/" + std::string(key); }

std::string child(const std::string& pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

std::string display(const std::string& pointer) { return pointer.empty() ? "/" : pointer; }

void require_object(const Json& node, const std::string& pointer) {
    if (!node.is_object()) throw ConfigError(display(pointer), "expected an object");
}

void reject_unknown(const Json& node, const std::string& pointer, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : node.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError(child(pointer, key), "unknown key");
    }
}

const Json& member(const Json& node, const std::string& pointer, std::string_view key) {
    const auto it = node.find(std::string(key));
    if (it == node.end()) throw ConfigError(display(pointer), "missing required key '" + std::string(key) + "'");
    return *it;
}

double as_number(const Json& node, const std::string& pointer) {
    if (!node.is_number()) throw ConfigError(pointer, "expected a number");
    const double v = node.get<double>();
    if (!std::isfinite(v)) throw ConfigError(pointer, "expected a finite number");
    return v;
}

double number_member(const Json& node, const std::string& pointer, std::string_view key) {
    return as_number(member(node, pointer, key), child(pointer, key));
}

std::uint64_t as_count(const Json& node, const std::string& pointer) {
    if (node.is_number_unsigned()) return node.get<std::uint64_t>();
    if (node.is_number_integer()) {
        const auto v = node.get<std::int64_t>();
        if (v < 0) throw ConfigError(pointer, "expected a non-negative integer");
        return static_cast<std::uint64_t>(v);
    }
    if (node.is_number_float()) {
        const double v = node.get<double>();
        if (v >= 0.0 && v < 1.8e19 && std::floor(v) == v) return static_cast<std::uint64_t>(v);
    }
    throw ConfigError(pointer, "expected a non-negative integer");
}

std::string as_string(const Json& node, const std::string& pointer) {
    if (!node.is_string()) throw ConfigError(pointer, "expected a string");
    return node.get<std::string>();
}

template <class F>
auto wrap_invalid(const std::string& pointer, F&& make) -> decltype(make()) {
    try {
        return make();
    } catch (const InvalidArgument& e) {
        throw ConfigError(display(pointer), e.what());
    }
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character.
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        const auto [line, column] = line_column(text, at);
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column),
                          "malformed JSON");
    }
}

LimitStateModel model_from(const Json& node, const std::string& pointer) {
    require_object(node, pointer);
    reject_unknown(node, pointer, {"terms", "shift"});
    const std::string termsPtr = child(pointer, "terms");
    const Json& terms = member(node, pointer, "terms");
    if (!terms.is_array() || terms.empty()) throw ConfigError(termsPtr, "expected a non-empty array of terms");
    std::vector<Term> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string p = child(termsPtr, i);
        const Json& t = terms[i];
        require_object(t, p);
        reject_unknown(t, p, {"name", "coefficient", "distribution"});
        const double coefficient = t.contains("coefficient") ? number_member(t, p, "coefficient") : 1.0;
        out.push_back(Term{as_string(member(t, p, "name"), child(p, "name")), coefficient,
                           detail::distribution_from(member(t, p, "distribution"), child(p, "distribution"))});
    }
    const double shift = node.contains("shift") ? number_member(node, pointer, "shift") : 0.0;
    return wrap_invalid(pointer, [&] { return LimitStateModel(std::move(out), shift); });
}

SimulationConfig simulation_from(const Json& node, const std::string& pointer, std::size_t& bootstrap) {
    require_object(node, pointer);
    reject_unknown(node, pointer,
                   {"sampleCount", "masterSeed", "chunkSize", "failureReservoirCap", "robustSubsampleCap",
                    "bootstrapResamples"});
    SimulationConfig c;
    auto count = [&](std::string_view key, std::size_t& field) {
        if (node.contains(std::string(key))) field = as_count(node.at(std::string(key)), child(pointer, key));
    };
    count("sampleCount", c.sampleCount);
    if (node.contains("masterSeed")) c.masterSeed = as_count(node.at("masterSeed"), child(pointer, "masterSeed"));
    if (!node.contains("chunkSize")) c.chunkSize = std::min(c.chunkSize, std::max<std::size_t>(1, c.sampleCount));
    count("chunkSize", c.chunkSize);
    count("failureReservoirCap", c.failureReservoirCap);
    count("robustSubsampleCap", c.robustSubsampleCap);
    count("bootstrapResamples", bootstrap);
    wrap_invalid(pointer, [&] {
        c.validate();
        return 0;
    });
    return c;
}

}  // namespace

namespace detail {

Json distribution_json(const DistributionSpec& spec) {
    Json j;
    j["type"] = std::string(spec.kind());
    if (const auto* d = spec.get_if<Normal>()) {
        j["mean"] = d->mean;
        j["stddev"] = d->stddev;
    } else if (const auto* d = spec.get_if<Lognormal>()) {
        j["logMean"] = d->logMean;
        j["logStd"] = d->logStd;
    } else if (const auto* d = spec.get_if<Gumbel>()) {
        j["location"] = d->location;
        j["scale"] = d->scale;
    } else if (const auto* d = spec.get_if<GumbelMin>()) {
        j["location"] = d->location;
        j["scale"] = d->scale;
    } else if (const auto* d = spec.get_if<Pareto>()) {
        j["xMin"] = d->xMin;
        j["alpha"] = d->alpha;
    } else if (const auto* d = spec.get_if<Mixture>()) {
        Json components = Json::array();
        for (const auto& c : d->components) {
            components.push_back(Json{{"weight", c.weight}, {"distribution", distribution_json(c.distribution)}});
        }
        j["components"] = std::move(components);
    }
    return j;
}

DistributionSpec distribution_from(const Json& node, const std::string& pointer) {
    require_object(node, pointer);
    const std::string type = as_string(member(node, pointer, "type"), child(pointer, "type"));
    auto num = [&](std::string_view key) { return number_member(node, pointer, key); };
    return wrap_invalid(pointer, [&]() -> DistributionSpec {
        if (type == "normal") {
            reject_unknown(node, pointer, {"type", "mean", "stddev"});
            return Normal{num("mean"), num("stddev")};
        }
        if (type == "lognormal") {
            if (node.contains("median") || node.contains("cov")) {
                reject_unknown(node, pointer, {"type", "median", "cov"});
                return lognormal_from_median_cov(num("median"), num("cov"));
            }
            reject_unknown(node, pointer, {"type", "logMean", "logStd"});
            return Lognormal{num("logMean"), num("logStd")};
        }
        if (type == "gumbel") {
            reject_unknown(node, pointer, {"type", "location", "scale"});
            return Gumbel{num("location"), num("scale")};
        }
        if (type == "gumbel-min") {
            reject_unknown(node, pointer, {"type", "location", "scale"});
            return GumbelMin{num("location"), num("scale")};
        }
        if (type == "pareto") {
            reject_unknown(node, pointer, {"type", "xMin", "alpha"});
            return Pareto{num("xMin"), num("alpha")};
        }
        if (type == "mixture") {
            reject_unknown(node, pointer, {"type", "components"});
            const std::string cp = child(pointer, "components");
            const Json& comps = member(node, pointer, "components");
            if (!comps.is_array() || comps.empty()) throw ConfigError(cp, "expected a non-empty array");
            Mixture m;
            for (std::size_t i = 0; i < comps.size(); ++i) {
                const std::string p = child(cp, i);
                require_object(comps[i], p);
                reject_unknown(comps[i], p, {"weight", "distribution"});
                m.components.push_back(MixtureComponent{
                    number_member(comps[i], p, "weight"),
                    distribution_from(member(comps[i], p, "distribution"), child(p, "distribution"))});
            }
            return m;
        }
        throw ConfigError(child(pointer, "type"), "unknown distribution type '" + type + "'");
    });
}

Json model_json(const LimitStateModel& model) {
    Json terms = Json::array();
    for (const auto& t : model.terms()) {
        terms.push_back(Json{{"name", t.name},
                             {"coefficient", t.coefficient},
                             {"distribution", distribution_json(t.distribution)}});
    }
    return Json{{"terms", std::move(terms)}, {"shift", model.shift()}};
}

Json simulation_json(const SimulationConfig& config) {
    return Json{{"sampleCount", config.sampleCount},
                {"masterSeed", config.masterSeed},
                {"chunkSize", config.chunkSize},
                {"failureReservoirCap", config.failureReservoirCap},
                {"robustSubsampleCap", config.robustSubsampleCap}};
}

}  // namespace detail

AnalysisConfig parse_analysis_config(std::string_view text) {
    const Json root = parse_json(text);
    require_object(root, "");
    reject_unknown(root, "", {"model", "simulation", "assessment", "output"});

    std::size_t bootstrap = 200;
    SimulationConfig simulation;
    if (root.contains("simulation")) simulation = simulation_from(root.at("simulation"), "/simulation", bootstrap);

    AnalysisConfig config{model_from(member(root, "", "model"), "/model"), simulation, bootstrap, std::nullopt,
                          SeverityLevel::High, {}};

    if (root.contains("assessment")) {
        const Json& a = root.at("assessment");
        require_object(a, "/assessment");
        reject_unknown(a, "/assessment", {"betaTarget", "maxAcceptableLevel"});
        if (a.contains("betaTarget")) {
            const double bt = number_member(a, "/assessment", "betaTarget");
            if (!(bt > 0.0)) throw ConfigError("/assessment/betaTarget", "must be > 0");
            config.betaTarget = bt;
        }
        if (a.contains("maxAcceptableLevel")) {
            const std::string text = as_string(a.at("maxAcceptableLevel"), "/assessment/maxAcceptableLevel");
            const auto level = parse_level(text);
            if (!level) throw ConfigError("/assessment/maxAcceptableLevel", "unknown severity level '" + text + "'");
            config.maxAcceptableLevel = *level;
        }
    }

    if (root.contains("output")) {
        const Json& o = root.at("output");
        require_object(o, "/output");
        reject_unknown(o, "/output", {"report", "histogramCsv", "deficitCsv"});
        auto path = [&](std::string_view key, std::optional<std::string>& field) {
            if (o.contains(std::string(key))) field = as_string(o.at(std::string(key)), child("/output", key));
        };
        path("report", config.output.report);
        path("histogramCsv", config.output.histogramCsv);
        path("deficitCsv", config.output.deficitCsv);
    }
    return config;
}

AnalysisConfig load_analysis_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_analysis_config(buffer.str());
}

DistributionSpec parse_distribution(std::string_view jsonText) {
    return detail::distribution_from(parse_json(jsonText), "");
}

std::string distribution_to_json(const DistributionSpec& spec) { return detail::distribution_json(spec).dump(); }

std::string analysis_config_to_json(const AnalysisConfig& config) {
    Json sim = detail::simulation_json(config.simulation);
    sim["bootstrapResamples"] = config.bootstrapResamples;
    Json root{{"model", detail::model_json(config.model)}, {"simulation", std::move(sim)}};
    Json assessment{{"maxAcceptableLevel", std::string(level_roman(config.maxAcceptableLevel))}};
    if (config.betaTarget) assessment["betaTarget"] = *config.betaTarget;
    root["assessment"] = std::move(assessment);
    Json output = Json::object();
    if (config.output.report) output["report"] = *config.output.report;
    if (config.output.histogramCsv) output["histogramCsv"] = *config.output.histogramCsv;
    if (config.output.deficitCsv) output["deficitCsv"] = *config.output.deficitCsv;
    root["output"] = std::move(output);
    return root.dump(2);
}

}  // namespace sevrel
