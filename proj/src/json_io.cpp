#include "metro/json_io.hpp"

#include "metro/errors.hpp"

#include <cmath>
#include <sstream>

namespace metro {

namespace {

// JSON has no infinities; non-finite values become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Coeffs coeffs_from(const nlohmann::json& j, const char* what) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 4) throw ValidationError(std::string(what) + " needs four coefficients");
    for (double x : v) {
        if (!std::isfinite(x)) throw ValidationError(std::string(what) + " must be finite");
    }
    return {v[0], v[1], v[2], v[3]};
}

}  // namespace

Json to_json(const MetricSpec& spec) {
    Json j;
    j["name"] = spec.name;
    j["alpha"] = spec.alpha;
    j["beta"] = spec.beta;
    j["flipped"] = spec.flipped;
    j["negated"] = spec.negated;
    return j;
}

MetricSpec metric_from_json(const nlohmann::json& j, std::optional<double> train_positive_rate) {
    try {
        if (j.is_string()) return preset_from_string(j.get<std::string>(), train_positive_rate);
        if (!j.is_object()) throw ValidationError("metric must be a preset string or an object");
        if (j.contains("preset")) {
            return preset_from_string(j.at("preset").get<std::string>(), train_positive_rate);
        }
        MetricSpec spec;
        spec.alpha = coeffs_from(j.at("alpha"), "alpha");
        spec.beta = coeffs_from(j.at("beta"), "beta");
        spec.name = j.value("name", std::string("custom"));
        spec.flipped = j.value("flipped", false);
        spec.negated = j.value("negated", false);
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad metric: ") + e.what());
    }
}

MetricSpec parse_metric_arg(const std::string& text, std::optional<double> train_positive_rate) {
    const auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("metric JSON: ") + e.what());
        }
        return metric_from_json(j, train_positive_rate);
    }
    return preset_from_string(text, train_positive_rate);
}

Json to_json(const Model& model) {
    Json arch;
    arch["kind"] = model.arch.is_linear() ? "linear" : "mlp";
    arch["input"] = model.arch.input;
    arch["hidden"] = model.arch.hidden;
    Json j;
    j["architecture"] = arch;
    j["parameters"] = model.params;
    if (model.standardization.empty()) {
        j["standardization"] = nullptr;
    } else {
        j["standardization"] = {{"mean", model.standardization.mean},
                                {"scale", model.standardization.scale}};
    }
    j["seed"] = model.seed;
    return j;
}

Model model_from_json(const nlohmann::json& j) {
    try {
        Model m;
        const auto& a = j.at("architecture");
        m.arch.input = a.at("input").get<std::size_t>();
        m.arch.hidden = a.value("hidden", std::vector<std::size_t>{});
        m.params = j.at("parameters").get<std::vector<double>>();
        if (m.params.size() != m.arch.parameter_count()) {
            throw ValidationError("parameter count does not match the architecture");
        }
        if (j.contains("standardization") && !j.at("standardization").is_null()) {
            m.standardization.mean = j.at("standardization").at("mean").get<std::vector<double>>();
            m.standardization.scale = j.at("standardization").at("scale").get<std::vector<double>>();
            if (m.standardization.mean.size() != m.arch.input ||
                m.standardization.scale.size() != m.arch.input) {
                throw ValidationError("standardization size does not match the input dimension");
            }
        }
        m.seed = j.value("seed", std::uint64_t{0});
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad model JSON: ") + e.what());
    }
}

Json to_json(const TraceRecord& r) {
    Json j;
    j["iteration"] = r.iteration;
    j["lambda"] = number(r.lambda);
    j["interval"] = {number(r.a), number(r.b)};
    j["decision"] = r.decision;
    j["value"] = number(r.value);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

std::string trace_to_jsonl(const SearchTrace& trace) {
    std::ostringstream os;
    for (const auto& r : trace.records) {
        Json j = to_json(r);
        j["algorithm"] = trace.algorithm;
        os << j.dump() << '\n';
    }
    return os.str();
}

Json to_json(const ConfusionCounts& c) {
    return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

namespace {

Json split_json(const SplitEval& e) {
    return {{"value", number(e.value)}, {"confusion", to_json(e.counts)}};
}

}  // namespace

Json to_json(const EvalReport& r, bool include_wall_time) {
    Json j;
    j["method"] = r.method;
    j["metric"] = r.metric;
    j["lambda"] = r.lambda ? number(*r.lambda) : Json(nullptr);
    j["theta"] = r.theta ? number(*r.theta) : Json(nullptr);
    j["threshold"] = number(r.threshold);
    j["train"] = split_json(r.train);
    j["validation"] = r.validation ? split_json(*r.validation) : Json(nullptr);
    j["test"] = r.test ? split_json(*r.test) : Json(nullptr);
    j["seed"] = r.seed;
    if (include_wall_time) j["wall_time"] = r.wall_time;
    j["trace_path"] = r.trace_path;
    return j;
}

Json to_json(const VerificationReport& r) {
    Json j;
    j["theorem"] = r.theorem;
    j["fixtures"] = r.fixtures;
    j["worst_slack"] = number(r.worst_slack);
    j["pass"] = r.pass;
    j["failures"] = r.failures;
    return j;
}

}  // namespace metro
