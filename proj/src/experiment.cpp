#include "metro/experiment.hpp"

#include "metro/errors.hpp"

#include <algorithm>
#include <chrono>

namespace metro {

const std::vector<std::string> kMethodNames = {"erm",          "threshold_sweep", "weighted_grid",
                                               "two_threshold", "metro_bisect",   "metro_grid"};

bool is_method(const std::string& name) {
    return std::find(kMethodNames.begin(), kMethodNames.end(), name) != kMethodNames.end();
}

SplitEval evaluate_split(const MetricSpec& spec, std::span<const int> labels,
                         std::span<const int> predictions) {
    SplitEval e;
    e.counts = confusion_from_predictions(labels, predictions);
    e.value = human_value(spec, ratio_value(spec, e.counts));
    return e;
}

RunOutput run_method(const MethodConfig& cfg, const Dataset& train, const MetricSpec& spec,
                     const Dataset* test) {
    if (!is_method(cfg.method)) throw ConfigError("unknown method '" + cfg.method + "'");
    train.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const Architecture arch = Architecture::parse(cfg.arch, train.cols);
    RunOutput out;
    EvalReport& rep = out.report;
    rep.method = cfg.method;
    rep.metric = spec.name;
    rep.seed = cfg.train.seed;

    std::optional<Dataset> val_set;
    if (cfg.method == "metro_bisect" || cfg.method == "metro_grid") {
        SearchResult res = cfg.method == "metro_bisect"
                               ? metro_bisect(train, spec, cfg.kind, arch, cfg.train, cfg.search)
                               : metro_grid(train, spec, cfg.kind, arch, cfg.train, cfg.search);
        out.classifier.model = std::move(res.model);
        rep.lambda = res.lambda;
        out.trace = std::move(res.trace);
        if (!cfg.search.select_on_train) {
            val_set = split_for_lambda(train, cfg.search.split_fraction, cfg.search.seed).first;
        }
    } else {
        BaselineConfig bcfg;
        bcfg.kind = parse_baseline(cfg.method);
        bcfg.resolution = cfg.resolution;
        BaselineResult res;
        if (bcfg.kind == BaselineKind::erm || cfg.search.select_on_train) {
            res = run_baseline(bcfg, train, train, spec, arch, cfg.train);
        } else {
            auto [sel, fit] = split_for_lambda(train, cfg.search.split_fraction, cfg.search.seed);
            res = run_baseline(bcfg, fit, sel, spec, arch, cfg.train);
            val_set = std::move(sel);
        }
        out.classifier = std::move(res.classifier);
        if (bcfg.kind == BaselineKind::weighted_grid || bcfg.kind == BaselineKind::two_threshold) {
            rep.theta = res.theta;
        }
    }
    rep.threshold = out.classifier.threshold;
    rep.train = evaluate_split(spec, train.labels, out.classifier.predict(train));
    if (val_set) rep.validation = evaluate_split(spec, val_set->labels, out.classifier.predict(*val_set));
    if (test) rep.test = evaluate_split(spec, test->labels, out.classifier.predict(*test));
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace metro
