#pragma once

// One training run of any method, evaluated and packaged as a report. Shared
// by the command-line tool and the acceptance suite.

#include "metro/baselines.hpp"
#include "metro/dataset.hpp"
#include "metro/learner.hpp"
#include "metro/metric.hpp"
#include "metro/search.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace metro {

/// erm, threshold_sweep, weighted_grid, two_threshold, metro_bisect, metro_grid.
extern const std::vector<std::string> kMethodNames;
bool is_method(const std::string& name);

struct MethodConfig {
    std::string method = "metro_grid";
    PhiKind kind = PhiKind::logistic();
    std::string arch = "linear";
    TrainConfig train;
    SearchConfig search;
    int resolution = 19;
};

/// Human-convention values (F1 in [0, 1] and so on) plus confusion counts.
struct SplitEval {
    double value = 0.0;
    ConfusionCounts counts;
};

struct EvalReport {
    std::string method;
    std::string metric;
    std::optional<double> lambda;
    std::optional<double> theta;
    double threshold = 0.0;
    SplitEval train;
    std::optional<SplitEval> validation;
    std::optional<SplitEval> test;
    std::uint64_t seed = 0;
    double wall_time = 0.0;
    std::string trace_path;
};

struct RunOutput {
    ScoredClassifier classifier;
    EvalReport report;
    std::optional<SearchTrace> trace;
};

/// Evaluates a prediction vector in human convention.
SplitEval evaluate_split(const MetricSpec& spec, std::span<const int> labels,
                         std::span<const int> predictions);

/// Runs one method on `train` and evaluates it on train (and test when
/// given). Methods other than erm select on a held-out part of train, or on
/// train itself when search.select_on_train is set.
RunOutput run_method(const MethodConfig& cfg, const Dataset& train, const MetricSpec& spec,
                     const Dataset* test = nullptr);

}  // namespace metro
