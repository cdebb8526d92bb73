#pragma once

#include "metro/dataset.hpp"
#include "metro/learner.hpp"
#include "metro/metric.hpp"
#include "metro/model.hpp"

#include <span>
#include <string>
#include <vector>

namespace metro {

/// A scorer with a decision offset: predicts sign(h(x) - threshold).
struct ScoredClassifier {
    Model model;
    double threshold = 0.0;

    std::vector<int> predict(const Dataset& data) const;
};

enum class BaselineKind { erm, threshold_sweep, weighted_grid, two_threshold };

BaselineKind parse_baseline(const std::string& name);
std::string to_string(BaselineKind kind);

struct BaselineConfig {
    BaselineKind kind = BaselineKind::erm;
    /// Number of theta values for the weighted variants; theta_k = k / (r + 1).
    int resolution = 19;
    /// Explicit theta values; overrides resolution when non-empty.
    std::vector<double> thetas;

    std::vector<double> theta_grid() const;
};

struct BaselineResult {
    ScoredClassifier classifier;
    /// Weight of the selected weighted fit (0.5 for erm and threshold_sweep).
    double theta = 0.5;
    /// Empirical metric of the selected rule on the selection set.
    double selection_value = 0.0;
    int fits = 0;
};

/// Costs 2 * theta for a false positive and 2 * (1 - theta) for a false
/// negative, so theta = 1/2 is the symmetric zero-one loss used by erm.
CostMatrix theta_costs(double theta);

/// Best offset for a fixed scorer over the midpoints of consecutive sorted
/// unique scores, zero, and the sentinels min - 1 and max + 1. Ties keep the
/// smaller offset. Offsets with a zero metric denominator are skipped.
struct ThresholdChoice {
    double threshold = 0.0;
    double value = 0.0;
};
ThresholdChoice sweep_threshold(std::span<const double> scores, std::span<const int> labels,
                                const MetricSpec& spec);

/// Fits on `train` with the logistic surrogate and selects on `val`.
BaselineResult run_baseline(const BaselineConfig& cfg, const Dataset& train, const Dataset& val,
                            const MetricSpec& spec, const Architecture& arch,
                            const TrainConfig& tcfg);

}  // namespace metro
