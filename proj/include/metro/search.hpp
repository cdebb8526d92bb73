#pragma once

#include "metro/dataset.hpp"
#include "metro/learner.hpp"
#include "metro/metric.hpp"
#include "metro/model.hpp"
#include "metro/surrogate.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace metro {

struct SearchConfig {
    /// Interval tolerance for bisection, grid step for the scan.
    double epsilon = 0.01;
    /// Band half-width; defaults to sqrt(ln m / m) on the evaluation set.
    std::optional<double> epsilon_m;
    /// Defaults to lambda_bounds on the evaluation labels.
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    /// Share of the training data held out for the lambda decision.
    double split_fraction = 0.2;
    std::uint64_t seed = 0;
    /// Fit and select on the full training set instead of splitting it.
    bool select_on_train = false;
    /// Grid scan only: start each fit from the previous grid point's model.
    bool warm_start = false;

    void validate() const;
};

struct TraceRecord {
    int iteration = 0;
    double lambda = 0.0;
    double a = 0.0;
    double b = 0.0;
    /// "raise", "lower", "in_band", "exhausted", "evaluated", "skipped", "selected"
    std::string decision;
    /// Empirical l^lambda for bisection, empirical metric for the grid scan.
    double value = 0.0;
    std::string note;
};

struct SearchTrace {
    std::string algorithm;
    std::vector<TraceRecord> records;
};

struct SearchResult {
    Model model;
    double lambda = 0.0;
    /// Band exit for bisection; selection metric for the grid scan.
    double value = 0.0;
    bool in_band = false;
    SearchTrace trace;
};

/// ceil(log2(span / epsilon)), the bisection iteration bound.
int bisection_bound(double span, double epsilon);

/// Bisection on a sign oracle (+1 below the crossing, -1 above it). Requires
/// oracle(lambda_min) = +1 and oracle(lambda_max) = -1, else BracketError.
/// Returns the midpoint of the final interval.
std::pair<double, SearchTrace> bisect_lambda(const std::function<int(double)>& sign_oracle,
                                             double lambda_min, double lambda_max,
                                             double epsilon);

/// Bisection with a statistical band: `excess(lambda)` returns the empirical
/// l^lambda of the hypothesis fitted at lambda. Above epsilon_m raises the
/// lower end, below -epsilon_m lowers the upper end, otherwise returns. When
/// the interval shrinks to epsilon the last evaluated lambda is returned.
struct BandOutcome {
    double lambda = 0.0;
    double value = 0.0;
    bool in_band = false;
    SearchTrace trace;
};
BandOutcome band_bisect(const std::function<double(double)>& excess, double lambda_min,
                        double lambda_max, double epsilon, double epsilon_m);

/// (S_lambda, S_train): stratified, seeded, disjoint; S_lambda gets
/// round(fraction * m) rows.
std::pair<Dataset, Dataset> split_for_lambda(const Dataset& data, double fraction,
                                             std::uint64_t seed);

double default_epsilon_m(std::size_t m);

/// Fits on S_train, tests the band on S_lambda (both are the full set with
/// select_on_train).
SearchResult metro_bisect(const Dataset& train, const MetricSpec& spec, const PhiKind& kind,
                          const Architecture& arch, const TrainConfig& tcfg,
                          const SearchConfig& scfg);

/// Scans lambda = lambda_min + i * epsilon for i = 0 .. floor(span / epsilon),
/// keeping the first model with the smallest empirical metric on the
/// selection set. Grid points run in parallel unless warm_start is set.
SearchResult metro_grid(const Dataset& train, const MetricSpec& spec, const PhiKind& kind,
                        const Architecture& arch, const TrainConfig& tcfg,
                        const SearchConfig& scfg);

/// Number of grid points floor(span / epsilon) + 1.
std::size_t grid_size(double lambda_min, double lambda_max, double epsilon);

}  // namespace metro
