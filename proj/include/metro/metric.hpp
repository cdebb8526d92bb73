#pragma once

// ============================================================================
// Generalized (linear-fractional) binary classification metrics.
//
// A metric is the ratio of two affine functions of the moments E[s*y], E[y]
// and E[s], where s = sign(h(x)) and y are both in {+1, -1}:
//
//            E[a1*s*y + a2*y + a3*s + a4]
//   L(h) = ------------------------------
//            E[b1*s*y + b2*y + b3*s + b4]
//
// Every ratio of linear combinations of TP, FP, TN, FN has this form. All
// presets are stored so that lower is better.
// ============================================================================

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace metro {

/// Coefficients over the basis (s*y, y, s, 1).
using Coeffs = std::array<double, 4>;

struct MetricSpec {
    Coeffs alpha{};
    Coeffs beta{};
    std::string name = "custom";
    /// Set when normalize_denominator negated both alpha and beta.
    bool flipped = false;
    /// Set when the numerator was negated to turn a score-to-maximize into a
    /// loss; human-readable reports negate the value back.
    bool negated = false;

    friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    std::int64_t total() const noexcept { return tp + fp + tn + fn; }

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Linear-fractional form over confusion entries: (tp, fp, tn, fn, constant).
/// Entries are evaluated on rates (counts divided by the sample size).
struct ConfusionCoeffs {
    std::array<double, 5> num{};
    std::array<double, 5> den{};
};

/// Sample means of s*y, y and s.
struct Moments {
    double sy = 0.0;
    double y = 0.0;
    double s = 0.0;
};

struct RatioParts {
    double numerator = 0.0;
    double denominator = 0.0;
};

struct LambdaRange {
    double lo = 0.0;
    double hi = 0.0;
};

/// sign(0) = +1, applied wherever a score becomes a label.
constexpr int sign_of(double score) noexcept { return score >= 0.0 ? 1 : -1; }

/// Affine form c1*sy + c2*y + c3*s + c4 at a single (s, y) or at averaged moments.
constexpr double affine(const Coeffs& c, double sy, double y, double s) noexcept {
    return c[0] * sy + c[1] * y + c[2] * s + c[3];
}

void check_labels(std::span<const int> labels);
void check_pair(std::span<const int> labels, std::span<const int> predictions);

ConfusionCounts confusion_from_predictions(std::span<const int> labels,
                                           std::span<const int> predictions);

Moments moments_from_counts(const ConfusionCounts& counts);

/// Moments from confusion rates (tp, fp, tn, fn fractions summing to one).
Moments moments_from_rates(double tp, double fp, double tn, double fn) noexcept;

RatioParts ratio_parts(const MetricSpec& spec, const Moments& moments) noexcept;

/// Ratio of the two means; throws DegenerateDenominatorError when the
/// denominator is exactly zero.
double ratio_value(const MetricSpec& spec, const Moments& moments);
double ratio_value(const MetricSpec& spec, const ConfusionCounts& counts);

double empirical_metric(const MetricSpec& spec, std::span<const int> labels,
                        std::span<const int> predictions);

/// Human-readable value: undoes the minimization negation of presets.
double human_value(const MetricSpec& spec, double value) noexcept;

// ---------------------------------------------------------------------------
// Confusion-coefficient conversion
// ---------------------------------------------------------------------------

/// Basis vectors of TP, FP, TN, FN indicators over (s*y, y, s, 1).
inline constexpr Coeffs kTpBasis{0.25, 0.25, 0.25, 0.25};
inline constexpr Coeffs kFpBasis{-0.25, -0.25, 0.25, 0.25};
inline constexpr Coeffs kTnBasis{0.25, -0.25, -0.25, 0.25};
inline constexpr Coeffs kFnBasis{-0.25, 0.25, -0.25, 0.25};

MetricSpec alpha_beta_from_confusion_coeffs(const ConfusionCoeffs& coeffs,
                                            std::string name = "custom");

/// Direct ratio on confusion rates; the reference the conversion is checked against.
double metric_from_confusion(const ConfusionCoeffs& coeffs, const ConfusionCounts& counts);

// ---------------------------------------------------------------------------
// Presets (all oriented lower-is-better)
// ---------------------------------------------------------------------------

MetricSpec f_beta(double beta);
MetricSpec jaccard();
/// Arithmetic mean of TPR and TNR; p is the positive rate estimated on training data.
MetricSpec am_measure(double positive_rate);
/// (w_tp TP + w_tn TN) / (w_tp TP + w_tn TN + w_fp FP + w_fn FN).
MetricSpec weighted_accuracy(const std::array<double, 4>& weights);
/// Plain accuracy, the unit-weight case of weighted_accuracy.
MetricSpec accuracy();

/// Resolves "f_beta:<b>", "jaccard", "am:<p>", "weighted_accuracy:w1,w2,w3,w4",
/// "accuracy". The AM preset may omit p when a training positive rate is given.
MetricSpec preset_from_string(std::string_view text,
                              std::optional<double> train_positive_rate = std::nullopt);

bool is_zero(const Coeffs& c) noexcept;
MetricSpec negate_both(const MetricSpec& spec);

// ---------------------------------------------------------------------------
// Denominator orientation and lambda range
// ---------------------------------------------------------------------------

/// The four extreme predictors for a fixed label vector: perfect, all wrong,
/// constant +1 and constant -1. Every achievable confusion profile is a convex
/// combination of their confusion rates.
std::vector<std::vector<int>> vertex_probes(std::span<const int> labels);

/// Makes the mean of l_beta positive over the probe predictions, negating both
/// alpha and beta when every probe has a negative denominator. Probes with a
/// zero denominator do not vote. Mixed signs raise UnsupportedMetricError.
MetricSpec normalize_denominator(const MetricSpec& spec, std::span<const int> labels,
                                 std::span<const std::vector<int>> probes);

/// Uses vertex_probes(labels).
MetricSpec normalize_denominator(const MetricSpec& spec, std::span<const int> labels);

/// Metric range over all predictors for these labels, taken from the four
/// vertex confusion profiles and widened by 5% of the span (or by
/// 5% of max(1, |value|) when the metric is constant). When a vertex has a
/// nonpositive denominator the fallback is returned, or ConfigError raised.
LambdaRange lambda_bounds(const MetricSpec& spec, std::span<const int> labels,
                          std::optional<LambdaRange> fallback = std::nullopt);

/// Range of the mean of l_beta over all predictors for these labels
/// (attained at the vertex profiles).
LambdaRange denominator_range(const MetricSpec& spec, std::span<const int> labels);

}  // namespace metro
