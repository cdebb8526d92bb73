#include "metro/metric.hpp"

#include "metro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace metro {

namespace {

Coeffs scaled_sum(const std::array<double, 5>& w) {
    Coeffs out{};
    const std::array<const Coeffs*, 4> basis{&kTpBasis, &kFpBasis, &kTnBasis, &kFnBasis};
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < 4; ++i) {
            out[i] += w[k] * (*basis[k])[i];
        }
    }
    out[3] += w[4];
    return out;
}

double positive_rate(std::span<const int> labels) {
    std::size_t pos = std::count(labels.begin(), labels.end(), 1);
    return static_cast<double>(pos) / static_cast<double>(labels.size());
}

double parse_double(std::string_view text, std::string_view what) {
    std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse " + std::string(what) + " from '" + s + "'");
    }
    if (used != s.size()) {
        throw ConfigError("trailing characters in " + std::string(what) + " '" + s + "'");
    }
    return v;
}

}  // namespace

void check_labels(std::span<const int> labels) {
    if (labels.empty()) {
        throw InputError("empty label vector");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1 && labels[i] != -1) {
            throw InputError("label at index " + std::to_string(i) + " is not +1/-1");
        }
    }
}

void check_pair(std::span<const int> labels, std::span<const int> predictions) {
    if (labels.size() != predictions.size()) {
        throw InputError("labels and predictions differ in length (" +
                         std::to_string(labels.size()) + " vs " +
                         std::to_string(predictions.size()) + ")");
    }
    check_labels(labels);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] != 1 && predictions[i] != -1) {
            throw InputError("prediction at index " + std::to_string(i) + " is not +1/-1");
        }
    }
}

ConfusionCounts confusion_from_predictions(std::span<const int> labels,
                                           std::span<const int> predictions) {
    check_pair(labels, predictions);
    ConfusionCounts c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            (predictions[i] == 1 ? c.tp : c.fn) += 1;
        } else {
            (predictions[i] == 1 ? c.fp : c.tn) += 1;
        }
    }
    return c;
}

Moments moments_from_counts(const ConfusionCounts& c) {
    const std::int64_t m = c.total();
    if (m <= 0) {
        throw InputError("confusion counts sum to zero");
    }
    const double inv = 1.0 / static_cast<double>(m);
    return Moments{static_cast<double>(c.tp + c.tn - c.fp - c.fn) * inv,
                   static_cast<double>(c.tp + c.fn - c.fp - c.tn) * inv,
                   static_cast<double>(c.tp + c.fp - c.tn - c.fn) * inv};
}

Moments moments_from_rates(double tp, double fp, double tn, double fn) noexcept {
    return Moments{tp + tn - fp - fn, tp + fn - fp - tn, tp + fp - tn - fn};
}

RatioParts ratio_parts(const MetricSpec& spec, const Moments& mo) noexcept {
    return RatioParts{affine(spec.alpha, mo.sy, mo.y, mo.s), affine(spec.beta, mo.sy, mo.y, mo.s)};
}

double ratio_value(const MetricSpec& spec, const Moments& moments) {
    RatioParts p = ratio_parts(spec, moments);
    if (p.denominator == 0.0) {
        throw DegenerateDenominatorError(p.numerator);
    }
    return p.numerator / p.denominator;
}

double ratio_value(const MetricSpec& spec, const ConfusionCounts& counts) {
    return ratio_value(spec, moments_from_counts(counts));
}

double empirical_metric(const MetricSpec& spec, std::span<const int> labels,
                        std::span<const int> predictions) {
    return ratio_value(spec, confusion_from_predictions(labels, predictions));
}

double human_value(const MetricSpec& spec, double value) noexcept {
    return spec.negated ? -value : value;
}

MetricSpec alpha_beta_from_confusion_coeffs(const ConfusionCoeffs& coeffs, std::string name) {
    MetricSpec spec;
    spec.alpha = scaled_sum(coeffs.num);
    spec.beta = scaled_sum(coeffs.den);
    spec.name = std::move(name);
    return spec;
}

double metric_from_confusion(const ConfusionCoeffs& coeffs, const ConfusionCounts& counts) {
    const double m = static_cast<double>(counts.total());
    if (m <= 0.0) {
        throw InputError("confusion counts sum to zero");
    }
    const std::array<double, 4> r{counts.tp / m, counts.fp / m, counts.tn / m, counts.fn / m};
    double num = coeffs.num[4];
    double den = coeffs.den[4];
    for (std::size_t k = 0; k < 4; ++k) {
        num += coeffs.num[k] * r[k];
        den += coeffs.den[k] * r[k];
    }
    if (den == 0.0) {
        throw DegenerateDenominatorError(num);
    }
    return num / den;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace {

MetricSpec oriented(MetricSpec spec) {
    for (double& a : spec.alpha) {
        a = -a;
    }
    spec.negated = true;
    return spec;
}

std::string format_param(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

MetricSpec f_beta(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ConfigError("f_beta requires beta > 0");
    }
    const double b2 = beta * beta;
    ConfusionCoeffs c{{1.0 + b2, 0.0, 0.0, 0.0, 0.0}, {1.0 + b2, 1.0, 0.0, b2, 0.0}};
    return oriented(alpha_beta_from_confusion_coeffs(c, "f_beta:" + format_param(beta)));
}

MetricSpec jaccard() {
    ConfusionCoeffs c{{1.0, 0.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 1.0, 0.0}};
    return oriented(alpha_beta_from_confusion_coeffs(c, "jaccard"));
}

MetricSpec am_measure(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ConfigError("am requires a positive rate in (0, 1)");
    }
    // (TP/p + TN/(1-p)) / 2 = ((1-p) TP + p TN) / (2 p (1-p))
    ConfusionCoeffs c{{1.0 - p, 0.0, p, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0, 2.0 * p * (1.0 - p)}};
    return oriented(alpha_beta_from_confusion_coeffs(c, "am:" + format_param(p)));
}

MetricSpec weighted_accuracy(const std::array<double, 4>& w) {
    bool any = false;
    for (double v : w) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigError("weighted_accuracy weights must be finite and nonnegative");
        }
        any = any || v > 0.0;
    }
    if (!any) {
        throw ConfigError("weighted_accuracy weights must not all be zero");
    }
    // weights ordered (tp, tn, fp, fn)
    ConfusionCoeffs c{{w[0], 0.0, w[1], 0.0, 0.0}, {w[0], w[2], w[1], w[3], 0.0}};
    std::string name = "weighted_accuracy:" + format_param(w[0]) + "," + format_param(w[1]) +
                       "," + format_param(w[2]) + "," + format_param(w[3]);
    return oriented(alpha_beta_from_confusion_coeffs(c, std::move(name)));
}

MetricSpec accuracy() {
    MetricSpec spec = weighted_accuracy({1.0, 1.0, 1.0, 1.0});
    spec.name = "accuracy";
    return spec;
}

MetricSpec preset_from_string(std::string_view text, std::optional<double> train_positive_rate) {
    std::string_view head = text;
    std::string_view args;
    if (auto colon = text.find(':'); colon != std::string_view::npos) {
        head = text.substr(0, colon);
        args = text.substr(colon + 1);
    }
    if (head == "f_beta" || head == "fbeta" || head == "f") {
        return f_beta(args.empty() ? 1.0 : parse_double(args, "f_beta beta"));
    }
    if (head == "f1" && args.empty()) {
        return f_beta(1.0);
    }
    if (head == "jaccard" || head == "jac") {
        return jaccard();
    }
    if (head == "am") {
        if (!args.empty()) {
            return am_measure(parse_double(args, "am positive rate"));
        }
        if (!train_positive_rate) {
            throw ConfigError("am preset needs a positive rate estimate");
        }
        return am_measure(*train_positive_rate);
    }
    if (head == "accuracy" || head == "acc") {
        return accuracy();
    }
    if (head == "weighted_accuracy" || head == "wa") {
        std::array<double, 4> w{1.0, 1.0, 1.0, 1.0};
        if (!args.empty()) {
            std::size_t k = 0;
            std::string_view rest = args;
            while (true) {
                auto comma = rest.find(',');
                if (k >= 4) {
                    throw ConfigError("weighted_accuracy takes exactly 4 weights");
                }
                w[k++] = parse_double(rest.substr(0, comma), "weighted_accuracy weight");
                if (comma == std::string_view::npos) {
                    break;
                }
                rest = rest.substr(comma + 1);
            }
            if (k != 4) {
                throw ConfigError("weighted_accuracy takes exactly 4 weights");
            }
        }
        return weighted_accuracy(w);
    }
    throw ConfigError("unknown metric preset '" + std::string(text) + "'");
}

bool is_zero(const Coeffs& c) noexcept {
    return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

MetricSpec negate_both(const MetricSpec& spec) {
    MetricSpec out = spec;
    for (std::size_t i = 0; i < 4; ++i) {
        out.alpha[i] = -spec.alpha[i];
        out.beta[i] = -spec.beta[i];
    }
    out.flipped = !spec.flipped;
    return out;
}

// ---------------------------------------------------------------------------
// Orientation and ranges
// ---------------------------------------------------------------------------

std::vector<std::vector<int>> vertex_probes(std::span<const int> labels) {
    check_labels(labels);
    std::vector<int> perfect(labels.begin(), labels.end());
    std::vector<int> wrong(labels.size());
    std::transform(labels.begin(), labels.end(), wrong.begin(), [](int y) { return -y; });
    return {perfect, wrong, std::vector<int>(labels.size(), 1),
            std::vector<int>(labels.size(), -1)};
}

MetricSpec normalize_denominator(const MetricSpec& spec, std::span<const int> labels,
                                 std::span<const std::vector<int>> probes) {
    if (is_zero(spec.beta)) {
        throw ConfigError("metric denominator coefficients are all zero");
    }
    if (probes.empty()) {
        throw ConfigError("normalize_denominator needs at least one probe predictor");
    }
    int positive = 0;
    int negative = 0;
    for (const auto& probe : probes) {
        RatioParts p = ratio_parts(spec, moments_from_counts(confusion_from_predictions(labels, probe)));
        if (p.denominator > 0.0) {
            ++positive;
        } else if (p.denominator < 0.0) {
            ++negative;
        }
    }
    if (positive > 0 && negative > 0) {
        throw UnsupportedMetricError(
            "metric denominator changes sign across predictors; it cannot be normalized");
    }
    if (positive == 0 && negative == 0) {
        throw UnsupportedMetricError("metric denominator is zero for every probe predictor");
    }
    return negative > 0 ? negate_both(spec) : spec;
}

MetricSpec normalize_denominator(const MetricSpec& spec, std::span<const int> labels) {
    auto probes = vertex_probes(labels);
    return normalize_denominator(spec, labels, probes);
}

namespace {

std::array<RatioParts, 4> vertex_parts(const MetricSpec& spec, std::span<const int> labels) {
    check_labels(labels);
    const double p = positive_rate(labels);
    const double q = 1.0 - p;
    const std::array<Moments, 4> vertices{
        moments_from_rates(p, 0.0, q, 0.0),  // perfect
        moments_from_rates(0.0, q, 0.0, p),  // all wrong
        moments_from_rates(p, q, 0.0, 0.0),  // constant +1
        moments_from_rates(0.0, 0.0, q, p),  // constant -1
    };
    std::array<RatioParts, 4> out{};
    for (std::size_t k = 0; k < 4; ++k) {
        out[k] = ratio_parts(spec, vertices[k]);
    }
    return out;
}

}  // namespace

LambdaRange lambda_bounds(const MetricSpec& spec, std::span<const int> labels,
                          std::optional<LambdaRange> fallback) {
    auto parts = vertex_parts(spec, labels);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& part : parts) {
        if (!(part.denominator > 0.0)) {
            if (fallback) {
                return *fallback;
            }
            throw ConfigError(
                "a vertex confusion profile has a nonpositive denominator; supply lambda bounds");
        }
        const double v = part.numerator / part.denominator;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi - lo;
    const double widen = span > 0.0 ? 0.05 * span : 0.05 * std::max(1.0, std::abs(lo));
    return LambdaRange{lo - widen, hi + widen};
}

LambdaRange denominator_range(const MetricSpec& spec, std::span<const int> labels) {
    auto parts = vertex_parts(spec, labels);
    LambdaRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& part : parts) {
        r.lo = std::min(r.lo, part.denominator);
        r.hi = std::max(r.hi, part.denominator);
    }
    return r;
}

}  // namespace metro
