#include "metro/errors.hpp"
#include "metro/metric.hpp"
#include "metro/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace metro;

namespace {

// All (labels, predictions) pairs of length m, enumerated as bit patterns.
template <class F>
void for_all_pairs(std::size_t m, F&& f) {
    const std::size_t n = std::size_t{1} << m;
    std::vector<int> y(m), s(m);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t i = 0; i < m; ++i) {
                y[i] = ((a >> i) & 1U) ? 1 : -1;
                s[i] = ((b >> i) & 1U) ? 1 : -1;
            }
            f(y, s);
        }
    }
}

double f_beta_direct(const ConfusionCounts& c, double beta) {
    const double b2 = beta * beta;
    return (1 + b2) * c.tp / ((1 + b2) * c.tp + b2 * c.fn + c.fp);
}

}  // namespace

TEST_SUITE("metric") {
TEST_CASE("sign of zero is +1") {
    CHECK(sign_of(0.0) == 1);
    CHECK(sign_of(-0.0) == 1);
    CHECK(sign_of(-1e-300) == -1);
    CHECK(sign_of(7.0) == 1);
}

TEST_CASE("label validation") {
    std::vector<int> bad{1, 0, -1};
    CHECK_THROWS_AS(check_labels(bad), InputError);
    std::vector<int> y{1, -1}, s{1};
    CHECK_THROWS_AS(confusion_from_predictions(y, s), InputError);
}

TEST_CASE("confusion bases are cell indicators") {
    for (int s : {1, -1}) {
        for (int y : {1, -1}) {
            const double sy = s * y;
            CHECK(affine(kTpBasis, sy, y, s) == (s == 1 && y == 1 ? 1.0 : 0.0));
            CHECK(affine(kFpBasis, sy, y, s) == (s == 1 && y == -1 ? 1.0 : 0.0));
            CHECK(affine(kTnBasis, sy, y, s) == (s == -1 && y == -1 ? 1.0 : 0.0));
            CHECK(affine(kFnBasis, sy, y, s) == (s == -1 && y == 1 ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("moment form equals the confusion form on every small sample") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        ConfusionCoeffs cc;
        for (auto& v : cc.num) v = rng.uniform(-2.0, 2.0);
        for (auto& v : cc.den) v = rng.uniform(0.1, 2.0);
        const MetricSpec spec = alpha_beta_from_confusion_coeffs(cc);
        for (std::size_t m = 1; m <= 5; ++m) {
            for_all_pairs(m, [&](const std::vector<int>& y, const std::vector<int>& s) {
                const auto counts = confusion_from_predictions(y, s);
                REQUIRE(empirical_metric(spec, y, s) ==
                        doctest::Approx(metric_from_confusion(cc, counts)).epsilon(1e-12));
            });
        }
    }
}

TEST_CASE("F-beta preset matches the direct formula") {
    for (double beta : {0.5, 1.0, 2.0}) {
        const MetricSpec spec = f_beta(beta);
        CHECK(spec.negated);
        for_all_pairs(4, [&](const std::vector<int>& y, const std::vector<int>& s) {
            const auto c = confusion_from_predictions(y, s);
            if (c.tp + c.fp + c.fn == 0) return;
            REQUIRE(human_value(spec, empirical_metric(spec, y, s)) ==
                    doctest::Approx(f_beta_direct(c, beta)).epsilon(1e-12));
        });
    }
}

TEST_CASE("F0.5 coefficient vectors") {
    const MetricSpec spec = f_beta(0.5);
    for (double a : spec.alpha) CHECK(a == doctest::Approx(-5.0 / 16.0));
    CHECK(spec.beta[0] == doctest::Approx(0.0));
    CHECK(spec.beta[1] == doctest::Approx(1.0 / 8.0));
    CHECK(spec.beta[2] == doctest::Approx(1.0 / 2.0));
    CHECK(spec.beta[3] == doctest::Approx(5.0 / 8.0));
}

TEST_CASE("Jaccard coefficient vectors and value") {
    const MetricSpec spec = jaccard();
    for (double a : spec.alpha) CHECK(a == doctest::Approx(-0.25));
    CHECK(spec.beta[0] == doctest::Approx(-0.25));
    CHECK(spec.beta[1] == doctest::Approx(0.25));
    CHECK(spec.beta[2] == doctest::Approx(0.25));
    CHECK(spec.beta[3] == doctest::Approx(0.75));
    for_all_pairs(4, [&](const std::vector<int>& y, const std::vector<int>& s) {
        const auto c = confusion_from_predictions(y, s);
        if (c.tp + c.fp + c.fn == 0) return;
        const double j = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp + c.fn);
        REQUIRE(-empirical_metric(spec, y, s) == doctest::Approx(j).epsilon(1e-12));
    });
}

TEST_CASE("AM at p = 1/2 is balanced accuracy") {
    const MetricSpec spec = am_measure(0.5);
    std::vector<int> y{1, 1, -1, -1};
    CHECK(empirical_metric(spec, y, y) == doctest::Approx(-1.0));
    std::vector<int> s{1, -1, -1, -1};
    // TPR = 1/2, TNR = 1
    CHECK(-empirical_metric(spec, y, s) == doctest::Approx(0.75));
    CHECK_THROWS_AS(am_measure(0.0), ConfigError);
}

TEST_CASE("weighted accuracy and accuracy") {
    for_all_pairs(3, [&](const std::vector<int>& y, const std::vector<int>& s) {
        const auto c = confusion_from_predictions(y, s);
        const double acc = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
        REQUIRE(-empirical_metric(accuracy(), y, s) == doctest::Approx(acc));
        const std::array<double, 4> w{2.0, 1.0, 3.0, 0.5};
        const double wa = (2.0 * c.tp + 1.0 * c.tn) / (2.0 * c.tp + 1.0 * c.tn + 3.0 * c.fp + 0.5 * c.fn);
        REQUIRE(-empirical_metric(weighted_accuracy(w), y, s) == doctest::Approx(wa));
    });
}

TEST_CASE("preset parsing") {
    CHECK(preset_from_string("f_beta:0.5") == f_beta(0.5));
    CHECK(preset_from_string("f1") == f_beta(1.0));
    CHECK(preset_from_string("jac") == jaccard());
    CHECK(preset_from_string("am", 0.25) == am_measure(0.25));
    CHECK(preset_from_string("wa:1,2,3,4") == weighted_accuracy({1, 2, 3, 4}));
    CHECK_THROWS_AS(preset_from_string("am"), ConfigError);
    CHECK_THROWS_AS(preset_from_string("wa:1,2"), ConfigError);
    CHECK_THROWS_AS(preset_from_string("f_beta:x"), ConfigError);
    CHECK_THROWS_AS(preset_from_string("nope"), ConfigError);
}

TEST_CASE("zero denominator raises") {
    std::vector<int> y{-1, -1}, s{-1, -1};
    CHECK_THROWS_AS(empirical_metric(jaccard(), y, s), DegenerateDenominatorError);
}

TEST_CASE("normalize_denominator") {
    std::vector<int> y{1, -1, -1, 1, -1};
    MetricSpec constant_den{{0.1, 0.2, 0.3, 0.4}, {0, 0, 0, 1}};
    CHECK(normalize_denominator(constant_den, y) == constant_den);

    MetricSpec negative_den{{0.1, 0.2, 0.3, 0.4}, {0, 0, 0, -1}};
    const MetricSpec fixed = normalize_denominator(negative_den, y);
    CHECK(fixed.flipped);
    CHECK(fixed.beta[3] == 1.0);
    CHECK(fixed.alpha[0] == -0.1);
    CHECK(empirical_metric(fixed, y, y) == doctest::Approx(empirical_metric(negative_den, y, y)));

    MetricSpec mixed{{0, 0, 0, 1}, {0, 0, 1, 0}};  // denominator E[s]
    CHECK_THROWS_AS(normalize_denominator(mixed, y), UnsupportedMetricError);

    // all-negative labels: the constant -1 probe has a zero F1 denominator and does not vote
    std::vector<int> neg{-1, -1, -1};
    CHECK(normalize_denominator(f_beta(1.0), neg) == f_beta(1.0));

    MetricSpec zero{{1, 0, 0, 0}, {0, 0, 0, 0}};
    CHECK_THROWS_AS(normalize_denominator(zero, y), ConfigError);
}

TEST_CASE("lambda bounds cover every achievable metric value") {
    std::vector<int> y{1, -1, -1, 1, -1, -1};
    for (const MetricSpec& spec : {f_beta(1.0), f_beta(0.5), jaccard(), am_measure(1.0 / 3.0), accuracy()}) {
        const LambdaRange r = lambda_bounds(spec, y);
        const std::size_t n = std::size_t{1} << y.size();
        for (std::size_t b = 0; b < n; ++b) {
            std::vector<int> s(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) s[i] = ((b >> i) & 1U) ? 1 : -1;
            const double v = empirical_metric(spec, y, s);
            REQUIRE(v > r.lo);
            REQUIRE(v < r.hi);
        }
    }
    const LambdaRange f1 = lambda_bounds(f_beta(1.0), y);
    CHECK(f1.lo == doctest::Approx(-1.05));
    CHECK(f1.hi == doctest::Approx(0.05));
}

TEST_CASE("lambda bounds fall back when a vertex denominator vanishes") {
    std::vector<int> neg{-1, -1, -1};
    CHECK_THROWS_AS(lambda_bounds(f_beta(1.0), neg), ConfigError);
    const LambdaRange r = lambda_bounds(f_beta(1.0), neg, LambdaRange{-2.0, 1.0});
    CHECK(r.lo == -2.0);
    CHECK(r.hi == 1.0);
}

TEST_CASE("constant metric widens by a relative margin") {
    std::vector<int> y{1, -1};
    MetricSpec c{{0, 0, 0, 3}, {0, 0, 0, 1}};
    const LambdaRange r = lambda_bounds(c, y);
    CHECK(r.lo == doctest::Approx(3.0 - 0.15));
    CHECK(r.hi == doctest::Approx(3.0 + 0.15));
}
}
