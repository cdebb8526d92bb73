#include "metro/baselines.hpp"
#include "metro/dataset.hpp"
#include "metro/errors.hpp"
#include "metro/metric.hpp"

#include <doctest.h>

using namespace metro;

TEST_SUITE("baselines") {
TEST_CASE("theta costs") {
    const CostMatrix c = theta_costs(0.5);
    CHECK(c.c_pm == 1.0);
    CHECK(c.c_mp == 1.0);
    CHECK(c.c_pp == 0.0);
}

TEST_CASE("theta grid") {
    BaselineConfig cfg;
    cfg.resolution = 3;
    CHECK(cfg.theta_grid() == std::vector<double>{0.25, 0.5, 0.75});
    cfg.thetas = {0.1};
    CHECK(cfg.theta_grid() == std::vector<double>{0.1});
}

TEST_CASE("parse names") {
    for (auto k : {BaselineKind::erm, BaselineKind::threshold_sweep, BaselineKind::weighted_grid,
                   BaselineKind::two_threshold}) {
        CHECK(parse_baseline(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_baseline("svm"), ConfigError);
}

TEST_CASE("sweep on separable scores reaches accuracy one") {
    const std::vector<double> s{-3, -2, -1, 0.5, 1, 4};
    const std::vector<int> y{-1, -1, 1, 1, 1, 1};
    const ThresholdChoice t = sweep_threshold(s, y, accuracy());
    CHECK(t.value == doctest::Approx(-1.0));
    CHECK(t.threshold == doctest::Approx(-1.5));
}

TEST_CASE("sweep value is the best over every cut") {
    const Dataset d = gen_two_gaussians(80, 1, 0.3, 1.0, 1.0, 2);
    const std::vector<double>& s = d.features;
    const ThresholdChoice t = sweep_threshold(s, d.labels, f_beta(1.0));
    std::vector<int> pred(d.rows);
    for (std::size_t i = 0; i < d.rows; ++i) pred[i] = sign_of(s[i] - t.threshold);
    CHECK(empirical_metric(f_beta(1.0), d.labels, pred) == doctest::Approx(t.value));
    for (std::size_t j = 0; j < d.rows; ++j) {
        for (std::size_t i = 0; i < d.rows; ++i) pred[i] = sign_of(s[i] - s[j]);
        REQUIRE(empirical_metric(f_beta(1.0), d.labels, pred) >= t.value - 1e-12);
    }
}

TEST_CASE("weighted grid with theta 1/2 is erm") {
    const Dataset d = gen_two_gaussians(200, 2, 0.2, 2.0, 1.0, 3);
    TrainConfig t;
    t.epochs = 30;
    BaselineConfig erm;
    BaselineConfig w{BaselineKind::weighted_grid, 19, {0.5}};
    const auto a = run_baseline(erm, d, d, f_beta(1.0), Architecture::linear(2), t);
    const auto b = run_baseline(w, d, d, f_beta(1.0), Architecture::linear(2), t);
    CHECK(a.classifier.model == b.classifier.model);
    CHECK(a.classifier.threshold == b.classifier.threshold);
    CHECK(b.theta == 0.5);
}

TEST_CASE("two_threshold selects at least as well as weighted_grid on the selection set") {
    const Dataset d = gen_two_gaussians(300, 2, 0.15, 2.0, 1.0, 4);
    TrainConfig t;
    t.epochs = 30;
    BaselineConfig w{BaselineKind::weighted_grid, 5, {}};
    BaselineConfig tt{BaselineKind::two_threshold, 5, {}};
    const auto a = run_baseline(w, d, d, f_beta(1.0), Architecture::linear(2), t);
    const auto b = run_baseline(tt, d, d, f_beta(1.0), Architecture::linear(2), t);
    CHECK(b.selection_value <= a.selection_value + 1e-12);
    CHECK(a.fits == 5);
}

TEST_CASE("threshold sweep improves on erm on the selection set") {
    const Dataset d = gen_two_gaussians(300, 2, 0.1, 2.0, 1.0, 5);
    TrainConfig t;
    t.epochs = 30;
    const auto erm = run_baseline({}, d, d, f_beta(1.0), Architecture::linear(2), t);
    const auto sweep = run_baseline({BaselineKind::threshold_sweep, 19, {}}, d, d, f_beta(1.0),
                                    Architecture::linear(2), t);
    CHECK(sweep.selection_value <= erm.selection_value + 1e-12);
    CHECK(sweep.classifier.model == erm.classifier.model);
}
}
