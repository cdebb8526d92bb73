#include "metro/dataset.hpp"
#include "metro/errors.hpp"
#include "metro/learner.hpp"
#include "metro/model.hpp"

#include <doctest.h>

#include <cmath>

using namespace metro;

namespace {

Dataset tiny(std::vector<double> x, std::vector<int> y, std::size_t d) {
    Dataset out;
    out.rows = y.size();
    out.cols = d;
    out.features = std::move(x);
    out.labels = std::move(y);
    return out;
}

double accuracy_of(const Model& m, const Dataset& d) {
    const auto pred = m.labels(d);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < d.rows; ++i) ok += pred[i] == d.labels[i];
    return static_cast<double>(ok) / static_cast<double>(d.rows);
}

}  // namespace

TEST_SUITE("learner") {
TEST_CASE("linear model scoring and sign(0) = +1") {
    Model m = init_model(Architecture::linear(2), 0);
    m.params = {1.0, -1.0, 0.0};
    const Dataset d = tiny({1, 1, 2, 0, 0, 2}, {1, 1, -1}, 2);
    CHECK(m.labels(d) == std::vector<int>{1, 1, -1});
    CHECK(m.score(d.row(1)) == 2.0);
}

TEST_CASE("architecture parsing and parameter counts") {
    CHECK(Architecture::parse("linear", 3).parameter_count() == 4);
    const Architecture a = Architecture::parse("mlp:4,3", 2);
    CHECK(a.hidden == std::vector<std::size_t>{4, 3});
    CHECK(a.parameter_count() == (2 * 4 + 4) + (4 * 3 + 3) + (3 + 1));
    CHECK(Architecture::parse(a.to_string(), 2) == a);
    CHECK_THROWS_AS(Architecture::parse("mlp:", 2), ConfigError);
    CHECK_THROWS_AS(Architecture::parse("mlp:0", 2), ConfigError);
    CHECK_THROWS_AS(Architecture::parse("cnn", 2), ConfigError);
}

TEST_CASE("raw_linear undoes the standardization") {
    const Dataset d = gen_two_gaussians(200, 2, 0.4, 2.0, 3.0, 1);
    TrainConfig cfg;
    cfg.epochs = 20;
    const Model m = fit_surrogate(d, training_costs(accuracy(), -0.5), PhiKind::logistic(),
                                  Architecture::linear(2), cfg);
    const auto raw = m.raw_linear();
    for (std::size_t i = 0; i < d.rows; ++i) {
        const auto x = d.row(i);
        REQUIRE(raw[0] * x[0] + raw[1] * x[1] + raw[2] == doctest::Approx(m.score(x)));
    }
}

TEST_CASE("zero costs leave the initialization unchanged") {
    const Dataset d = gen_two_gaussians(100, 2, 0.5, 2.0, 1.0, 3);
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.weight_decay = 0.0;
    const Model m = fit_surrogate(d, CostMatrix{}, PhiKind::logistic(), Architecture::linear(2), cfg);
    for (double p : m.params) CHECK(p == 0.0);
}

TEST_CASE("hinge on separable data reaches accuracy one") {
    const Dataset d = gen_two_gaussians(300, 2, 0.5, 8.0, 0.5, 4);
    TrainConfig cfg;
    cfg.epochs = 200;
    const Model m = fit_surrogate(d, weighted_zero_one(0.5), PhiKind::hinge(), Architecture::linear(2), cfg);
    CHECK(accuracy_of(m, d) == 1.0);
}

TEST_CASE("training is a pure function of its inputs") {
    const Dataset d = gen_two_gaussians(300, 3, 0.2, 2.0, 1.0, 5);
    TrainConfig cfg;
    cfg.epochs = 30;
    cfg.seed = 17;
    const auto arch = Architecture::mlp(3, {5});
    const Model a = fit_surrogate(d, training_costs(f_beta(1.0), -0.4), PhiKind::logistic(), arch, cfg);
    const Model b = fit_surrogate(d, training_costs(f_beta(1.0), -0.4), PhiKind::logistic(), arch, cfg);
    CHECK(a == b);
    cfg.seed = 18;
    const Model c = fit_surrogate(d, training_costs(f_beta(1.0), -0.4), PhiKind::logistic(), arch, cfg);
    CHECK(a.params != c.params);
}

TEST_CASE("analytic gradients match finite differences") {
    const Dataset d = gen_two_gaussians(60, 2, 0.3, 1.5, 1.0, 6);
    const CostMatrix c = training_costs(jaccard(), -0.3);
    Model lin = init_model(Architecture::linear(2), 0);
    lin.params = {0.3, -0.7, 0.1};
    CHECK(gradient_check(lin, d, c, PhiKind::logistic()) <= 1e-5);
    CHECK(gradient_check(lin, d, c, PhiKind::exponential()) <= 1e-5);

    const Model mlp = init_model(Architecture::mlp(2, {4}), 3);
    CHECK(gradient_check(mlp, d, c, PhiKind::quadratic()) <= 1e-4);
    CHECK(gradient_check(mlp, d, c, PhiKind::sigmoid()) <= 1e-4);
}

TEST_CASE("convex losses: different initializations reach the same objective") {
    const Dataset d = gen_two_gaussians(200, 2, 0.3, 1.5, 1.0, 7);
    const CostMatrix c = training_costs(f_beta(1.0), -0.5);
    TrainConfig cfg;
    cfg.epochs = 400;
    cfg.learning_rate = 0.05;
    const Model a = fit_surrogate(d, c, PhiKind::logistic(), Architecture::linear(2), cfg);
    Model start = init_model(Architecture::linear(2), 0);
    start.params = {2.0, -2.0, 1.0};
    start.standardization = a.standardization;
    const Model b = fit_surrogate(d, c, PhiKind::logistic(), Architecture::linear(2), cfg, start);
    CHECK(empirical_surrogate_loss(a, d, c, PhiKind::logistic()) ==
          doctest::Approx(empirical_surrogate_loss(b, d, c, PhiKind::logistic())).epsilon(1e-2));
}

TEST_CASE("configuration checks") {
    TrainConfig cfg;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.momentum = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("a huge learning rate diverges with an error") {
    const Dataset d = gen_two_gaussians(100, 2, 0.5, 2.0, 1.0, 8);
    TrainConfig cfg;
    cfg.learning_rate = 1e6;
    cfg.epochs = 200;
    CHECK_THROWS_AS(fit_surrogate(d, weighted_zero_one(0.5), PhiKind::exponential(),
                                  Architecture::linear(2), cfg),
                    DivergenceError);
}
}
