#include "metro/learner.hpp"

#include "metro/errors.hpp"
#include "metro/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace metro {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning rate must be positive");
    }
    if (epochs < 1) throw ConfigError("epochs must be positive");
    if (batch_size < 1) throw ConfigError("batch size must be positive");
    if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
        throw ConfigError("weight decay must be nonnegative");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw ConfigError("momentum must lie in [0, 1)");
    }
}

namespace {

std::vector<double> standardized(const Model& model, const Dataset& data) {
    std::vector<double> z(data.features);
    if (model.standardization.empty()) return z;
    for (std::size_t i = 0; i < data.rows; ++i) {
        for (std::size_t j = 0; j < data.cols; ++j) {
            z[i * data.cols + j] = (z[i * data.cols + j] - model.standardization.mean[j]) /
                                   model.standardization.scale[j];
        }
    }
    return z;
}

// Mean loss and (optionally) its parameter gradient over all rows.
double full_loss(const Model& model, std::span<const double> params, std::span<const double> z,
                 const Dataset& data, const CostMatrix& costs, const PhiKind& kind,
                 std::span<double> grad, Workspace& ws) {
    const double inv_m = 1.0 / static_cast<double>(data.rows);
    double loss = 0.0;
    std::vector<double> unit;
    if (!grad.empty()) {
        std::fill(grad.begin(), grad.end(), 0.0);
        unit.assign(params.size(), 0.0);
    }
    for (std::size_t i = 0; i < data.rows; ++i) {
        std::span<const double> zi(z.data() + i * data.cols, data.cols);
        const double s = forward_backward(model.arch, params, zi, 0.0, {}, ws);
        const auto lg = surrogate_loss_grad(costs, s, data.labels[i], kind);
        loss += lg.loss * inv_m;
        if (!grad.empty() && lg.grad != 0.0) {
            forward_backward(model.arch, params, zi, lg.grad * inv_m, grad, ws);
        }
    }
    return loss;
}

}  // namespace

double empirical_surrogate_loss(const Model& model, const Dataset& data, const CostMatrix& costs,
                                const PhiKind& kind) {
    data.validate();
    const auto z = standardized(model, data);
    Workspace ws;
    return full_loss(model, model.params, z, data, costs, kind, {}, ws);
}

Model fit_surrogate(const Dataset& data, const CostMatrix& costs, const PhiKind& kind,
                    const Architecture& arch, const TrainConfig& cfg,
                    const std::optional<Model>& start) {
    cfg.validate();
    data.validate();
    if (arch.input != data.cols) {
        throw InputError("architecture expects " + std::to_string(arch.input) +
                         " features, data has " + std::to_string(data.cols));
    }
    Model model;
    if (start) {
        if (!(start->arch == arch)) throw ConfigError("warm start has a different architecture");
        model = *start;
        model.seed = cfg.seed;
    } else {
        model = init_model(arch, cfg.seed);
        if (cfg.standardize) model.standardization = Standardization::fit(data);
    }

    const auto z = standardized(model, data);
    const std::size_t m = data.rows;
    const std::size_t d = data.cols;
    const std::size_t np = model.params.size();
    const auto decay = weight_mask(arch);
    std::vector<double> velocity(np, 0.0);
    std::vector<double> grad(np, 0.0);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(Rng::derive(cfg.seed, 0x7261696eULL));
    Workspace ws;
    const auto batch = static_cast<std::size_t>(cfg.batch_size);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        double epoch_loss = 0.0;
        for (std::size_t start_row = 0; start_row < m; start_row += batch) {
            const std::size_t end = std::min(m, start_row + batch);
            const double inv_b = 1.0 / static_cast<double>(end - start_row);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t k = start_row; k < end; ++k) {
                const std::size_t i = order[k];
                std::span<const double> zi(z.data() + i * d, d);
                const double s = forward_backward(arch, model.params, zi, 0.0, {}, ws);
                const auto lg = surrogate_loss_grad(costs, s, data.labels[i], kind);
                epoch_loss += lg.loss;
                if (lg.grad != 0.0) {
                    forward_backward(arch, model.params, zi, lg.grad * inv_b, grad, ws);
                }
            }
            for (std::size_t p = 0; p < np; ++p) {
                const double g = grad[p] + (decay[p] ? cfg.weight_decay * model.params[p] : 0.0);
                velocity[p] = cfg.momentum * velocity[p] - cfg.learning_rate * g;
                model.params[p] += velocity[p];
            }
        }
        if (!std::isfinite(epoch_loss)) {
            throw DivergenceError(epoch);
        }
    }
    for (double p : model.params) {
        if (!std::isfinite(p)) throw DivergenceError(cfg.epochs - 1);
    }
    return model;
}

double gradient_check(const Model& model, const Dataset& data, const CostMatrix& costs,
                      const PhiKind& kind, double delta) {
    data.validate();
    const auto z = standardized(model, data);
    Workspace ws;
    std::vector<double> analytic(model.params.size(), 0.0);
    full_loss(model, model.params, z, data, costs, kind, analytic, ws);
    std::vector<double> p = model.params;
    double worst = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double keep = p[k];
        p[k] = keep + delta;
        const double up = full_loss(model, p, z, data, costs, kind, {}, ws);
        p[k] = keep - delta;
        const double down = full_loss(model, p, z, data, costs, kind, {}, ws);
        p[k] = keep;
        const double numeric = (up - down) / (2.0 * delta);
        const double denom = std::max({std::abs(numeric), std::abs(analytic[k]), 1e-8});
        worst = std::max(worst, std::abs(numeric - analytic[k]) / denom);
    }
    return worst;
}

}  // namespace metro
