#pragma once

#include "metro/cost.hpp"
#include "metro/dataset.hpp"
#include "metro/model.hpp"
#include "metro/surrogate.hpp"

#include <cstdint>
#include <optional>

namespace metro {

struct TrainConfig {
    double learning_rate = 0.1;
    int epochs = 500;
    int batch_size = 64;
    double weight_decay = 1e-4;
    double momentum = 0.9;
    std::uint64_t seed = 0;
    bool standardize = true;

    void validate() const;
};

/// Mean surrogate loss of a model over a dataset (no regularization term).
double empirical_surrogate_loss(const Model& model, const Dataset& data, const CostMatrix& costs,
                                const PhiKind& kind);

/// Mini-batch gradient descent with classical momentum on the mean surrogate
/// loss plus (weight_decay / 2) * |weights|^2. The shuffle order of each epoch
/// comes from the seed, so the result is a pure function of the inputs.
/// `start` replaces the default initialization (warm start). Throws
/// DivergenceError when the epoch loss stops being finite.
Model fit_surrogate(const Dataset& data, const CostMatrix& costs, const PhiKind& kind,
                    const Architecture& arch, const TrainConfig& cfg,
                    const std::optional<Model>& start = std::nullopt);

/// Largest relative difference between the analytic parameter gradient of the
/// mean surrogate loss and central finite differences with step delta.
double gradient_check(const Model& model, const Dataset& data, const CostMatrix& costs,
                      const PhiKind& kind, double delta = 1e-6);

}  // namespace metro
