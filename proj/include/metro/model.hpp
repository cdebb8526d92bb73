#pragma once

#include "metro/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace metro {

/// Linear scorer when `hidden` is empty, otherwise a ReLU MLP with one output.
struct Architecture {
    std::size_t input = 0;
    std::vector<std::size_t> hidden;

    bool is_linear() const noexcept { return hidden.empty(); }
    std::size_t parameter_count() const noexcept;

    static Architecture linear(std::size_t d) { return {d, {}}; }
    static Architecture mlp(std::size_t d, std::vector<std::size_t> hidden) {
        return {d, std::move(hidden)};
    }
    /// "linear" or "mlp:h1[,h2]".
    static Architecture parse(const std::string& text, std::size_t input);
    std::string to_string() const;

    friend bool operator==(const Architecture&, const Architecture&) = default;
};

/// Per-feature affine map z = (x - mean) / scale applied before scoring.
struct Standardization {
    std::vector<double> mean;
    std::vector<double> scale;

    bool empty() const noexcept { return mean.empty(); }
    static Standardization fit(const Dataset& data);

    friend bool operator==(const Standardization&, const Standardization&) = default;
};

/// Scoring function h: R^d -> R.
///
/// Parameter layout: linear is [w_1..w_d, b]. An MLP stores, per layer, the
/// weight matrix (outputs x inputs, row-major) followed by the bias vector;
/// the last layer has a single output.
struct Model {
    Architecture arch;
    std::vector<double> params;
    Standardization standardization;
    std::uint64_t seed = 0;

    double score(std::span<const double> x) const;
    int label(std::span<const double> x) const;
    std::vector<double> scores(const Dataset& data) const;
    std::vector<int> labels(const Dataset& data) const;

    /// Linear models only: weights and bias in the raw input space.
    std::vector<double> raw_linear() const;

    friend bool operator==(const Model&, const Model&) = default;
};

/// Zero parameters for linear models; U(-1/sqrt(fan_in), 1/sqrt(fan_in))
/// weights and zero biases for MLPs.
Model init_model(const Architecture& arch, std::uint64_t seed);

/// Reusable buffers for forward and backward passes.
struct Workspace {
    std::vector<double> z;
    std::vector<std::vector<double>> act;
    std::vector<double> delta;
    std::vector<double> next_delta;
};

/// Score of an already standardized input; when grad is non-empty, adds
/// scale * d score / d params into it.
double forward_backward(const Architecture& arch, std::span<const double> params,
                        std::span<const double> z, double scale, std::span<double> grad,
                        Workspace& ws);

/// Indices of parameters that are weights (not biases); weight decay applies to these.
std::vector<bool> weight_mask(const Architecture& arch);

}  // namespace metro
