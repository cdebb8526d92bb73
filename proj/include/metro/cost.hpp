#pragma once

#include "metro/metric.hpp"

#include <span>

namespace metro {

/// gamma = alpha - lambda * beta for a particular (spec, lambda).
struct GammaVector {
    Coeffs gamma{};
};

/// Costs indexed by (prediction, label). Entries may be negative until
/// tau_shift is applied.
struct CostMatrix {
    double c_pp = 0.0;  ///< predict +1, label +1
    double c_pm = 0.0;  ///< predict +1, label -1
    double c_mp = 0.0;  ///< predict -1, label +1
    double c_mm = 0.0;  ///< predict -1, label -1
    bool shifted = false;
    double tau = 0.0;

    double at(int prediction, int label) const noexcept {
        if (prediction == 1) {
            return label == 1 ? c_pp : c_pm;
        }
        return label == 1 ? c_mp : c_mm;
    }

    /// L(+1, y): cost of predicting +1 for label y.
    double predict_positive(int label) const noexcept { return at(1, label); }
    /// L(-1, y): cost of predicting -1 for label y.
    double predict_negative(int label) const noexcept { return at(-1, label); }

    double max_entry() const noexcept;
    double min_entry() const noexcept;

    friend bool operator==(const CostMatrix&, const CostMatrix&) = default;
};

double ell_linear(const Coeffs& coeffs, int s, int y) noexcept;

/// l_alpha - lambda * l_beta at a single (s, y) cell.
double ell_lambda(const MetricSpec& spec, double lambda, int s, int y) noexcept;

GammaVector gamma(const MetricSpec& spec, double lambda) noexcept;

CostMatrix cost_matrix(const GammaVector& g) noexcept;

/// Adds tau = sum |gamma_i| to every entry, making all of them nonnegative.
CostMatrix tau_shift(const CostMatrix& m, const GammaVector& g) noexcept;

/// tau_shift(cost_matrix(gamma(spec, lambda))), the matrix handed to training.
CostMatrix training_costs(const MetricSpec& spec, double lambda) noexcept;

/// Mean of l^lambda over the sample.
double empirical_ell_lambda(const MetricSpec& spec, double lambda, std::span<const int> labels,
                            std::span<const int> predictions);

/// Symmetric misclassification costs: theta for a false positive,
/// 1 - theta for a false negative, zero for correct predictions.
CostMatrix weighted_zero_one(double theta) noexcept;

}  // namespace metro
