#pragma once

// Margin-based functions Phi and the general cost-sensitive surrogate
//
//   L_Phi(h, x, y) = L(+1, y) * Phi(-h(x)) + L(-1, y) * Phi(h(x)).

#include "metro/cost.hpp"

#include <string>
#include <string_view>

namespace metro {

enum class PhiFamily { exponential, logistic, quadratic, hinge, sigmoid, rho_margin };

struct PhiKind {
    PhiFamily family = PhiFamily::logistic;
    /// k for sigmoid, rho for rho_margin; ignored otherwise.
    double param = 1.0;

    static PhiKind exponential() { return {PhiFamily::exponential, 1.0}; }
    static PhiKind logistic() { return {PhiFamily::logistic, 1.0}; }
    static PhiKind quadratic() { return {PhiFamily::quadratic, 1.0}; }
    static PhiKind hinge() { return {PhiFamily::hinge, 1.0}; }
    static PhiKind sigmoid(double k = 1.0);
    static PhiKind rho_margin(double rho = 1.0);

    /// "exp" | "logistic" | "quadratic" | "hinge" | "sigmoid[:k]" | "rho[:rho]"
    static PhiKind parse(std::string_view text);
    std::string to_string() const;

    bool is_convex() const noexcept;
    bool is_smooth() const noexcept;

    friend bool operator==(const PhiKind&, const PhiKind&) = default;
};

/// All six families with default parameters.
inline constexpr PhiFamily kAllFamilies[] = {PhiFamily::exponential, PhiFamily::logistic,
                                             PhiFamily::quadratic,   PhiFamily::hinge,
                                             PhiFamily::sigmoid,     PhiFamily::rho_margin};

double phi(const PhiKind& kind, double t) noexcept;

/// Derivative of phi; right-hand derivative at the hinge and rho-margin kinks.
double phi_grad(const PhiKind& kind, double t) noexcept;

/// Exponent pair (a, b) of the zero-one consistency bound Gamma(t) = b * t^a.
struct GammaExponents {
    double a = 1.0;
    double b = 1.0;
};
GammaExponents consistency_exponents(const PhiKind& kind) noexcept;

double surrogate_loss(const CostMatrix& m, double score, int y, const PhiKind& kind) noexcept;

/// d surrogate_loss / d score.
double surrogate_grad(const CostMatrix& m, double score, int y, const PhiKind& kind) noexcept;

/// Value and derivative together (one pass, used by the trainer).
struct LossAndGrad {
    double loss = 0.0;
    double grad = 0.0;
};
LossAndGrad surrogate_loss_grad(const CostMatrix& m, double score, int y,
                                const PhiKind& kind) noexcept;

}  // namespace metro
