#include "metro/cost.hpp"

#include <algorithm>
#include <cmath>

namespace metro {

double CostMatrix::max_entry() const noexcept {
    return std::max({c_pp, c_pm, c_mp, c_mm});
}

double CostMatrix::min_entry() const noexcept {
    return std::min({c_pp, c_pm, c_mp, c_mm});
}

double ell_linear(const Coeffs& c, int s, int y) noexcept {
    return affine(c, static_cast<double>(s * y), static_cast<double>(y), static_cast<double>(s));
}

double ell_lambda(const MetricSpec& spec, double lambda, int s, int y) noexcept {
    return ell_linear(spec.alpha, s, y) - lambda * ell_linear(spec.beta, s, y);
}

GammaVector gamma(const MetricSpec& spec, double lambda) noexcept {
    GammaVector g;
    for (std::size_t i = 0; i < 4; ++i) {
        g.gamma[i] = spec.alpha[i] - lambda * spec.beta[i];
    }
    return g;
}

CostMatrix cost_matrix(const GammaVector& gv) noexcept {
    const auto& g = gv.gamma;
    CostMatrix m;
    m.c_pp = g[0] + g[1] + g[2] + g[3];
    m.c_pm = -g[0] - g[1] + g[2] + g[3];
    m.c_mp = -g[0] + g[1] - g[2] + g[3];
    m.c_mm = g[0] - g[1] - g[2] + g[3];
    return m;
}

CostMatrix tau_shift(const CostMatrix& m, const GammaVector& g) noexcept {
    double tau = 0.0;
    for (double v : g.gamma) {
        tau += std::abs(v);
    }
    CostMatrix out = m;
    out.c_pp += tau;
    out.c_pm += tau;
    out.c_mp += tau;
    out.c_mm += tau;
    out.shifted = true;
    out.tau = tau;
    return out;
}

CostMatrix training_costs(const MetricSpec& spec, double lambda) noexcept {
    GammaVector g = gamma(spec, lambda);
    return tau_shift(cost_matrix(g), g);
}

double empirical_ell_lambda(const MetricSpec& spec, double lambda, std::span<const int> labels,
                            std::span<const int> predictions) {
    // Linear in the moments, so the mean over pairs equals l^lambda at the means.
    Moments mo = moments_from_counts(confusion_from_predictions(labels, predictions));
    return affine(spec.alpha, mo.sy, mo.y, mo.s) - lambda * affine(spec.beta, mo.sy, mo.y, mo.s);
}

CostMatrix weighted_zero_one(double theta) noexcept {
    CostMatrix m;
    m.c_pm = theta;
    m.c_mp = 1.0 - theta;
    m.shifted = true;
    return m;
}

}  // namespace metro
