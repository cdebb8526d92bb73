#include "metro/surrogate.hpp"

#include "metro/errors.hpp"

#include <cmath>
#include <sstream>

namespace metro {

PhiKind PhiKind::sigmoid(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ConfigError("sigmoid parameter k must be positive");
    }
    return {PhiFamily::sigmoid, k};
}

PhiKind PhiKind::rho_margin(double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw ConfigError("rho-margin parameter rho must be positive");
    }
    return {PhiFamily::rho_margin, rho};
}

PhiKind PhiKind::parse(std::string_view text) {
    std::string_view head = text;
    std::string_view arg;
    if (auto colon = text.find(':'); colon != std::string_view::npos) {
        head = text.substr(0, colon);
        arg = text.substr(colon + 1);
    }
    auto param = [&](double fallback) {
        if (arg.empty()) {
            return fallback;
        }
        std::string s(arg);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw ConfigError("bad Phi parameter '" + s + "'");
        }
        if (used != s.size()) {
            throw ConfigError("bad Phi parameter '" + s + "'");
        }
        return v;
    };
    auto no_arg = [&](PhiKind k) {
        if (!arg.empty()) {
            throw ConfigError("Phi kind '" + std::string(head) + "' takes no parameter");
        }
        return k;
    };
    if (head == "exp" || head == "exponential") return no_arg(exponential());
    if (head == "logistic" || head == "log") return no_arg(logistic());
    if (head == "quadratic" || head == "quad") return no_arg(quadratic());
    if (head == "hinge") return no_arg(hinge());
    if (head == "sigmoid" || head == "sig") return sigmoid(param(1.0));
    if (head == "rho" || head == "rho_margin") return rho_margin(param(1.0));
    throw ConfigError("unknown Phi kind '" + std::string(text) + "'");
}

std::string PhiKind::to_string() const {
    switch (family) {
        case PhiFamily::exponential: return "exp";
        case PhiFamily::logistic: return "logistic";
        case PhiFamily::quadratic: return "quadratic";
        case PhiFamily::hinge: return "hinge";
        case PhiFamily::sigmoid:
        case PhiFamily::rho_margin: {
            std::ostringstream os;
            os.precision(17);
            os << (family == PhiFamily::sigmoid ? "sigmoid:" : "rho:") << param;
            return os.str();
        }
    }
    return "?";
}

bool PhiKind::is_convex() const noexcept {
    return family == PhiFamily::exponential || family == PhiFamily::logistic ||
           family == PhiFamily::quadratic || family == PhiFamily::hinge;
}

bool PhiKind::is_smooth() const noexcept {
    return family != PhiFamily::hinge && family != PhiFamily::rho_margin;
}

double phi(const PhiKind& kind, double t) noexcept {
    switch (kind.family) {
        case PhiFamily::exponential:
            return std::exp(-t);
        case PhiFamily::logistic:
            // log(1 + e^{-t}) without overflow for large |t|
            return std::max(-t, 0.0) + std::log1p(std::exp(-std::abs(t)));
        case PhiFamily::quadratic: {
            const double u = std::max(1.0 - t, 0.0);
            return u * u;
        }
        case PhiFamily::hinge:
            return std::max(1.0 - t, 0.0);
        case PhiFamily::sigmoid:
            return 1.0 - std::tanh(kind.param * t);
        case PhiFamily::rho_margin:
            return std::min(1.0, std::max(0.0, 1.0 - t / kind.param));
    }
    return 0.0;
}

double phi_grad(const PhiKind& kind, double t) noexcept {
    switch (kind.family) {
        case PhiFamily::exponential:
            return -std::exp(-t);
        case PhiFamily::logistic:
            if (t >= 0.0) {
                const double e = std::exp(-t);
                return -e / (1.0 + e);
            }
            return -1.0 / (1.0 + std::exp(t));
        case PhiFamily::quadratic:
            return -2.0 * std::max(1.0 - t, 0.0);
        case PhiFamily::hinge:
            return t < 1.0 ? -1.0 : 0.0;
        case PhiFamily::sigmoid: {
            const double th = std::tanh(kind.param * t);
            return -kind.param * (1.0 - th * th);
        }
        case PhiFamily::rho_margin:
            return (t >= 0.0 && t < kind.param) ? -1.0 / kind.param : 0.0;
    }
    return 0.0;
}

GammaExponents consistency_exponents(const PhiKind& kind) noexcept {
    switch (kind.family) {
        case PhiFamily::exponential:
        case PhiFamily::logistic:
            return {0.5, std::sqrt(2.0)};
        case PhiFamily::quadratic:
            return {0.5, 1.0};
        case PhiFamily::hinge:
        case PhiFamily::sigmoid:
        case PhiFamily::rho_margin:
            return {1.0, 1.0};
    }
    return {1.0, 1.0};
}

double surrogate_loss(const CostMatrix& m, double score, int y, const PhiKind& kind) noexcept {
    return m.predict_positive(y) * phi(kind, -score) + m.predict_negative(y) * phi(kind, score);
}

double surrogate_grad(const CostMatrix& m, double score, int y, const PhiKind& kind) noexcept {
    return -m.predict_positive(y) * phi_grad(kind, -score) +
           m.predict_negative(y) * phi_grad(kind, score);
}

LossAndGrad surrogate_loss_grad(const CostMatrix& m, double score, int y,
                                const PhiKind& kind) noexcept {
    const double a = m.predict_positive(y);
    const double b = m.predict_negative(y);
    return {a * phi(kind, -score) + b * phi(kind, score),
            -a * phi_grad(kind, -score) + b * phi_grad(kind, score)};
}

}  // namespace metro
