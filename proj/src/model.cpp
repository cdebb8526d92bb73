#include "metro/model.hpp"

#include "metro/errors.hpp"
#include "metro/metric.hpp"
#include "metro/rng.hpp"

#include <cmath>
#include <sstream>

namespace metro {

std::size_t Architecture::parameter_count() const noexcept {
    std::size_t in = input;
    std::size_t count = 0;
    for (std::size_t h : hidden) {
        count += h * in + h;
        in = h;
    }
    return count + in + 1;
}

Architecture Architecture::parse(const std::string& text, std::size_t input) {
    if (text == "linear") {
        return linear(input);
    }
    if (text.rfind("mlp:", 0) == 0) {
        std::vector<std::size_t> hidden;
        std::stringstream ss(text.substr(4));
        std::string part;
        while (std::getline(ss, part, ',')) {
            try {
                std::size_t used = 0;
                const long v = std::stol(part, &used);
                if (used != part.size() || v <= 0) throw std::invalid_argument(part);
                hidden.push_back(static_cast<std::size_t>(v));
            } catch (const std::exception&) {
                throw ConfigError("bad hidden layer size '" + part + "'");
            }
        }
        if (hidden.empty() || hidden.size() > 2) {
            throw ConfigError("mlp takes one or two hidden layer sizes");
        }
        return mlp(input, std::move(hidden));
    }
    throw ConfigError("unknown architecture '" + text + "' (linear | mlp:h1[,h2])");
}

std::string Architecture::to_string() const {
    if (is_linear()) return "linear";
    std::string s = "mlp:";
    for (std::size_t i = 0; i < hidden.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(hidden[i]);
    }
    return s;
}

Standardization Standardization::fit(const Dataset& data) {
    Standardization st;
    st.mean.assign(data.cols, 0.0);
    st.scale.assign(data.cols, 1.0);
    const double m = static_cast<double>(data.rows);
    for (std::size_t j = 0; j < data.cols; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < data.rows; ++i) sum += data.features[i * data.cols + j];
        const double mu = sum / m;
        double ss = 0.0;
        for (std::size_t i = 0; i < data.rows; ++i) {
            const double d = data.features[i * data.cols + j] - mu;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / m);
        st.mean[j] = mu;
        st.scale[j] = sd > 1e-12 ? sd : 1.0;
    }
    return st;
}

double forward_backward(const Architecture& arch, std::span<const double> params,
                        std::span<const double> z, double scale, std::span<double> grad,
                        Workspace& ws) {
    const bool want_grad = !grad.empty();
    if (arch.is_linear()) {
        const std::size_t d = arch.input;
        double s = params[d];
        for (std::size_t j = 0; j < d; ++j) s += params[j] * z[j];
        if (want_grad) {
            for (std::size_t j = 0; j < d; ++j) grad[j] += scale * z[j];
            grad[d] += scale;
        }
        return s;
    }

    // forward, keeping post-activation values per layer
    const std::size_t layers = arch.hidden.size();
    ws.act.resize(layers + 1);
    ws.act[0].assign(z.begin(), z.end());
    std::size_t offset = 0;
    std::size_t in = arch.input;
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t out = arch.hidden[l];
        const double* W = params.data() + offset;
        const double* b = W + out * in;
        auto& a = ws.act[l + 1];
        a.assign(out, 0.0);
        const auto& prev = ws.act[l];
        for (std::size_t o = 0; o < out; ++o) {
            double v = b[o];
            for (std::size_t k = 0; k < in; ++k) v += W[o * in + k] * prev[k];
            a[o] = v > 0.0 ? v : 0.0;
        }
        offset += out * in + out;
        in = out;
    }
    const double* w_out = params.data() + offset;
    const auto& last = ws.act[layers];
    double s = w_out[in];
    for (std::size_t k = 0; k < in; ++k) s += w_out[k] * last[k];
    if (!want_grad) return s;

    // backward
    for (std::size_t k = 0; k < in; ++k) grad[offset + k] += scale * last[k];
    grad[offset + in] += scale;
    ws.delta.assign(in, 0.0);
    for (std::size_t k = 0; k < in; ++k) {
        ws.delta[k] = last[k] > 0.0 ? scale * w_out[k] : 0.0;
    }
    for (std::size_t l = layers; l-- > 0;) {
        const std::size_t out = arch.hidden[l];
        const std::size_t lin = l == 0 ? arch.input : arch.hidden[l - 1];
        offset -= out * lin + out;
        const double* W = params.data() + offset;
        double* gW = grad.data() + offset;
        double* gb = gW + out * lin;
        const auto& prev = ws.act[l];
        for (std::size_t o = 0; o < out; ++o) {
            const double dl = ws.delta[o];
            if (dl == 0.0) continue;
            for (std::size_t k = 0; k < lin; ++k) gW[o * lin + k] += dl * prev[k];
            gb[o] += dl;
        }
        if (l == 0) break;
        ws.next_delta.assign(lin, 0.0);
        for (std::size_t k = 0; k < lin; ++k) {
            if (prev[k] <= 0.0) continue;
            double v = 0.0;
            for (std::size_t o = 0; o < out; ++o) v += W[o * lin + k] * ws.delta[o];
            ws.next_delta[k] = v;
        }
        std::swap(ws.delta, ws.next_delta);
    }
    return s;
}

std::vector<bool> weight_mask(const Architecture& arch) {
    std::vector<bool> mask(arch.parameter_count(), true);
    std::size_t offset = 0;
    std::size_t in = arch.input;
    for (std::size_t h : arch.hidden) {
        offset += h * in;
        for (std::size_t o = 0; o < h; ++o) mask[offset + o] = false;
        offset += h;
        in = h;
    }
    mask[offset + in] = false;
    return mask;
}

double Model::score(std::span<const double> x) const {
    if (x.size() != arch.input) {
        throw InputError("model expects " + std::to_string(arch.input) + " features, got " +
                         std::to_string(x.size()));
    }
    if (params.size() != arch.parameter_count()) {
        throw ValidationError("model parameter count does not match its architecture");
    }
    Workspace ws;
    if (standardization.empty()) {
        return forward_backward(arch, params, x, 0.0, {}, ws);
    }
    std::vector<double> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        z[j] = (x[j] - standardization.mean[j]) / standardization.scale[j];
    }
    return forward_backward(arch, params, z, 0.0, {}, ws);
}

int Model::label(std::span<const double> x) const { return sign_of(score(x)); }

std::vector<double> Model::scores(const Dataset& data) const {
    std::vector<double> out(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) out[i] = score(data.row(i));
    return out;
}

std::vector<int> Model::labels(const Dataset& data) const {
    std::vector<int> out(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) out[i] = label(data.row(i));
    return out;
}

std::vector<double> Model::raw_linear() const {
    if (!arch.is_linear()) {
        throw ConfigError("raw_linear needs a linear model");
    }
    const std::size_t d = arch.input;
    std::vector<double> out(params.begin(), params.end());
    if (standardization.empty()) return out;
    double b = params[d];
    for (std::size_t j = 0; j < d; ++j) {
        out[j] = params[j] / standardization.scale[j];
        b -= out[j] * standardization.mean[j];
    }
    out[d] = b;
    return out;
}

Model init_model(const Architecture& arch, std::uint64_t seed) {
    if (arch.input == 0) {
        throw ConfigError("architecture needs at least one input");
    }
    Model m;
    m.arch = arch;
    m.seed = seed;
    m.params.assign(arch.parameter_count(), 0.0);
    if (arch.is_linear()) return m;
    Rng rng(seed);
    std::size_t offset = 0;
    std::size_t in = arch.input;
    auto fill = [&](std::size_t out) {
        const double r = 1.0 / std::sqrt(static_cast<double>(in));
        for (std::size_t k = 0; k < out * in; ++k) m.params[offset + k] = rng.uniform(-r, r);
        offset += out * in + out;
        in = out;
    };
    for (std::size_t h : arch.hidden) fill(h);
    fill(1);
    return m;
}

}  // namespace metro
