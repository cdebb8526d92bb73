#include "metro/baselines.hpp"

#include "metro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace metro {

std::vector<int> ScoredClassifier::predict(const Dataset& data) const {
    std::vector<int> out(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) out[i] = sign_of(model.score(data.row(i)) - threshold);
    return out;
}

BaselineKind parse_baseline(const std::string& name) {
    if (name == "erm") return BaselineKind::erm;
    if (name == "threshold_sweep") return BaselineKind::threshold_sweep;
    if (name == "weighted_grid") return BaselineKind::weighted_grid;
    if (name == "two_threshold") return BaselineKind::two_threshold;
    throw ConfigError("unknown baseline '" + name + "'");
}

std::string to_string(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::erm: return "erm";
        case BaselineKind::threshold_sweep: return "threshold_sweep";
        case BaselineKind::weighted_grid: return "weighted_grid";
        case BaselineKind::two_threshold: return "two_threshold";
    }
    return "?";
}

std::vector<double> BaselineConfig::theta_grid() const {
    if (!thetas.empty()) {
        for (double t : thetas) {
            if (!(t > 0.0 && t < 1.0)) throw ConfigError("theta values must lie in (0, 1)");
        }
        return thetas;
    }
    if (resolution < 1) throw ConfigError("weighted grid resolution must be positive");
    std::vector<double> out(static_cast<std::size_t>(resolution));
    for (int k = 0; k < resolution; ++k) {
        out[static_cast<std::size_t>(k)] = static_cast<double>(k + 1) / static_cast<double>(resolution + 1);
    }
    return out;
}

CostMatrix theta_costs(double theta) {
    CostMatrix m = weighted_zero_one(theta);
    m.c_pm *= 2.0;
    m.c_mp *= 2.0;
    return m;
}

ThresholdChoice sweep_threshold(std::span<const double> scores, std::span<const int> labels,
                                const MetricSpec& spec) {
    check_labels(labels);
    if (scores.size() != labels.size() || scores.empty()) {
        throw ConfigError("threshold sweep needs one score per label");
    }
    std::vector<double> u(scores.begin(), scores.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    std::vector<double> cand;
    cand.reserve(u.size() + 2);
    cand.push_back(u.front() - 1.0);
    for (std::size_t k = 0; k + 1 < u.size(); ++k) cand.push_back(0.5 * (u[k] + u[k + 1]));
    cand.push_back(u.back() + 1.0);
    cand.push_back(0.0);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    // rows by descending score; moving the offset down turns rows positive
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
    });
    ConfusionCounts c;
    for (int y : labels) (y == 1 ? c.fn : c.tn)++;
    std::size_t next = 0;
    bool found = false;
    ThresholdChoice best;
    for (std::size_t k = cand.size(); k-- > 0;) {
        const double t = cand[k];
        while (next < order.size() && scores[order[next]] - t >= 0.0) {
            if (labels[order[next]] == 1) {
                --c.fn;
                ++c.tp;
            } else {
                --c.tn;
                ++c.fp;
            }
            ++next;
        }
        const auto parts = ratio_parts(spec, moments_from_counts(c));
        if (parts.denominator == 0.0) continue;
        const double v = parts.numerator / parts.denominator;
        // descending offsets: ties move to the smaller one
        if (!found || v <= best.value) {
            best = {t, v};
            found = true;
        }
    }
    if (!found) throw ConfigError("no threshold gives a nonzero metric denominator");
    return best;
}

BaselineResult run_baseline(const BaselineConfig& cfg, const Dataset& train, const Dataset& val,
                            const MetricSpec& spec, const Architecture& arch,
                            const TrainConfig& tcfg) {
    const PhiKind logistic = PhiKind::logistic();
    BaselineResult res;
    auto evaluate = [&](const ScoredClassifier& clf) {
        return empirical_metric(spec, val.labels, clf.predict(val));
    };
    switch (cfg.kind) {
        case BaselineKind::erm:
        case BaselineKind::threshold_sweep: {
            res.classifier.model = fit_surrogate(train, theta_costs(0.5), logistic, arch, tcfg);
            res.fits = 1;
            if (cfg.kind == BaselineKind::threshold_sweep) {
                const auto s = res.classifier.model.scores(val);
                const auto choice = sweep_threshold(s, val.labels, spec);
                res.classifier.threshold = choice.threshold;
                res.selection_value = choice.value;
            } else {
                res.selection_value = evaluate(res.classifier);
            }
            return res;
        }
        case BaselineKind::weighted_grid:
        case BaselineKind::two_threshold: {
            const auto thetas = cfg.theta_grid();
            const auto n = static_cast<std::ptrdiff_t>(thetas.size());
            std::vector<BaselineResult> cells(thetas.size());
            std::vector<std::string> errors(thetas.size());
#pragma omp parallel for schedule(dynamic, 1)
            for (std::ptrdiff_t k = 0; k < n; ++k) {
                auto& cell = cells[static_cast<std::size_t>(k)];
                try {
                    cell.theta = thetas[static_cast<std::size_t>(k)];
                    cell.classifier.model = fit_surrogate(train, theta_costs(cell.theta), logistic, arch, tcfg);
                    if (cfg.kind == BaselineKind::two_threshold) {
                        const auto s = cell.classifier.model.scores(val);
                        const auto choice = sweep_threshold(s, val.labels, spec);
                        cell.classifier.threshold = choice.threshold;
                        cell.selection_value = choice.value;
                    } else {
                        cell.selection_value = evaluate(cell.classifier);
                    }
                } catch (const std::exception& e) {
                    errors[static_cast<std::size_t>(k)] = e.what();
                }
            }
            for (std::size_t k = 0; k < errors.size(); ++k) {
                if (!errors[k].empty()) {
                    throw Error("weighted fit at theta " + std::to_string(thetas[k]) + ": " + errors[k]);
                }
            }
            std::size_t best = 0;
            for (std::size_t k = 1; k < cells.size(); ++k) {
                if (cells[k].selection_value < cells[best].selection_value) best = k;
            }
            res = std::move(cells[best]);
            res.fits = static_cast<int>(thetas.size());
            return res;
        }
    }
    return res;
}

}  // namespace metro
