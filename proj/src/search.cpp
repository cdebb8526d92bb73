#include "metro/search.hpp"

#include "metro/cost.hpp"
#include "metro/errors.hpp"

#include <cmath>
#include <limits>

namespace metro {

void SearchConfig::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
    if (epsilon_m && (!(*epsilon_m >= 0.0) || !std::isfinite(*epsilon_m))) {
        throw ConfigError("epsilon_m must be nonnegative");
    }
    if (lambda_min && lambda_max && !(*lambda_min < *lambda_max)) {
        throw ConfigError("lambda_min must be below lambda_max");
    }
    if (!select_on_train && !(split_fraction > 0.0 && split_fraction < 1.0)) {
        throw ConfigError("split fraction must lie in (0, 1)");
    }
}

int bisection_bound(double span, double epsilon) {
    if (span <= epsilon) return 0;
    return static_cast<int>(std::ceil(std::log2(span / epsilon) - 1e-12));
}

std::pair<double, SearchTrace> bisect_lambda(const std::function<int(double)>& sign_oracle,
                                             double lambda_min, double lambda_max,
                                             double epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(lambda_min < lambda_max)) throw ConfigError("lambda_min must be below lambda_max");
    if (sign_oracle(lambda_min) != 1 || sign_oracle(lambda_max) != -1) {
        throw BracketError("oracle does not change sign from +1 at lambda_min to -1 at lambda_max");
    }
    SearchTrace trace;
    trace.algorithm = "bisect";
    double a = lambda_min, b = lambda_max;
    int it = 0;
    while (b - a > epsilon) {
        const double mid = 0.5 * (a + b);
        const int s = sign_oracle(mid);
        TraceRecord r{it++, mid, a, b, s > 0 ? "raise" : "lower", static_cast<double>(s), ""};
        (s > 0 ? a : b) = mid;
        trace.records.push_back(std::move(r));
    }
    const double out = 0.5 * (a + b);
    trace.records.push_back({it, out, a, b, "exhausted", 0.0, ""});
    return {out, std::move(trace)};
}

BandOutcome band_bisect(const std::function<double(double)>& excess, double lambda_min,
                        double lambda_max, double epsilon, double epsilon_m) {
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(lambda_min < lambda_max)) throw BracketError("lambda_min must be below lambda_max");
    BandOutcome out;
    out.trace.algorithm = "band_bisect";
    double a = lambda_min, b = lambda_max;
    int it = 0;
    bool evaluated = false;
    do {
        const double mid = 0.5 * (a + b);
        const double e = excess(mid);
        evaluated = true;
        out.lambda = mid;
        out.value = e;
        TraceRecord r{it++, mid, a, b, "", e, ""};
        if (e > epsilon_m) {
            r.decision = "raise";
            a = mid;
        } else if (e < -epsilon_m) {
            r.decision = "lower";
            b = mid;
        } else {
            r.decision = "in_band";
            out.in_band = true;
            out.trace.records.push_back(std::move(r));
            return out;
        }
        out.trace.records.push_back(std::move(r));
    } while (b - a > epsilon);
    if (evaluated) {
        out.trace.records.push_back({it, out.lambda, a, b, "exhausted", out.value, ""});
    }
    return out;
}

std::pair<Dataset, Dataset> split_for_lambda(const Dataset& data, double fraction,
                                             std::uint64_t seed) {
    auto [first, second] = stratified_split(data.labels, fraction, seed);
    return {data.subset(first), data.subset(second)};
}

double default_epsilon_m(std::size_t m) {
    if (m < 2) return 0.0;
    const double md = static_cast<double>(m);
    return std::sqrt(std::log(md) / md);
}

std::size_t grid_size(double lambda_min, double lambda_max, double epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("grid step must be positive");
    if (!(lambda_min <= lambda_max)) throw ConfigError("lambda_min must not exceed lambda_max");
    return static_cast<std::size_t>(std::floor((lambda_max - lambda_min) / epsilon + 1e-9)) + 1;
}

namespace {

struct Parts {
    Dataset fit;
    Dataset select;
};

Parts make_parts(const Dataset& train, const SearchConfig& scfg) {
    if (scfg.select_on_train) return {train, train};
    auto [sel, fit] = split_for_lambda(train, scfg.split_fraction, scfg.seed);
    return {std::move(fit), std::move(sel)};
}

LambdaRange search_range(const MetricSpec& spec, const Dataset& select, const SearchConfig& scfg) {
    if (scfg.lambda_min && scfg.lambda_max) return {*scfg.lambda_min, *scfg.lambda_max};
    const LambdaRange r = lambda_bounds(spec, select.labels);
    return {scfg.lambda_min.value_or(r.lo), scfg.lambda_max.value_or(r.hi)};
}

}  // namespace

SearchResult metro_bisect(const Dataset& train, const MetricSpec& spec, const PhiKind& kind,
                          const Architecture& arch, const TrainConfig& tcfg,
                          const SearchConfig& scfg) {
    scfg.validate();
    const Parts parts = make_parts(train, scfg);
    const LambdaRange range = search_range(spec, parts.select, scfg);
    const double eps_m = scfg.epsilon_m.value_or(default_epsilon_m(parts.select.rows));
    Model last;
    auto excess = [&](double lambda) {
        last = fit_surrogate(parts.fit, training_costs(spec, lambda), kind, arch, tcfg);
        return empirical_ell_lambda(spec, lambda, parts.select.labels, last.labels(parts.select));
    };
    BandOutcome band = band_bisect(excess, range.lo, range.hi, scfg.epsilon, eps_m);
    SearchResult res;
    res.model = std::move(last);
    res.lambda = band.lambda;
    res.value = band.value;
    res.in_band = band.in_band;
    res.trace = std::move(band.trace);
    res.trace.algorithm = "metro_bisect";
    return res;
}

SearchResult metro_grid(const Dataset& train, const MetricSpec& spec, const PhiKind& kind,
                        const Architecture& arch, const TrainConfig& tcfg,
                        const SearchConfig& scfg) {
    scfg.validate();
    const Parts parts = make_parts(train, scfg);
    const LambdaRange range = search_range(spec, parts.select, scfg);
    const std::size_t n = grid_size(range.lo, range.hi, scfg.epsilon);

    struct Point {
        Model model;
        double value = std::numeric_limits<double>::infinity();
        std::string status = "evaluated";
        std::string note;
    };
    std::vector<Point> points(n);
    auto run = [&](std::size_t i, const std::optional<Model>& start) {
        const double lambda = range.lo + static_cast<double>(i) * scfg.epsilon;
        Point& p = points[i];
        try {
            p.model = fit_surrogate(parts.fit, training_costs(spec, lambda), kind, arch, tcfg, start);
            p.value = empirical_metric(spec, parts.select.labels, p.model.labels(parts.select));
        } catch (const DivergenceError& e) {
            p.status = "skipped";
            p.note = e.what();
        } catch (const DegenerateDenominatorError& e) {
            p.status = "skipped";
            p.note = e.what();
        }
    };
    if (scfg.warm_start) {
        std::optional<Model> prev;
        for (std::size_t i = 0; i < n; ++i) {
            run(i, prev);
            if (points[i].status == "evaluated") prev = points[i].model;
        }
    } else {
        const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < nn; ++i) {
            run(static_cast<std::size_t>(i), std::nullopt);
        }
    }

    SearchResult res;
    res.trace.algorithm = "metro_grid";
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < n; ++i) {
        const double lambda = range.lo + static_cast<double>(i) * scfg.epsilon;
        res.trace.records.push_back({static_cast<int>(i), lambda, range.lo, range.hi,
                                     points[i].status, points[i].value, points[i].note});
        if (points[i].status == "evaluated" && (!best || points[i].value < points[*best].value)) {
            best = i;
        }
    }
    if (!best) {
        throw DivergenceError(tcfg.epochs - 1);
    }
    res.trace.records[*best].decision = "selected";
    res.lambda = range.lo + static_cast<double>(*best) * scfg.epsilon;
    res.value = points[*best].value;
    res.model = std::move(points[*best].model);
    return res;
}

}  // namespace metro
