#include "metro/oracle.hpp"

#include "metro/errors.hpp"
#include "metro/json_io.hpp"
#include "metro/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace metro {

// ---------------------------------------------------------------------------
// Distributions and sets
// ---------------------------------------------------------------------------

FiniteDistribution FiniteDistribution::from_labels(std::span<const int> labels) {
    check_labels(labels);
    if (labels.empty()) throw InputError("empty label vector");
    FiniteDistribution d;
    const double w = 1.0 / static_cast<double>(labels.size());
    d.weight.assign(labels.size(), w);
    d.eta.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) d.eta[i] = labels[i] == 1 ? 1.0 : 0.0;
    return d;
}

std::vector<double> FiniteDistribution::mean_labels() const {
    std::vector<double> mu(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) mu[i] = 2.0 * eta[i] - 1.0;
    return mu;
}

void FiniteDistribution::validate() const {
    if (weight.empty()) throw ValidationError("distribution has no support points");
    if (eta.size() != weight.size()) throw ValidationError("weights and eta differ in length");
    double total = 0.0;
    for (double w : weight) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "weights sum to " << total << ", not 1";
        throw ValidationError(os.str());
    }
    for (double e : eta) {
        if (!(e >= 0.0 && e <= 1.0)) throw ValidationError("eta must lie in [0, 1]");
    }
}

bool FiniteHypothesisSet::regular() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < points; ++i) {
        bool pos = false, neg = false;
        for (std::size_t h = 0; h < n && !(pos && neg); ++h) {
            (signs[h * points + i] == 1 ? pos : neg) = true;
        }
        if (!(pos && neg)) return false;
    }
    return true;
}

FiniteHypothesisSet FiniteHypothesisSet::from_scores(std::size_t points, std::vector<double> scores) {
    FiniteHypothesisSet hs;
    hs.points = points;
    hs.signs.resize(scores.size());
    for (std::size_t k = 0; k < scores.size(); ++k) {
        hs.signs[k] = static_cast<std::int8_t>(sign_of(scores[k]));
    }
    hs.scores = std::move(scores);
    hs.validate();
    return hs;
}

FiniteHypothesisSet FiniteHypothesisSet::from_signs(std::size_t points,
                                                    std::vector<std::int8_t> signs) {
    FiniteHypothesisSet hs;
    hs.points = points;
    hs.signs = std::move(signs);
    hs.validate();
    return hs;
}

void FiniteHypothesisSet::validate() const {
    if (points == 0 || signs.empty() || signs.size() % points != 0) {
        throw ValidationError("hypothesis set is empty or ragged");
    }
    for (auto s : signs) {
        if (s != 1 && s != -1) throw ValidationError("hypothesis predictions must be +1 or -1");
    }
    if (!scores.empty()) {
        if (scores.size() != signs.size()) throw ValidationError("scores and signs differ in size");
        for (std::size_t k = 0; k < scores.size(); ++k) {
            if (!std::isfinite(scores[k]) || sign_of(scores[k]) != signs[k]) {
                throw ValidationError("scores must be finite and agree with the signs");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

FiniteHypothesisSet thresholds_1d(std::span<const double> x) {
    if (x.empty()) throw InputError("thresholds_1d needs at least one point");
    std::vector<double> u(x.begin(), x.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    std::vector<double> cuts;
    cuts.push_back(u.front() - 1.0);
    for (std::size_t k = 0; k + 1 < u.size(); ++k) cuts.push_back(0.5 * (u[k] + u[k + 1]));
    cuts.push_back(u.back() + 1.0);
    std::vector<double> scores;
    scores.reserve(cuts.size() * x.size());
    for (double t : cuts) {
        for (double v : x) scores.push_back(v - t);
    }
    return FiniteHypothesisSet::from_scores(x.size(), std::move(scores));
}

FiniteHypothesisSet all_labelings(std::size_t m) {
    if (m == 0 || m > 16) throw ConfigError("all_labelings needs 1 <= m <= 16");
    const std::size_t n = std::size_t{1} << m;
    std::vector<double> scores(n * m);
    for (std::size_t h = 0; h < n; ++h) {
        for (std::size_t i = 0; i < m; ++i) scores[h * m + i] = ((h >> i) & 1U) ? 1.0 : -1.0;
    }
    return FiniteHypothesisSet::from_scores(m, std::move(scores));
}

std::vector<HalfPlane> linear_grid_2d(std::span<const double> xy, std::size_t angles,
                                      std::size_t offsets) {
    if (xy.empty() || xy.size() % 2 != 0) throw InputError("linear_grid_2d needs 2-D points");
    if (angles == 0 || offsets < 2) throw ConfigError("linear_grid_2d needs angles >= 1, offsets >= 2");
    const std::size_t n = xy.size() / 2;
    std::vector<HalfPlane> planes;
    planes.reserve(angles * offsets);
    for (std::size_t a = 0; a < angles; ++a) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(angles);
        const double c = std::cos(th), s = std::sin(th);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < n; ++i) {
            const double p = c * xy[2 * i] + s * xy[2 * i + 1];
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        for (std::size_t k = 0; k < offsets; ++k) {
            const double t = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(offsets - 1);
            planes.push_back({c, s, t});
        }
    }
    return planes;
}

FiniteHypothesisSet halfplane_set(std::span<const double> xy, std::span<const HalfPlane> planes) {
    const std::size_t n = xy.size() / 2;
    std::vector<double> scores(planes.size() * n);
    for (std::size_t k = 0; k < planes.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            scores[k * n + i] = planes[k].w1 * xy[2 * i] + planes[k].w2 * xy[2 * i + 1] - planes[k].offset;
        }
    }
    return FiniteHypothesisSet::from_scores(n, std::move(scores));
}

FiniteHypothesisSet score_grid_set(std::size_t points, std::span<const double> grid,
                                   std::size_t extra, std::uint64_t seed) {
    if (points == 0 || grid.empty()) throw ConfigError("score_grid_set needs points and a grid");
    const std::size_t g = grid.size();
    std::vector<double> scores;
    scores.reserve((g + extra) * points);
    for (std::size_t k = 0; k < g; ++k) {
        for (std::size_t i = 0; i < points; ++i) scores.push_back(grid[(i + k) % g]);
    }
    Rng rng(seed);
    for (std::size_t k = 0; k < extra; ++k) {
        for (std::size_t i = 0; i < points; ++i) scores.push_back(grid[rng.below(g)]);
    }
    return FiniteHypothesisSet::from_scores(points, std::move(scores));
}

// ---------------------------------------------------------------------------
// Best-in-class
// ---------------------------------------------------------------------------

std::vector<Moments> set_moments(const FiniteHypothesisSet& hs, const FiniteDistribution& dist,
                                 Exec exec) {
    if (hs.points != dist.size()) {
        throw InputError("hypothesis set and distribution have different point counts");
    }
    if (hs.size() == 0) throw InputError("empty hypothesis set");
    const auto mu = dist.mean_labels();
    return hypothesis_moments(hs.signs, hs.points, dist.weight, mu, exec);
}

std::vector<double> metric_values(const MetricSpec& spec, std::span<const Moments> moments) {
    std::vector<double> out(moments.size());
    for (std::size_t h = 0; h < moments.size(); ++h) {
        const auto parts = ratio_parts(spec, moments[h]);
        if (!(parts.denominator > 0.0)) {
            throw PreconditionError("hypothesis " + std::to_string(h) +
                                    " has a nonpositive metric denominator");
        }
        out[h] = parts.numerator / parts.denominator;
    }
    return out;
}

namespace {

ArgBest arg_min(std::span<const double> v) {
    if (v.empty()) throw InputError("empty hypothesis set");
    ArgBest best{v[0], 0};
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] < best.value) best = {v[k], k};
    }
    return best;
}

double ell_at(const MetricSpec& spec, double lambda, const Moments& m) {
    const auto p = ratio_parts(spec, m);
    return p.numerator - lambda * p.denominator;
}

}  // namespace

ArgBest best_in_class_metric(const MetricSpec& spec, const FiniteHypothesisSet& hs,
                             const FiniteDistribution& dist) {
    const auto mo = set_moments(hs, dist);
    return arg_min(metric_values(spec, mo));
}

ArgBest best_in_class_ell_lambda(const MetricSpec& spec, double lambda,
                                 std::span<const Moments> moments) {
    std::vector<double> v(moments.size());
    for (std::size_t h = 0; h < moments.size(); ++h) v[h] = ell_at(spec, lambda, moments[h]);
    return arg_min(v);
}

ArgBest best_in_class_ell_lambda(const MetricSpec& spec, double lambda,
                                 const FiniteHypothesisSet& hs, const FiniteDistribution& dist) {
    const auto mo = set_moments(hs, dist);
    return best_in_class_ell_lambda(spec, lambda, mo);
}

LambdaRange beta_range(const MetricSpec& spec, std::span<const Moments> moments) {
    if (moments.empty()) throw InputError("empty hypothesis set");
    LambdaRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& m : moments) {
        const double b = ratio_parts(spec, m).denominator;
        r.lo = std::min(r.lo, b);
        r.hi = std::max(r.hi, b);
    }
    return r;
}

HalfPlaneBest best_halfplane(std::span<const double> xy, std::span<const int> labels,
                             std::span<const HalfPlane> planes, const MetricSpec& spec) {
    const auto counts = halfplane_confusion(xy, labels, planes);
    HalfPlaneBest best;
    bool found = false;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const auto parts = ratio_parts(spec, moments_from_counts(counts[k]));
        if (parts.denominator == 0.0) continue;
        const double v = parts.numerator / parts.denominator;
        if (!found || v < best.value) {
            best = {planes[k], k, v, counts[k]};
            found = true;
        }
    }
    if (!found) throw PreconditionError("every half-plane has a zero metric denominator");
    return best;
}

double angle_between_deg(const HalfPlane& a, const HalfPlane& b) {
    const double na = std::hypot(a.w1, a.w2);
    const double nb = std::hypot(b.w1, b.w2);
    if (na == 0.0 || nb == 0.0) throw InputError("half-plane with a zero normal");
    const double c = std::clamp((a.w1 * b.w1 + a.w2 * b.w2) / (na * nb), -1.0, 1.0);
    return std::acos(c) * 180.0 / std::numbers::pi;
}

// ---------------------------------------------------------------------------
// Surrogate side
// ---------------------------------------------------------------------------

LossProfile target_profile(const CostMatrix& costs, const FiniteHypothesisSet& hs,
                           const FiniteDistribution& dist) {
    if (hs.points != dist.size()) throw InputError("set and distribution sizes differ");
    const std::size_t n = hs.size();
    const std::size_t p = hs.points;
    LossProfile out;
    out.expected.assign(n, 0.0);
    std::vector<double> inf(p, std::numeric_limits<double>::infinity());
    for (std::size_t h = 0; h < n; ++h) {
        double e = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            const int s = hs.signs[h * p + i];
            const double c = dist.eta[i] * costs.at(s, 1) + (1.0 - dist.eta[i]) * costs.at(s, -1);
            e += dist.weight[i] * c;
            inf[i] = std::min(inf[i], c);
        }
        out.expected[h] = e;
    }
    out.best = *std::min_element(out.expected.begin(), out.expected.end());
    for (std::size_t i = 0; i < p; ++i) out.pointwise += dist.weight[i] * inf[i];
    return out;
}

LossProfile surrogate_profile(const CostMatrix& costs, const PhiKind& kind,
                              const FiniteHypothesisSet& hs, const FiniteDistribution& dist,
                              Exec exec) {
    if (!hs.has_scores()) throw PreconditionError("surrogate quantities need hypothesis scores");
    if (hs.points != dist.size()) throw InputError("set and distribution sizes differ");
    const std::size_t n = hs.size();
    const std::size_t p = hs.points;
    const auto risks = conditional_surrogate_risks(hs.scores, p, dist.eta, costs, kind, exec);
    const auto inf = column_minima(risks, p, exec);
    LossProfile out;
    out.expected.assign(n, 0.0);
    for (std::size_t h = 0; h < n; ++h) {
        double e = 0.0;
        for (std::size_t i = 0; i < p; ++i) e += dist.weight[i] * risks[h * p + i];
        out.expected[h] = e;
    }
    out.best = *std::min_element(out.expected.begin(), out.expected.end());
    for (std::size_t i = 0; i < p; ++i) out.pointwise += dist.weight[i] * inf[i];
    return out;
}

double minimizability_gap(const CostMatrix& costs, LossSide side, const PhiKind& kind,
                          const FiniteHypothesisSet& hs, const FiniteDistribution& dist) {
    const auto prof = side == LossSide::target ? target_profile(costs, hs, dist)
                                               : surrogate_profile(costs, kind, hs, dist);
    return prof.gap();
}

double consistency_gamma(const PhiKind& kind, double l_max, double t) {
    const auto [a, b] = consistency_exponents(kind);
    if (t <= 0.0) return 0.0;
    return b * std::pow(2.0 * l_max, 1.0 - a) * std::pow(t, a);
}

SlackReport verify_consistency_bound(const FiniteHypothesisSet& hs,
                                     const FiniteDistribution& dist, const MetricSpec& spec,
                                     double lambda, const PhiKind& kind) {
    dist.validate();
    if (!hs.has_scores()) throw PreconditionError("consistency bound needs hypothesis scores");
    if (!hs.regular()) throw PreconditionError("consistency bound needs a regular hypothesis set");
    const CostMatrix costs = training_costs(spec, lambda);
    const double l_max = costs.max_entry();
    const auto target = target_profile(costs, hs, dist);
    const auto sur = surrogate_profile(costs, kind, hs, dist);
    SlackReport rep;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < hs.size(); ++h) {
        // E(h) - E* + M = E(h) - E_x[inf_h C(h, x)]
        const double left = target.expected[h] - target.pointwise;
        const double right = consistency_gamma(kind, l_max, sur.expected[h] - sur.pointwise);
        const double slack = right - left;
        if (slack < rep.worst_slack) {
            rep.worst_slack = slack;
            rep.worst_index = h;
        }
    }
    rep.pass = rep.worst_slack >= -kZeroTol;
    return rep;
}

bool verify_lambda_perturbation(const FiniteHypothesisSet& hs, const FiniteDistribution& dist,
                                const MetricSpec& spec, double lambda1, double lambda2,
                                double* slack) {
    const auto mo = set_moments(hs, dist);
    const double upper_beta = beta_range(spec, mo).hi;
    const double e1 = best_in_class_ell_lambda(spec, lambda1, mo).value;
    const double e2 = best_in_class_ell_lambda(spec, lambda2, mo).value;
    const double s = e2 + std::abs(lambda1 - lambda2) * upper_beta - e1;
    if (slack) *slack = s;
    return s >= -1e-12;
}

// ---------------------------------------------------------------------------
// Theorem harnesses
// ---------------------------------------------------------------------------

SlackReport check_zero_crossing(const MetricSpec& spec, const FiniteHypothesisSet& hs,
                                const FiniteDistribution& dist) {
    const auto mo = set_moments(hs, dist);
    const auto values = metric_values(spec, mo);
    const auto star = arg_min(values);
    const auto best = best_in_class_ell_lambda(spec, star.value, mo);
    SlackReport rep;
    rep.worst_slack = -std::abs(best.value);
    rep.worst_index = star.index;
    // the metric minimizer itself attains the zero
    const double own = ell_at(spec, star.value, mo[star.index]);
    if (-std::abs(own) < rep.worst_slack) rep.worst_slack = -std::abs(own);
    // every zero of E_{l^lambda*} is a metric minimizer
    for (std::size_t h = 0; h < mo.size(); ++h) {
        if (std::abs(ell_at(spec, star.value, mo[h])) <= kZeroTol) {
            const double gap = std::abs(values[h] - star.value);
            if (-gap < rep.worst_slack) {
                rep.worst_slack = -gap;
                rep.worst_index = h;
            }
        }
    }
    rep.pass = rep.worst_slack >= -kZeroTol;
    return rep;
}

SlackReport check_excess_equivalence(const MetricSpec& spec, const FiniteHypothesisSet& hs,
                                     const FiniteDistribution& dist,
                                     std::span<const double> etas) {
    const auto mo = set_moments(hs, dist);
    const auto values = metric_values(spec, mo);
    const double star = arg_min(values).value;
    SlackReport rep;
    rep.pass = true;
    for (std::size_t h = 0; h < mo.size(); ++h) {
        const double excess = ell_at(spec, star, mo[h]);
        const double den = ratio_parts(spec, mo[h]).denominator;
        for (double eta : etas) {
            if (std::abs(excess - eta) <= 1e-12 ||
                std::abs((values[h] - star) - eta / den) <= 1e-12) {
                continue;
            }
            const bool lhs = excess <= eta;
            const bool rhs = values[h] - star <= eta / den;
            if (lhs != rhs) {
                rep.pass = false;
                rep.worst_slack = -1.0;
                rep.worst_index = h;
            }
        }
    }
    return rep;
}

LambdaRange set_lambda_range(const MetricSpec& spec, const FiniteHypothesisSet& hs,
                             const FiniteDistribution& dist) {
    const auto values = metric_values(spec, set_moments(hs, dist));
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double pad = std::max(0.25 * (*hi - *lo), 0.05);
    return {*lo - pad, *hi + pad};
}

std::vector<SignRow> sign_table(const MetricSpec& spec, const FiniteHypothesisSet& hs,
                                const FiniteDistribution& dist, std::size_t grid_points,
                                double* lambda_star) {
    if (grid_points < 2) throw ConfigError("sign table needs at least two grid points");
    const auto mo = set_moments(hs, dist);
    const double star = arg_min(metric_values(spec, mo)).value;
    if (lambda_star) *lambda_star = star;
    const auto range = set_lambda_range(spec, hs, dist);
    std::vector<SignRow> rows(grid_points);
    for (std::size_t k = 0; k < grid_points; ++k) {
        SignRow& r = rows[k];
        r.lambda = range.lo + (range.hi - range.lo) * static_cast<double>(k) /
                                  static_cast<double>(grid_points - 1);
        r.best_ell = best_in_class_ell_lambda(spec, r.lambda, mo).value;
        r.sign = sign_of(r.best_ell);
        r.expected = sign_of(star - r.lambda);
        r.skipped = std::abs(r.lambda - star) <= kZeroTol;
    }
    return rows;
}

std::function<int(double)> exact_sign_oracle(const MetricSpec& spec,
                                             const FiniteHypothesisSet& hs,
                                             const FiniteDistribution& dist) {
    auto mo = set_moments(hs, dist);
    return [spec, mo = std::move(mo)](double lambda) {
        return sign_of(best_in_class_ell_lambda(spec, lambda, mo).value);
    };
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

namespace {

MetricSpec random_ratio(Rng& rng) {
    ConfusionCoeffs cc;
    for (std::size_t k = 0; k < 4; ++k) {
        cc.num[k] = rng.uniform(-1.0, 1.0);
        cc.den[k] = rng.uniform(0.2, 1.0);
    }
    return alpha_beta_from_confusion_coeffs(cc, "random_ratio");
}

MetricSpec fixture_metric(std::size_t k, Rng& rng, double positive_mass) {
    switch (k % 7) {
        case 0: return f_beta(1.0);
        case 1: return f_beta(0.5);
        case 2: return jaccard();
        case 3: return am_measure(positive_mass);
        case 4: return accuracy();
        case 5:
            return weighted_accuracy({rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0),
                                      rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0)});
        default: return random_ratio(rng);
    }
}

double positive_mass(const FiniteDistribution& d) {
    double p = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) p += d.weight[i] * d.eta[i];
    return p;
}

std::vector<int> random_labels(Rng& rng, std::size_t m) {
    std::vector<int> y(m);
    do {
        for (auto& v : y) v = rng.bernoulli(0.4) ? 1 : -1;
    } while (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), -1) == 0);
    return y;
}

FiniteDistribution random_distribution(Rng& rng, std::size_t n) {
    FiniteDistribution d;
    d.weight.resize(n);
    d.eta.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d.weight[i] = -std::log(1.0 - rng.uniform()) + 1e-3;
        total += d.weight[i];
        d.eta[i] = rng.uniform();
    }
    for (auto& w : d.weight) w /= total;
    // exact unit sum: absorb rounding into the largest weight
    const double s = std::accumulate(d.weight.begin(), d.weight.end(), 0.0);
    *std::max_element(d.weight.begin(), d.weight.end()) += 1.0 - s;
    return d;
}

}  // namespace

std::vector<Fixture> random_sign_fixtures(std::size_t count, std::uint64_t seed) {
    std::vector<Fixture> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Rng rng(Rng::derive(seed, k));
        Fixture f;
        const bool thresholds = k % 2 == 0;
        const std::size_t m = thresholds ? 4 + rng.below(9) : 3 + rng.below(8);
        if (thresholds) {
            std::vector<double> x(m);
            for (auto& v : x) v = rng.normal();
            f.hypotheses = thresholds_1d(x);
            f.name = "thresholds_1d#" + std::to_string(k);
        } else {
            f.hypotheses = all_labelings(m);
            f.name = "all_labelings#" + std::to_string(k);
        }
        if (k % 4 == 3) {
            f.dist = random_distribution(rng, m);
        } else {
            f.dist = FiniteDistribution::from_labels(random_labels(rng, m));
        }
        f.spec = fixture_metric(k / 2, rng, positive_mass(f.dist));
        f.name += ":" + f.spec.name;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Fixture> random_surrogate_fixtures(std::size_t count, std::uint64_t seed,
                                               std::span<const double> grid) {
    std::vector<Fixture> out;
    out.reserve(count);
    const std::size_t cap = 64;
    for (std::size_t k = 0; k < count; ++k) {
        Rng rng(Rng::derive(seed, 1000 + k));
        Fixture f;
        const std::size_t n = 2 + rng.below(5);
        f.dist = random_distribution(rng, n);
        const std::size_t extra = grid.size() < cap ? rng.below(cap - grid.size() + 1) : 0;
        f.hypotheses = score_grid_set(n, grid, extra, rng.next_u64());
        f.spec = fixture_metric(k, rng, std::clamp(positive_mass(f.dist), 0.05, 0.95));
        f.lambda = rng.uniform(-1.2, 0.5);
        f.name = "score_grid#" + std::to_string(k) + ":" + f.spec.name;
        out.push_back(std::move(f));
    }
    return out;
}

Fixture load_fixture(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open fixture " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    try {
        Fixture f;
        f.name = j.value("name", path.stem().string());
        if (j.contains("labels")) {
            f.dist = FiniteDistribution::from_labels(j.at("labels").get<std::vector<int>>());
        } else {
            f.dist.weight = j.at("weights").get<std::vector<double>>();
            f.dist.eta = j.at("eta").get<std::vector<double>>();
        }
        f.dist.validate();
        const std::size_t n = f.dist.size();
        if (j.contains("hypotheses")) {
            std::vector<std::int8_t> signs;
            for (const auto& row : j.at("hypotheses")) {
                const auto r = row.get<std::vector<int>>();
                if (r.size() != n) throw ValidationError("hypothesis length differs from point count");
                for (int v : r) signs.push_back(static_cast<std::int8_t>(v));
            }
            f.hypotheses = FiniteHypothesisSet::from_signs(n, std::move(signs));
        } else if (j.contains("scores")) {
            std::vector<double> scores;
            for (const auto& row : j.at("scores")) {
                const auto r = row.get<std::vector<double>>();
                if (r.size() != n) throw ValidationError("score row length differs from point count");
                scores.insert(scores.end(), r.begin(), r.end());
            }
            f.hypotheses = FiniteHypothesisSet::from_scores(n, std::move(scores));
        } else if (j.contains("family")) {
            const auto& fam = j.at("family");
            const std::string kind = fam.at("kind").get<std::string>();
            if (kind == "thresholds_1d") {
                const auto x = j.at("points").get<std::vector<double>>();
                if (x.size() != n) throw ValidationError("points length differs from weights");
                f.hypotheses = thresholds_1d(x);
            } else if (kind == "all_labelings") {
                f.hypotheses = all_labelings(n);
            } else if (kind == "score_grid") {
                std::vector<double> grid(std::begin(kDefaultScoreGrid), std::end(kDefaultScoreGrid));
                if (fam.contains("grid")) grid = fam.at("grid").get<std::vector<double>>();
                f.hypotheses = score_grid_set(n, grid, fam.value("extra", std::size_t{0}),
                                              fam.value("seed", std::uint64_t{0}));
            } else {
                throw ValidationError("unknown hypothesis family '" + kind + "'");
            }
        } else {
            throw ValidationError("fixture needs hypotheses, scores or family");
        }
        double pos = 0.0;
        for (std::size_t i = 0; i < n; ++i) pos += f.dist.weight[i] * f.dist.eta[i];
        f.spec = metric_from_json(j.at("metric"), pos);
        if (j.contains("lambda")) f.lambda = j.at("lambda").get<double>();
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

VerificationReport verify_theorem(const std::string& theorem, std::span<const Fixture> fixtures,
                                  std::uint64_t seed) {
    VerificationReport rep;
    rep.theorem = theorem;
    rep.fixtures = fixtures.size();
    rep.worst_slack = std::numeric_limits<double>::infinity();
    auto record = [&](const Fixture& f, double slack, bool ok, const std::string& what) {
        rep.worst_slack = std::min(rep.worst_slack, slack);
        if (!ok) {
            rep.pass = false;
            std::ostringstream os;
            os.precision(6);
            os << f.name << ": " << what << " (slack " << slack << ")";
            rep.failures.push_back(os.str());
        }
    };
    static const double etas[] = {0.0, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.5};
    for (std::size_t fi = 0; fi < fixtures.size(); ++fi) {
        const Fixture& f = fixtures[fi];
        try {
            if (theorem == "zero_crossing") {
                const auto r = check_zero_crossing(f.spec, f.hypotheses, f.dist);
                record(f, r.worst_slack, r.pass, "E* at lambda* is not zero");
            } else if (theorem == "excess_equivalence") {
                const auto r = check_excess_equivalence(f.spec, f.hypotheses, f.dist, etas);
                record(f, r.worst_slack, r.pass, "excess equivalence fails");
            } else if (theorem == "sign") {
                double worst = std::numeric_limits<double>::infinity();
                bool ok = true;
                for (const auto& row : sign_table(f.spec, f.hypotheses, f.dist, 101)) {
                    if (row.skipped) continue;
                    worst = std::min(worst, row.expected * row.best_ell);
                    ok = ok && row.sign == row.expected && row.best_ell != 0.0;
                }
                record(f, worst, ok, "sign of E* differs from sign(lambda* - lambda)");
            } else if (theorem == "consistency") {
                const double lambda =
                    f.lambda ? *f.lambda : best_in_class_metric(f.spec, f.hypotheses, f.dist).value;
                for (PhiFamily fam : kAllFamilies) {
                    const PhiKind kind{fam, 1.0};
                    const auto r = verify_consistency_bound(f.hypotheses, f.dist, f.spec, lambda, kind);
                    record(f, r.worst_slack, r.pass, "bound fails for " + kind.to_string());
                }
            } else if (theorem == "perturbation") {
                const auto range = set_lambda_range(f.spec, f.hypotheses, f.dist);
                Rng rng(Rng::derive(seed, fi));
                for (int k = 0; k < 100; ++k) {
                    const double l1 = rng.uniform(range.lo, range.hi);
                    const double l2 = rng.uniform(range.lo, range.hi);
                    double slack = 0.0;
                    const bool ok = verify_lambda_perturbation(f.hypotheses, f.dist, f.spec, l1, l2, &slack);
                    record(f, slack, ok, "perturbation bound fails");
                }
            } else {
                throw ConfigError("unknown theorem '" + theorem + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            rep.pass = false;
            rep.failures.push_back(f.name + ": " + e.what());
        }
    }
    if (fixtures.empty()) rep.worst_slack = 0.0;
    return rep;
}

}  // namespace metro
