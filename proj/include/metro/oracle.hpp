#pragma once

// Exact computations over finite hypothesis sets and finite-support
// distributions, and the verification harnesses built on them.

#include "metro/cost.hpp"
#include "metro/kernels.hpp"
#include "metro/metric.hpp"
#include "metro/surrogate.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace metro {

/// Support points x_1..x_n with probabilities and eta(x) = P(y = +1 | x).
struct FiniteDistribution {
    std::vector<double> weight;
    std::vector<double> eta;

    std::size_t size() const noexcept { return weight.size(); }

    /// Empirical distribution of a labeled sample: weight 1/m, eta in {0, 1}.
    static FiniteDistribution from_labels(std::span<const int> labels);

    /// E[y | x_i] = 2 eta_i - 1.
    std::vector<double> mean_labels() const;

    /// Throws ValidationError unless weights are nonnegative and sum to one
    /// within 1e-12 and every eta lies in [0, 1].
    void validate() const;
};

/// Explicit list of hypotheses over a fixed set of points, stored row-major.
struct FiniteHypothesisSet {
    std::size_t points = 0;
    /// size() x points predictions in {+1, -1}.
    std::vector<std::int8_t> signs;
    /// Optional size() x points real scores (surrogate-side computations).
    std::vector<double> scores;

    std::size_t size() const noexcept { return points == 0 ? 0 : signs.size() / points; }
    bool has_scores() const noexcept { return !scores.empty(); }
    std::span<const std::int8_t> row(std::size_t h) const {
        return {signs.data() + h * points, points};
    }

    /// Both predictions occur at every point.
    bool regular() const;

    /// Rows of real scores; signs follow sign_of.
    static FiniteHypothesisSet from_scores(std::size_t points, std::vector<double> scores);
    static FiniteHypothesisSet from_signs(std::size_t points, std::vector<std::int8_t> signs);

    void validate() const;
};

// ---------------------------------------------------------------------------
// Hypothesis families
// ---------------------------------------------------------------------------

/// h_t(x) = x - t at the midpoints of consecutive sorted unique values, plus
/// the sentinels min - 1 (all +1) and max + 1 (all -1). Scores are x - t.
FiniteHypothesisSet thresholds_1d(std::span<const double> x);

/// Every labeling of m <= 16 points; scores are the labels themselves.
FiniteHypothesisSet all_labelings(std::size_t m);

/// Half-planes (cos a, sin a) . x - t over `angles` equally spaced directions
/// and `offsets` thresholds spanning [min, max] of the projection; the first
/// offset of every angle predicts +1 everywhere.
std::vector<HalfPlane> linear_grid_2d(std::span<const double> xy, std::size_t angles,
                                      std::size_t offsets);

/// Sign matrix of a list of half-planes.
FiniteHypothesisSet halfplane_set(std::span<const double> xy, std::span<const HalfPlane> planes);

/// The first `cycle` hypotheses give point i the score grid[(i + k) % |grid|],
/// so every point sees the whole grid; `extra` more rows draw scores uniformly
/// from the grid.
FiniteHypothesisSet score_grid_set(std::size_t points, std::span<const double> grid,
                                   std::size_t extra, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Best-in-class quantities
// ---------------------------------------------------------------------------

struct ArgBest {
    double value = 0.0;
    std::size_t index = 0;
};

std::vector<Moments> set_moments(const FiniteHypothesisSet& hs, const FiniteDistribution& dist,
                                 Exec exec = Exec::parallel);

/// Metric value of every hypothesis; PreconditionError when any denominator
/// is not positive.
std::vector<double> metric_values(const MetricSpec& spec, std::span<const Moments> moments);

/// Minimum metric over the set; ties go to the smallest index.
ArgBest best_in_class_metric(const MetricSpec& spec, const FiniteHypothesisSet& hs,
                             const FiniteDistribution& dist);

/// Minimum over the set of E[l_alpha] - lambda E[l_beta].
ArgBest best_in_class_ell_lambda(const MetricSpec& spec, double lambda,
                                 const FiniteHypothesisSet& hs, const FiniteDistribution& dist);
ArgBest best_in_class_ell_lambda(const MetricSpec& spec, double lambda,
                                 std::span<const Moments> moments);

/// Smallest and largest mean l_beta over the set.
LambdaRange beta_range(const MetricSpec& spec, std::span<const Moments> moments);

/// Metric-optimal member of a half-plane list on 2-D points. Members with a
/// zero denominator are skipped.
struct HalfPlaneBest {
    HalfPlane plane;
    std::size_t index = 0;
    double value = 0.0;
    ConfusionCounts counts;
};
HalfPlaneBest best_halfplane(std::span<const double> xy, std::span<const int> labels,
                             std::span<const HalfPlane> planes, const MetricSpec& spec);

/// Angle in degrees in [0, 180] between the normals of two half-planes.
double angle_between_deg(const HalfPlane& a, const HalfPlane& b);

// ---------------------------------------------------------------------------
// Surrogate-side quantities
// ---------------------------------------------------------------------------

/// Expected loss, best-in-class expected loss and the pointwise-infimum
/// expectation of a cost-sensitive loss over a scored finite set.
struct LossProfile {
    std::vector<double> expected;  ///< per hypothesis
    double best = 0.0;             ///< min over hypotheses
    double pointwise = 0.0;        ///< E_x[inf_h C(h, x)]
    double gap() const noexcept { return best - pointwise; }
};

/// Target loss L(sign h(x), y) under the cost matrix.
LossProfile target_profile(const CostMatrix& costs, const FiniteHypothesisSet& hs,
                           const FiniteDistribution& dist);

/// Surrogate loss L_Phi(h(x), y); requires scores.
LossProfile surrogate_profile(const CostMatrix& costs, const PhiKind& kind,
                              const FiniteHypothesisSet& hs, const FiniteDistribution& dist,
                              Exec exec = Exec::parallel);

enum class LossSide { target, surrogate };

/// M(H) = E*(H) - E_x[inf_h C(h, x)]; never negative up to rounding.
double minimizability_gap(const CostMatrix& costs, LossSide side, const PhiKind& kind,
                          const FiniteHypothesisSet& hs, const FiniteDistribution& dist);

/// Gamma(t) = b (2 L_max)^(1 - a) t^a with the kind's exponents.
double consistency_gamma(const PhiKind& kind, double l_max, double t);

struct SlackReport {
    double worst_slack = 0.0;
    std::size_t worst_index = 0;
    bool pass = false;
};

/// For every h: E_L(h) - E*_L + M_L <= Gamma(E_Phi(h) - E*_Phi + M_Phi), on the
/// tau-shifted costs of gamma(spec, lambda). Slack is right minus left; PASS
/// iff the worst slack is >= -1e-9. Throws PreconditionError when the set is
/// not regular or has no scores.
SlackReport verify_consistency_bound(const FiniteHypothesisSet& hs,
                                     const FiniteDistribution& dist, const MetricSpec& spec,
                                     double lambda, const PhiKind& kind);

/// E*_{l^lambda1} <= E*_{l^lambda2} + |lambda1 - lambda2| * max_h E[l_beta].
bool verify_lambda_perturbation(const FiniteHypothesisSet& hs, const FiniteDistribution& dist,
                                const MetricSpec& spec, double lambda1, double lambda2,
                                double* slack = nullptr);

// ---------------------------------------------------------------------------
// Theorem harnesses
// ---------------------------------------------------------------------------

inline constexpr double kZeroTol = 1e-9;

/// The metric minimizer attains E*_{l^lambda*} = 0 and every hypothesis with
/// E_{l^lambda*}(h) = 0 attains the metric minimum. Slack is minus the largest
/// violation.
SlackReport check_zero_crossing(const MetricSpec& spec, const FiniteHypothesisSet& hs,
                                const FiniteDistribution& dist);

/// E_{l^lambda*}(h) <= eta  iff  L(h) - lambda* <= eta / E[l_beta](h), over all
/// hypotheses and the given eta grid. Pairs within 1e-12 of the boundary are
/// skipped.
SlackReport check_excess_equivalence(const MetricSpec& spec, const FiniteHypothesisSet& hs,
                                     const FiniteDistribution& dist,
                                     std::span<const double> etas);

struct SignRow {
    double lambda = 0.0;
    double best_ell = 0.0;
    int sign = 0;      ///< sign_of(best_ell)
    int expected = 0;  ///< sign_of(lambda* - lambda)
    bool skipped = false;
};

/// Metric range over the set widened by a quarter of its span (at least 0.05
/// on each side); the domain of the sign and perturbation checks.
LambdaRange set_lambda_range(const MetricSpec& spec, const FiniteHypothesisSet& hs,
                             const FiniteDistribution& dist);

/// sign(E*_{l^lambda}) = sign(lambda* - lambda) on an evenly spaced grid over
/// set_lambda_range; grid points within kZeroTol of lambda* are skipped.
std::vector<SignRow> sign_table(const MetricSpec& spec, const FiniteHypothesisSet& hs,
                                const FiniteDistribution& dist, std::size_t grid_points,
                                double* lambda_star = nullptr);

/// lambda -> sign_of(E*_{l^lambda}(H)).
std::function<int(double)> exact_sign_oracle(const MetricSpec& spec,
                                             const FiniteHypothesisSet& hs,
                                             const FiniteDistribution& dist);

// ---------------------------------------------------------------------------
// Fixtures and reports
// ---------------------------------------------------------------------------

struct Fixture {
    std::string name;
    FiniteDistribution dist;
    FiniteHypothesisSet hypotheses;
    MetricSpec spec;
    std::optional<double> lambda;
};

/// Randomized fixtures with m <= 12 points, alternating thresholds_1d and
/// all_labelings families and cycling through the metric presets.
std::vector<Fixture> random_sign_fixtures(std::size_t count, std::uint64_t seed);

/// Randomized finite-support fixtures for the consistency bound: at most six
/// points, a cyclic score-grid set with random extra rows (at most 64 total).
std::vector<Fixture> random_surrogate_fixtures(std::size_t count, std::uint64_t seed,
                                               std::span<const double> grid);

/// Score grid used by the shipped consistency fixtures.
inline constexpr double kDefaultScoreGrid[] = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};

/// JSON: {name?, points?, weights, eta, metric, lambda?, hypotheses | scores | family}.
/// family is {"kind": "thresholds_1d" | "all_labelings" | "score_grid", ...}.
Fixture load_fixture(const std::filesystem::path& path);

struct VerificationReport {
    std::string theorem;
    std::size_t fixtures = 0;
    double worst_slack = 0.0;
    bool pass = true;
    std::vector<std::string> failures;
};

/// Runs one theorem check over fixtures: "zero_crossing", "excess_equivalence",
/// "sign", "consistency", "perturbation".
VerificationReport verify_theorem(const std::string& theorem, std::span<const Fixture> fixtures,
                                  std::uint64_t seed = 0);

}  // namespace metro
