#pragma once

// Data-parallel inner loops of the oracle. Each kernel has a serial reference
// and an OpenMP version; both produce bit-identical results because every
// output element is reduced by a single thread in a fixed order.

#include "metro/cost.hpp"
#include "metro/metric.hpp"
#include "metro/surrogate.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace metro {

enum class Exec { serial, parallel };

/// Weighted moments of each hypothesis row of a sign matrix.
///
/// signs is row-major (hypotheses x points) with entries in {+1, -1}.
/// mean_label[i] = E[y | x_i] = 2 * eta_i - 1 and weight sums to one, so the
/// result holds E[s*y], E[y], E[s] for every hypothesis.
std::vector<Moments> hypothesis_moments(std::span<const std::int8_t> signs, std::size_t points,
                                        std::span<const double> weight,
                                        std::span<const double> mean_label,
                                        Exec exec = Exec::parallel);

/// h(x) = w1 * x1 + w2 * x2 - offset.
struct HalfPlane {
    double w1 = 1.0;
    double w2 = 0.0;
    double offset = 0.0;
};

/// Confusion counts of each half-plane classifier on 2-D points
/// (xy row-major, two columns).
std::vector<ConfusionCounts> halfplane_confusion(std::span<const double> xy,
                                                 std::span<const int> labels,
                                                 std::span<const HalfPlane> planes,
                                                 Exec exec = Exec::parallel);

/// Conditional surrogate risk eta * L_Phi(s, +1) + (1 - eta) * L_Phi(s, -1)
/// for every entry of a row-major (hypotheses x points) score matrix.
std::vector<double> conditional_surrogate_risks(std::span<const double> scores,
                                                std::size_t points, std::span<const double> eta,
                                                const CostMatrix& costs, const PhiKind& kind,
                                                Exec exec = Exec::parallel);

/// Column-wise minimum of a row-major (rows x points) matrix.
std::vector<double> column_minima(std::span<const double> values, std::size_t points,
                                  Exec exec = Exec::parallel);

}  // namespace metro
