#include "metro/kernels.hpp"

#include "metro/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>

namespace metro {

namespace {

void check_matrix(std::size_t size, std::size_t points, const char* what) {
    if (points == 0 || size % points != 0) {
        throw InputError(std::string(what) + ": matrix size is not a multiple of the point count");
    }
}

Moments row_moments(const std::int8_t* row, std::size_t points, const double* w,
                    const double* mu) noexcept {
    Moments m;
    for (std::size_t i = 0; i < points; ++i) {
        const double s = row[i];
        m.sy += w[i] * s * mu[i];
        m.y += w[i] * mu[i];
        m.s += w[i] * s;
    }
    return m;
}

ConfusionCounts plane_counts(const HalfPlane& p, const double* xy, const int* labels,
                             std::size_t n) noexcept {
    ConfusionCounts c;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = p.w1 * xy[2 * i] + p.w2 * xy[2 * i + 1] - p.offset;
        const bool pos = sign_of(h) == 1;
        if (labels[i] == 1) {
            pos ? ++c.tp : ++c.fn;
        } else {
            pos ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

}  // namespace

std::vector<Moments> hypothesis_moments(std::span<const std::int8_t> signs, std::size_t points,
                                        std::span<const double> weight,
                                        std::span<const double> mean_label, Exec exec) {
    check_matrix(signs.size(), points, "hypothesis_moments");
    if (weight.size() != points || mean_label.size() != points) {
        throw InputError("hypothesis_moments: weight/mean_label length mismatch");
    }
    const std::size_t rows = signs.size() / points;
    std::vector<Moments> out(rows);
    const std::int8_t* s = signs.data();
    const double* w = weight.data();
    const double* mu = mean_label.data();
    const auto nrows = static_cast<std::ptrdiff_t>(rows);
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t r = 0; r < nrows; ++r) {
            out[r] = row_moments(s + r * points, points, w, mu);
        }
    } else {
        for (std::ptrdiff_t r = 0; r < nrows; ++r) {
            out[r] = row_moments(s + r * points, points, w, mu);
        }
    }
    return out;
}

std::vector<ConfusionCounts> halfplane_confusion(std::span<const double> xy,
                                                 std::span<const int> labels,
                                                 std::span<const HalfPlane> planes, Exec exec) {
    if (xy.size() != 2 * labels.size()) {
        throw InputError("halfplane_confusion: expected two coordinates per label");
    }
    check_labels(labels);
    std::vector<ConfusionCounts> out(planes.size());
    const auto np = static_cast<std::ptrdiff_t>(planes.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < np; ++k) {
            out[k] = plane_counts(planes[k], xy.data(), labels.data(), labels.size());
        }
    } else {
        for (std::ptrdiff_t k = 0; k < np; ++k) {
            out[k] = plane_counts(planes[k], xy.data(), labels.data(), labels.size());
        }
    }
    return out;
}

std::vector<double> conditional_surrogate_risks(std::span<const double> scores,
                                                std::size_t points, std::span<const double> eta,
                                                const CostMatrix& costs, const PhiKind& kind,
                                                Exec exec) {
    check_matrix(scores.size(), points, "conditional_surrogate_risks");
    if (eta.size() != points) {
        throw InputError("conditional_surrogate_risks: eta length mismatch");
    }
    std::vector<double> out(scores.size());
    const auto total = static_cast<std::ptrdiff_t>(scores.size());
    auto cell = [&](std::ptrdiff_t k) {
        const double e = eta[static_cast<std::size_t>(k) % points];
        const double v = scores[k];
        return e * surrogate_loss(costs, v, 1, kind) + (1.0 - e) * surrogate_loss(costs, v, -1, kind);
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < total; ++k) {
            out[k] = cell(k);
        }
    } else {
        for (std::ptrdiff_t k = 0; k < total; ++k) {
            out[k] = cell(k);
        }
    }
    return out;
}

std::vector<double> column_minima(std::span<const double> values, std::size_t points, Exec exec) {
    check_matrix(values.size(), points, "column_minima");
    const std::size_t rows = values.size() / points;
    std::vector<double> out(points, std::numeric_limits<double>::infinity());
    const auto np = static_cast<std::ptrdiff_t>(points);
    auto column = [&](std::ptrdiff_t i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < rows; ++r) {
            best = std::min(best, values[r * points + static_cast<std::size_t>(i)]);
        }
        out[i] = best;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < np; ++i) {
            column(i);
        }
    } else {
        for (std::ptrdiff_t i = 0; i < np; ++i) {
            column(i);
        }
    }
    return out;
}

}  // namespace metro
