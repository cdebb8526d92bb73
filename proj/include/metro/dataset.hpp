#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace metro {

/// Labeled sample with row-major features and labels in {+1, -1}.
struct Dataset {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> features;
    std::vector<int> labels;
    std::string name = "data";
    std::uint64_t seed = 0;
    /// Generator parameters, recorded in the metadata sidecar.
    std::vector<std::pair<std::string, double>> params;

    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * cols, cols};
    }

    std::size_t positives() const noexcept;
    double positive_rate() const noexcept;

    /// Rows in the given order; name, seed and params are carried over.
    Dataset subset(std::span<const std::size_t> indices) const;

    /// Throws InputError unless shapes agree, labels are +-1 and features finite.
    void validate() const;
};

/// Labels ~ Bernoulli(positive_rate); class means at +-separation/2 along
/// (1, ..., 1)/sqrt(d); isotropic noise with standard deviation scale.
Dataset gen_two_gaussians(std::size_t m, std::size_t d, double positive_rate, double separation,
                          double scale, std::uint64_t seed);

/// Mixture behind the figure1 generator: a wide negative cluster at the
/// origin, a compact pure positive cluster on the x1 axis, and a mixed cluster
/// on the x2 axis where only a fraction of the labels are positive.
struct Figure1Params {
    double negative_weight = 0.56;
    double pure_weight = 0.22;
    double negative_sd = 0.80;
    double pure_x = 3.30;
    double pure_sd = 0.54;
    double mixed_y = 2.66;
    double mixed_sd = 0.53;
    double mixed_positive = 0.55;
    /// Minimum angle between the F_0.5-optimal and accuracy-optimal half-planes.
    double min_angle_deg = 15.0;
    int max_retries = 20;
};

/// Draws with seed, seed + 1, ... until the grid-optimal F_0.5 and accuracy
/// half-planes differ in angle by at least min_angle_deg. Throws
/// GenerationError once the retry budget is spent.
Dataset gen_figure1_like(std::size_t m, std::uint64_t seed, const Figure1Params& params = {});

/// Angle in degrees between the F_0.5-optimal and accuracy-optimal half-planes
/// of the 360 x 50 linear grid on a 2-D dataset.
double figure1_angle_gap(const Dataset& data);

/// Header "f1,...,fd,label"; labels +1/-1, or 1/0 with 0 read as -1.
Dataset read_csv(const std::filesystem::path& path);
void write_csv(const Dataset& data, const std::filesystem::path& path);

/// Sidecar {name, seed, params, m, d} next to a CSV file.
void write_metadata(const Dataset& data, const std::filesystem::path& path);
std::filesystem::path metadata_path(const std::filesystem::path& csv_path);

/// Splits indices into (first, second) with round(fraction * m) rows in the
/// first part, allocated across labels by largest remainder. Indices within a
/// part are ascending. Throws InputError when a part would miss a label.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const int> labels, double fraction, std::uint64_t seed);

}  // namespace metro
