#include "metro/dataset.hpp"

#include "metro/errors.hpp"
#include "metro/metric.hpp"
#include "metro/oracle.hpp"
#include "metro/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace metro {

std::size_t Dataset::positives() const noexcept {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

double Dataset::positive_rate() const noexcept {
    return rows == 0 ? 0.0 : static_cast<double>(positives()) / static_cast<double>(rows);
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.rows = indices.size();
    out.cols = cols;
    out.name = name;
    out.seed = seed;
    out.params = params;
    out.features.reserve(indices.size() * cols);
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= rows) {
            throw InputError("subset index " + std::to_string(i) + " out of range");
        }
        auto r = row(i);
        out.features.insert(out.features.end(), r.begin(), r.end());
        out.labels.push_back(labels[i]);
    }
    return out;
}

void Dataset::validate() const {
    if (rows == 0 || cols == 0) {
        throw InputError("dataset is empty");
    }
    if (features.size() != rows * cols || labels.size() != rows) {
        throw InputError("dataset shape mismatch");
    }
    check_labels(labels);
    for (double v : features) {
        if (!std::isfinite(v)) {
            throw InputError("dataset contains a non-finite feature");
        }
    }
}

Dataset gen_two_gaussians(std::size_t m, std::size_t d, double positive_rate, double separation,
                          double scale, std::uint64_t seed) {
    if (m < 4) throw ConfigError("two-gaussians needs m >= 4");
    if (d < 1) throw ConfigError("two-gaussians needs d >= 1");
    if (!(positive_rate > 0.0 && positive_rate < 1.0)) {
        throw ConfigError("positive rate must lie in (0, 1)");
    }
    if (!std::isfinite(separation) || separation < 0.0) {
        throw ConfigError("separation must be finite and nonnegative");
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ConfigError("scale must be positive");
    }
    Dataset data;
    data.rows = m;
    data.cols = d;
    data.name = "two_gaussians";
    data.seed = seed;
    data.params = {{"m", static_cast<double>(m)},
                   {"d", static_cast<double>(d)},
                   {"positive_rate", positive_rate},
                   {"separation", separation},
                   {"scale", scale}};
    data.features.resize(m * d);
    data.labels.resize(m);
    const double shift = 0.5 * separation / std::sqrt(static_cast<double>(d));
    Rng rng(seed);
    for (std::size_t i = 0; i < m; ++i) {
        const int y = rng.bernoulli(positive_rate) ? 1 : -1;
        data.labels[i] = y;
        for (std::size_t j = 0; j < d; ++j) {
            data.features[i * d + j] = y * shift + scale * rng.normal();
        }
    }
    return data;
}

namespace {

Dataset draw_figure1(std::size_t m, std::uint64_t seed, const Figure1Params& p) {
    Dataset data;
    data.rows = m;
    data.cols = 2;
    data.name = "figure1";
    data.seed = seed;
    data.features.resize(2 * m);
    data.labels.resize(m);
    Rng rng(seed);
    for (std::size_t i = 0; i < m; ++i) {
        const double u = rng.uniform();
        double cx = 0.0, cy = 0.0, sd = p.negative_sd;
        int y = -1;
        if (u < p.negative_weight) {
            // negative cluster at the origin
        } else if (u < p.negative_weight + p.pure_weight) {
            cx = p.pure_x;
            sd = p.pure_sd;
            y = 1;
        } else {
            cy = p.mixed_y;
            sd = p.mixed_sd;
            y = rng.bernoulli(p.mixed_positive) ? 1 : -1;
        }
        data.features[2 * i] = cx + sd * rng.normal();
        data.features[2 * i + 1] = cy + sd * rng.normal();
        data.labels[i] = y;
    }
    return data;
}

}  // namespace

double figure1_angle_gap(const Dataset& data) {
    if (data.cols != 2) {
        throw InputError("figure1_angle_gap needs 2-D data");
    }
    const auto planes = linear_grid_2d(data.features, 360, 50);
    const auto f = best_halfplane(data.features, data.labels, planes, f_beta(0.5));
    const auto a = best_halfplane(data.features, data.labels, planes, accuracy());
    return angle_between_deg(f.plane, a.plane);
}

Dataset gen_figure1_like(std::size_t m, std::uint64_t seed, const Figure1Params& p) {
    if (m < 4) throw ConfigError("figure1 needs m >= 4");
    const double mixed = 1.0 - p.negative_weight - p.pure_weight;
    if (!(p.negative_weight > 0.0) || !(p.pure_weight > 0.0) || mixed < 0.0) {
        throw ConfigError("figure1 mixture weights must be positive and sum to at most one");
    }
    if (!(p.negative_sd > 0.0) || !(p.pure_sd > 0.0) || !(p.mixed_sd > 0.0)) {
        throw ConfigError("figure1 cluster widths must be positive");
    }
    if (!(p.mixed_positive >= 0.0 && p.mixed_positive <= 1.0)) {
        throw ConfigError("figure1 mixed positive fraction must lie in [0, 1]");
    }
    if (p.max_retries < 1) throw ConfigError("figure1 needs at least one attempt");

    for (int attempt = 0; attempt < p.max_retries; ++attempt) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
        Dataset data = draw_figure1(m, s, p);
        if (data.positives() == 0 || data.positives() == m) {
            continue;
        }
        const double gap = figure1_angle_gap(data);
        if (gap >= p.min_angle_deg) {
            data.params = {{"m", static_cast<double>(m)},
                           {"requested_seed", static_cast<double>(seed)},
                           {"attempts", static_cast<double>(attempt + 1)},
                           {"angle_gap_deg", gap},
                           {"negative_weight", p.negative_weight},
                           {"pure_weight", p.pure_weight},
                           {"negative_sd", p.negative_sd},
                           {"pure_x", p.pure_x},
                           {"pure_sd", p.pure_sd},
                           {"mixed_y", p.mixed_y},
                           {"mixed_sd", p.mixed_sd},
                           {"mixed_positive", p.mixed_positive}};
            return data;
        }
    }
    throw GenerationError("figure1: no seed in [" + std::to_string(seed) + ", " +
                          std::to_string(seed + static_cast<std::uint64_t>(p.max_retries) - 1) +
                          "] gives an angle gap of " + std::to_string(p.min_angle_deg) +
                          " degrees");
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void bad_line(const std::filesystem::path& path, std::size_t line, const std::string& why) {
    throw InputError(path.string() + ":" + std::to_string(line) + ": " + why);
}

}  // namespace

Dataset read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) {
        throw InputError(path.string() + ": empty file");
    }
    ++lineno;
    const auto header = split_commas(trim(line));
    if (header.size() < 2 || trim(header.back()) != "label") {
        bad_line(path, lineno, "header must be f1,...,fd,label");
    }
    for (std::size_t j = 0; j + 1 < header.size(); ++j) {
        if (trim(header[j]) != "f" + std::to_string(j + 1)) {
            bad_line(path, lineno, "header must be f1,...,fd,label");
        }
    }
    Dataset data;
    data.cols = header.size() - 1;
    data.name = path.stem().string();
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_commas(line);
        if (fields.size() != data.cols + 1) {
            bad_line(path, lineno,
                     "expected " + std::to_string(data.cols + 1) + " fields, got " +
                         std::to_string(fields.size()));
        }
        for (std::size_t j = 0; j < data.cols; ++j) {
            double v = 0.0;
            if (!parse_double(fields[j], v) || !std::isfinite(v)) {
                bad_line(path, lineno, "bad number '" + std::string(trim(fields[j])) + "'");
            }
            data.features.push_back(v);
        }
        double lab = 0.0;
        if (!parse_double(fields.back(), lab) || !(lab == 1.0 || lab == -1.0 || lab == 0.0)) {
            bad_line(path, lineno, "label must be +1, -1, 1 or 0");
        }
        data.labels.push_back(lab == 1.0 ? 1 : -1);
        ++data.rows;
    }
    if (data.rows == 0) {
        throw InputError(path.string() + ": no data rows");
    }
    return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    data.validate();
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    for (std::size_t j = 0; j < data.cols; ++j) {
        out << 'f' << (j + 1) << ',';
    }
    out << "label\n";
    char buf[64];
    for (std::size_t i = 0; i < data.rows; ++i) {
        for (std::size_t j = 0; j < data.cols; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", data.features[i * data.cols + j]);
            out << buf << ',';
        }
        out << data.labels[i] << '\n';
    }
    if (!out) {
        throw InputError("failed writing " + path.string());
    }
}

std::filesystem::path metadata_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".meta.json");
    return p;
}

void write_metadata(const Dataset& data, const std::filesystem::path& path) {
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : data.params) {
        params[k] = v;
    }
    nlohmann::ordered_json j;
    j["name"] = data.name;
    j["seed"] = data.seed;
    j["params"] = params;
    j["m"] = data.rows;
    j["d"] = data.cols;
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Stratified split
// ---------------------------------------------------------------------------

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const int> labels, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw ConfigError("split fraction must lie in (0, 1)");
    }
    if (labels.size() < 2) {
        throw InputError("split needs at least two rows");
    }
    check_labels(labels);
    std::vector<std::size_t> by_class[2];  // [0] positives, [1] negatives
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[labels[i] == 1 ? 0 : 1].push_back(i);
    }
    const double m = static_cast<double>(labels.size());
    const auto total = static_cast<std::size_t>(std::llround(fraction * m));
    std::size_t take[2];
    double rem[2];
    for (int c = 0; c < 2; ++c) {
        const double exact = fraction * static_cast<double>(by_class[c].size());
        take[c] = static_cast<std::size_t>(std::floor(exact));
        rem[c] = exact - std::floor(exact);
    }
    std::size_t left = total - std::min(total, take[0] + take[1]);
    // largest remainder; ties go to the positive class
    const int order[2] = {rem[1] > rem[0] ? 1 : 0, rem[1] > rem[0] ? 0 : 1};
    for (int c : order) {
        if (left > 0 && take[c] < by_class[c].size()) {
            ++take[c];
            --left;
        }
    }
    for (int c = 0; c < 2; ++c) {
        if (take[c] == 0 || take[c] == by_class[c].size()) {
            throw InputError(std::string("stratified split leaves a part without ") +
                             (c == 0 ? "positive" : "negative") + " labels");
        }
    }
    std::vector<std::size_t> first, second;
    for (int c = 0; c < 2; ++c) {
        auto& idx = by_class[c];
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(c)));
        rng.shuffle(std::span<std::size_t>(idx));
        first.insert(first.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take[c]));
        second.insert(second.end(), idx.begin() + static_cast<std::ptrdiff_t>(take[c]), idx.end());
    }
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    return {std::move(first), std::move(second)};
}

}  // namespace metro
