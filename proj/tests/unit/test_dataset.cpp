#include "metro/dataset.hpp"
#include "metro/errors.hpp"
#include "metro/metric.hpp"
#include "metro/oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

using namespace metro;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "metro_unit";
    fs::create_directories(dir);
    return dir / name;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

}  // namespace

TEST_SUITE("dataset") {
TEST_CASE("two gaussians are deterministic in the seed") {
    const Dataset a = gen_two_gaussians(500, 3, 0.2, 2.0, 1.0, 9);
    const Dataset b = gen_two_gaussians(500, 3, 0.2, 2.0, 1.0, 9);
    const Dataset c = gen_two_gaussians(500, 3, 0.2, 2.0, 1.0, 10);
    CHECK(a.features == b.features);
    CHECK(a.labels == b.labels);
    CHECK(a.features != c.features);
    CHECK(a.rows == 500);
    CHECK(a.cols == 3);
    a.validate();
}

TEST_CASE("two gaussians: positive count within three standard deviations") {
    const std::size_t m = 4000;
    const double p = 0.1;
    const Dataset d = gen_two_gaussians(m, 2, p, 2.0, 1.0, 1);
    const double sd = std::sqrt(m * p * (1 - p));
    CHECK(std::abs(static_cast<double>(d.positives()) - m * p) <= 3 * sd);
}

TEST_CASE("two gaussians: tiny noise and large separation are linearly separable") {
    const Dataset d = gen_two_gaussians(400, 2, 0.5, 10.0, 0.1, 2);
    for (std::size_t i = 0; i < d.rows; ++i) {
        const auto x = d.row(i);
        REQUIRE(sign_of(x[0] + x[1]) == d.labels[i]);
    }
}

TEST_CASE("generator argument checks") {
    CHECK_THROWS_AS(gen_two_gaussians(0, 2, 0.1, 1.0, 1.0, 0), ConfigError);
    CHECK_THROWS_AS(gen_two_gaussians(10, 2, 1.5, 1.0, 1.0, 0), ConfigError);
    CHECK_THROWS_AS(gen_two_gaussians(10, 0, 0.1, 1.0, 1.0, 0), ConfigError);
}

TEST_CASE("figure1 dataset carries the angle property") {
    const Dataset d = gen_figure1_like(1500, 0);
    CHECK(d.cols == 2);
    CHECK(figure1_angle_gap(d) >= Figure1Params{}.min_angle_deg);
    const Dataset again = gen_figure1_like(1500, 0);
    CHECK(d.features == again.features);
}

TEST_CASE("figure1 retry exhaustion") {
    Figure1Params p;
    p.min_angle_deg = 181.0;
    p.max_retries = 2;
    CHECK_THROWS_AS(gen_figure1_like(300, 0, p), GenerationError);
}

TEST_CASE("CSV round trip is exact") {
    Dataset d = gen_two_gaussians(50, 3, 0.3, 1.0, 1.0, 4);
    d.features[0] = 0.1 + 0.2;
    d.features[1] = -1e-300;
    const fs::path p = temp_file("roundtrip.csv");
    write_csv(d, p);
    const Dataset back = read_csv(p);
    CHECK(back.features == d.features);
    CHECK(back.labels == d.labels);
    CHECK(back.cols == 3);
}

TEST_CASE("figure1 optimum survives the CSV round trip") {
    const Dataset d = gen_figure1_like(800, 1);
    const fs::path p = temp_file("fig1.csv");
    write_csv(d, p);
    const Dataset back = read_csv(p);
    const auto planes = linear_grid_2d(d.features, 90, 20);
    const auto a = best_halfplane(d.features, d.labels, planes, f_beta(0.5));
    const auto b = best_halfplane(back.features, back.labels, planes, f_beta(0.5));
    CHECK(a.index == b.index);
    CHECK(a.value == b.value);
}

TEST_CASE("CSV accepts 0/1 labels") {
    const fs::path p = temp_file("zero_one.csv");
    write_text(p, "f1,label\n0.5,1\n-0.5,0\n");
    const Dataset d = read_csv(p);
    CHECK(d.labels == std::vector<int>{1, -1});
}

TEST_CASE("CSV errors name the line") {
    const fs::path p = temp_file("bad.csv");
    write_text(p, "f1,f2,label\n1,2,1\n1,2\n");
    try {
        (void)read_csv(p);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
    write_text(p, "f1,label\n1,2\n");
    CHECK_THROWS_AS(read_csv(p), InputError);
    write_text(p, "f1,label\nabc,1\n");
    CHECK_THROWS_AS(read_csv(p), InputError);
    write_text(p, "");
    CHECK_THROWS_AS(read_csv(p), InputError);
    write_text(p, "f1,label\n");
    CHECK_THROWS_AS(read_csv(p), InputError);
    CHECK_THROWS_AS(read_csv(temp_file("does_not_exist.csv")), InputError);
}

TEST_CASE("stratified split sizes") {
    std::vector<int> ten{1, 1, 1, 1, 1, -1, -1, -1, -1, -1};
    auto [a, b] = stratified_split(ten, 0.5, 3);
    CHECK(a.size() == 5);
    CHECK(b.size() == 5);

    std::vector<int> hundred(100, -1);
    for (int i = 0; i < 10; ++i) hundred[i * 7] = 1;
    auto [first, second] = stratified_split(hundred, 0.3, 4);
    CHECK(first.size() == 30);
    std::size_t pos = 0;
    for (auto i : first) pos += hundred[i] == 1;
    CHECK(pos == 3);
    std::vector<bool> seen(100, false);
    for (auto i : first) seen[i] = true;
    for (auto i : second) {
        REQUIRE_FALSE(seen[i]);
        seen[i] = true;
    }
    for (bool s : seen) CHECK(s);
    CHECK(std::is_sorted(first.begin(), first.end()));

    auto again = stratified_split(hundred, 0.3, 4);
    CHECK(again.first == first);
}

TEST_CASE("stratified split rejects a part without a label") {
    std::vector<int> one_pos{1, -1, -1, -1, -1};
    CHECK_THROWS_AS(stratified_split(one_pos, 0.5, 0), InputError);
    CHECK_THROWS_AS(stratified_split(one_pos, 1.5, 0), ConfigError);
}

TEST_CASE("metadata sidecar") {
    const Dataset d = gen_two_gaussians(20, 2, 0.5, 1.0, 1.0, 7);
    const fs::path p = temp_file("meta.csv");
    write_metadata(d, metadata_path(p));
    CHECK(metadata_path(p).filename() == "meta.meta.json");
    CHECK(fs::exists(metadata_path(p)));
}
}
