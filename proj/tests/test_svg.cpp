#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "uqlearn/errors.hpp"
#include "uqlearn/models.hpp"
#include "uqlearn/svg.hpp"

using namespace uqlearn;
namespace fs = std::filesystem;

namespace {

size_t count_occurrences(const std::string& text, const std::string& needle) {
    size_t count = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

EntropyField tiny_field() {
    EntropyField field;
    field.x_min = 0.0;
    field.x_max = 1.0;
    field.y_min = 0.0;
    field.y_max = 1.0;
    field.nx = field.ny = 2;
    field.values = Matrix(2, 2, {0.0, 0.2, 0.5, 0.69});
    return field;
}

} // namespace

TEST_CASE("scatter: single point renders exactly one marker") {
    const Matrix points(1, 2, {0.4, -1.2});
    const std::string svg = scatter_svg(points, {1}, "one point");
    CHECK(count_occurrences(svg, "class=\"marker\"") == 1);
    CHECK(svg.starts_with("<svg"));
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("width=\"800\" height=\"600\"") != std::string::npos);
}

TEST_CASE("scatter: classes get distinct colors") {
    const Matrix points(2, 2, {0.0, 0.0, 1.0, 1.0});
    const std::string svg = scatter_svg(points, {0, 1}, "two classes");
    CHECK(count_occurrences(svg, "class=\"marker\"") == 2);
    CHECK(svg.find("#d62728") != std::string::npos);
    CHECK(svg.find("#1f77b4") != std::string::npos);
}

TEST_CASE("boxplot: constant data draws a zero-height box") {
    const BoxplotStats flat = boxplot_stats(std::vector<double>(5, 3.0));
    const std::string svg = boxplot_svg({"constant"}, {flat}, "flat");
    CHECK(count_occurrences(svg, "class=\"box\"") == 1);
    CHECK(svg.find("height=\"0.00\"") != std::string::npos);
}

TEST_CASE("boxplot: outliers render as circles") {
    const BoxplotStats s = boxplot_stats(std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 100});
    const std::string svg = boxplot_svg({"spiky"}, {s}, "outliers");
    CHECK(count_occurrences(svg, "class=\"outlier\"") == 1);
}

TEST_CASE("heatmap: 2x2 field renders four cells; darker means higher") {
    const std::string svg = heatmap_svg(tiny_field(), nullptr, nullptr, "field");
    CHECK(count_occurrences(svg, "class=\"cell\"") == 4);
    // zero entropy is white, near-ln2 entropy is near-black
    CHECK(svg.find("#ffffff") != std::string::npos);
    CHECK(svg.find("#010101") != std::string::npos);
}

TEST_CASE("heatmap: sample overlay adds markers") {
    const Matrix points(3, 2, {0.2, 0.2, 0.8, 0.8, 0.5, 0.5});
    const std::vector<int> labels = {0, 1, 1};
    const std::string svg = heatmap_svg(tiny_field(), &points, &labels, "overlay");
    CHECK(count_occurrences(svg, "class=\"marker\"") == 3);
}

TEST_CASE("roc: one path per classifier plus the diagonal reference") {
    RocCurve a;
    a.fpr = {0.0, 0.0, 1.0};
    a.tpr = {0.0, 1.0, 1.0};
    RocCurve b;
    b.fpr = {0.0, 0.5, 1.0};
    b.tpr = {0.0, 0.5, 1.0};
    RocCurve c = b;
    const std::string svg = roc_svg({"linear_svm", "mlp", "gnb"}, {a, b, c}, {1.0, 0.5, 0.5},
                                    "roc");
    CHECK(count_occurrences(svg, "class=\"roc\"") == 3);
    CHECK(count_occurrences(svg, "class=\"diagonal\"") == 1);
    CHECK(count_occurrences(svg, "<path") == 4);
}

TEST_CASE("render output is byte-deterministic and write_svg round-trips") {
    const Matrix points(2, 2, {0.1, 0.2, -0.4, 0.9});
    const std::string first = scatter_svg(points, {0, 1}, "determinism");
    const std::string second = scatter_svg(points, {0, 1}, "determinism");
    CHECK(first == second);

    const fs::path dir = fs::temp_directory_path() / ("uqlearn_svg_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string path = (dir / "plot.svg").string();
    write_svg(first, path);
    std::ifstream in(path, std::ios::binary);
    const std::string loaded{std::istreambuf_iterator<char>(in),
                             std::istreambuf_iterator<char>()};
    CHECK(loaded == first);
    fs::remove_all(dir);

    CHECK_THROWS_AS(write_svg(first, "/nonexistent_dir_zzz/plot.svg"), IoError);
}

TEST_CASE("renderers validate their inputs") {
    CHECK_THROWS_AS(scatter_svg(Matrix(0, 2), {}, "empty"), ValidationError);
    CHECK_THROWS_AS(boxplot_svg({}, {}, "empty"), ValidationError);
    CHECK_THROWS_AS(roc_svg({"a"}, {}, {}, "mismatch"), ValidationError);
}
