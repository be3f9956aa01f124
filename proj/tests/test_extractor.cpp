#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "uqlearn/errors.hpp"
#include "uqlearn/extractor.hpp"
#include "uqlearn/image.hpp"
#include "uqlearn/rng.hpp"

using namespace uqlearn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("uqlearn_ext_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("FZWT: empty container round-trips") {
    TempDir tmp;
    const std::string path = tmp.file("empty.fzwt");
    save_weights(WeightStore{}, path);
    const WeightStore loaded = load_weights(path);
    CHECK(loaded.size() == 0);
}

TEST_CASE("FZWT: single 3x3 tensor of ones") {
    TempDir tmp;
    WeightStore store;
    store.add("ones", {3, 3}, std::vector<double>(9, 1.0));
    const std::string path = tmp.file("ones.fzwt");
    save_weights(store, path);
    const WeightStore loaded = load_weights(path);
    REQUIRE(loaded.contains("ones"));
    const NamedTensor& t = loaded.get("ones");
    CHECK(t.shape == std::vector<uint32_t>{3, 3});
    for (double v : t.values) CHECK(v == 1.0);
}

TEST_CASE("FZWT: bad magic is a format error naming the offset") {
    TempDir tmp;
    const std::string path = tmp.file("bad.fzwt");
    std::ofstream(path, std::ios::binary) << "XXXXjunkjunkjunk";
    CHECK_THROWS_WITH_AS(load_weights(path), doctest::Contains("bad magic"), FormatError);
}

TEST_CASE("FZWT: truncated payload names the offset") {
    TempDir tmp;
    WeightStore store;
    store.add("w", {4}, {1.0, 2.0, 3.0, 4.0});
    const std::string path = tmp.file("trunc.fzwt");
    save_weights(store, path);

    std::vector<char> bytes = slurp(path);
    bytes.resize(bytes.size() - 5);
    std::ofstream(path, std::ios::binary).write(bytes.data(), bytes.size());
    CHECK_THROWS_WITH_AS(load_weights(path), doctest::Contains("offset"), FormatError);
}

TEST_CASE("FZWT: trailing bytes rejected") {
    TempDir tmp;
    const std::string path = tmp.file("trail.fzwt");
    save_weights(WeightStore{}, path);
    std::ofstream(path, std::ios::binary | std::ios::app) << "zz";
    CHECK_THROWS_AS(load_weights(path), FormatError);
}

TEST_CASE("FZWT: random store of 5 tensors round-trips exactly, saves deterministic") {
    TempDir tmp;
    Rng rng(99);
    WeightStore store;
    for (int t = 0; t < 5; ++t) {
        const uint32_t rows = 1 + static_cast<uint32_t>(rng.uniform_index(4));
        const uint32_t cols = 1 + static_cast<uint32_t>(rng.uniform_index(6));
        std::vector<double> values(rows * cols);
        for (double& v : values) v = rng.normal();
        store.add("tensor" + std::to_string(t), {rows, cols}, values);
    }
    const std::string p1 = tmp.file("a.fzwt"), p2 = tmp.file("b.fzwt");
    save_weights(store, p1);
    CHECK(load_weights(p1) == store);

    save_weights(store, p2);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("WeightStore rejects duplicate names and shape mismatches") {
    WeightStore store;
    store.add("w", {2}, {1.0, 2.0});
    CHECK_THROWS_AS(store.add("w", {2}, {1.0, 2.0}), ValidationError);
    CHECK_THROWS_AS(store.add("bad", {3}, {1.0, 2.0}), ShapeError);
}

TEST_CASE("Table I: preset feature counts and input sizes") {
    CHECK(feature_count(vgg16_preset()) == 25088);
    CHECK(feature_count(resnet50_preset()) == 100352);
    CHECK(feature_count(densenet121_preset()) == 50176);
    CHECK(feature_count(inception_resnet_v2_preset()) == 98304);

    CHECK(vgg16_preset().input_h == 224);
    CHECK(resnet50_preset().input_h == 224);
    CHECK(densenet121_preset().input_h == 224);
    CHECK(inception_resnet_v2_preset().input_h == 299);

    // the executable preset's conv stack carries exactly the declared
    // parameter count
    CHECK(parameter_count(vgg16_preset()) == 14714688);
    CHECK(parameter_count(resnet50_preset()) == 23587712);
}

TEST_CASE("metadata presets cannot extract") {
    const Tensor4 batch(1, 3, 224, 224, 0.0);
    CHECK_THROWS_AS(extract_features(batch, resnet50_preset(), WeightStore{}), ValidationError);
}

TEST_CASE("extract: 1x1 identity conv + relu equals flattened non-negative input") {
    ArchitectureSpec arch;
    arch.name = "toy_identity";
    arch.input_h = arch.input_w = 3;
    arch.layers = {conv_layer(3, 1, 1, 0, "id"), relu_layer()};

    WeightStore weights;
    std::vector<double> kernel(3 * 3 * 1 * 1, 0.0);
    for (size_t c = 0; c < 3; ++c) kernel[c * 3 + c] = 1.0;
    weights.add("id.weight", {3, 3, 1, 1}, kernel);
    weights.add("id.bias", {3}, {0.0, 0.0, 0.0});

    Rng rng(4);
    Tensor4 batch(2, 3, 3, 3);
    for (double& v : batch.data()) v = std::abs(rng.normal());

    const Matrix features = extract_features(batch, arch, weights);
    CHECK(features.rows() == 2);
    CHECK(features.cols() == 27);
    for (size_t img = 0; img < 2; ++img)
        for (size_t i = 0; i < 27; ++i)
            CHECK(features(img, i) == batch.data()[img * 27 + i]);
}

TEST_CASE("extract: two-layer toy spec matches a manual forward pass") {
    // 4x4 ramp input, 2x2 kernel [[1,0],[0,1]] with bias 0.5, then relu:
    // out(y,x) = in(y,x) + in(y+1,x+1) + 0.5 = 8y + 2x + 5.5
    ArchitectureSpec arch;
    arch.name = "toy_two_layer";
    arch.input_h = arch.input_w = 4;
    arch.layers = {conv_layer(1, 2, 1, 0, "c"), relu_layer()};

    WeightStore weights;
    weights.add("c.weight", {1, 3, 2, 2},
                {1, 0, 0, 1,   // channel 0
                 0, 0, 0, 0,   // channel 1 ignored
                 0, 0, 0, 0}); // channel 2 ignored
    weights.add("c.bias", {1}, {0.5});

    Tensor4 batch(1, 3, 4, 4, 0.0);
    for (size_t y = 0; y < 4; ++y)
        for (size_t x = 0; x < 4; ++x) batch.at(0, 0, y, x) = static_cast<double>(4 * y + x);

    const Matrix features = extract_features(batch, arch, weights);
    REQUIRE(features.cols() == 9);
    for (size_t y = 0; y < 3; ++y)
        for (size_t x = 0; x < 3; ++x)
            CHECK(features(0, y * 3 + x) ==
                  doctest::Approx(8.0 * static_cast<double>(y) + 2.0 * static_cast<double>(x) +
                                  5.5));
}

TEST_CASE("extract: drop_final_pool skips only a trailing maxpool") {
    ArchitectureSpec arch;
    arch.name = "toy_pool";
    arch.input_h = arch.input_w = 4;
    arch.layers = {conv_layer(1, 1, 1, 0, "c"), maxpool_layer(2, 2)};

    WeightStore weights;
    weights.add("c.weight", {1, 3, 1, 1}, {1.0, 0.0, 0.0});
    weights.add("c.bias", {1}, {0.0});

    arch.drop_final_pool = false;
    CHECK(feature_count(arch) == 4); // pooled 2x2
    arch.drop_final_pool = true;
    CHECK(feature_count(arch) == 16); // pool dropped

    Tensor4 batch(1, 3, 4, 4, 1.0);
    CHECK(extract_features(batch, arch, weights).cols() == 16);
}

TEST_CASE("extract: missing weight cites the layer index") {
    ArchitectureSpec arch;
    arch.name = "toy_missing";
    arch.input_h = arch.input_w = 2;
    arch.layers = {relu_layer(), conv_layer(1, 1, 1, 0, "absent")};
    const Tensor4 batch(1, 3, 2, 2, 0.0);
    CHECK_THROWS_WITH_AS(extract_features(batch, arch, WeightStore{}),
                         doctest::Contains("layer 1"), ValidationError);
}

TEST_CASE("extract: wrong input size is a shape error") {
    ArchitectureSpec arch;
    arch.name = "toy";
    arch.input_h = arch.input_w = 8;
    arch.layers = {relu_layer()};
    const Tensor4 batch(1, 3, 4, 4, 0.0);
    CHECK_THROWS_AS(extract_features(batch, arch, WeightStore{}), ShapeError);
}

TEST_CASE("extract: weights stay frozen and extraction is deterministic") {
    ArchitectureSpec arch;
    arch.name = "toy_frozen";
    arch.input_h = arch.input_w = 6;
    arch.layers = {conv_layer(4, 3, 1, 1, "c1"), relu_layer(), maxpool_layer(2, 2),
                   conv_layer(2, 3, 1, 1, "c2"), relu_layer()};

    const WeightStore weights = make_random_weights(arch, 7);
    const uint64_t hash_before = weights.content_hash();

    Rng rng(8);
    Tensor4 batch(3, 3, 6, 6);
    for (double& v : batch.data()) v = rng.normal();

    const Matrix first = extract_features(batch, arch, weights);
    const Matrix second = extract_features(batch, arch, weights);
    CHECK(first == second); // bit-identical
    CHECK(weights.content_hash() == hash_before);

    // feature count depends on the spec alone, not the weight values
    CHECK(first.cols() == feature_count(arch));
    const WeightStore other = make_random_weights(arch, 1234);
    CHECK(extract_features(batch, arch, other).cols() == feature_count(arch));
}

TEST_CASE("architecture spec text format round-trips through a file") {
    TempDir tmp;
    const std::string path = tmp.file("toy.arch");
    std::ofstream(path) << "# toy architecture\n"
                           "name toy\n"
                           "input 8 8\n"
                           "drop_final_pool 1\n"
                           "conv 4 3 1 1 c1\n"
                           "relu\n"
                           "maxpool 2 2\n";
    const ArchitectureSpec arch = load_arch_spec(path);
    CHECK(arch.name == "toy");
    CHECK(arch.input_h == 8);
    CHECK(arch.drop_final_pool);
    REQUIRE(arch.layers.size() == 3);
    CHECK(arch.layers[0].kind == LayerKind::conv);
    CHECK(arch.layers[0].out_channels == 4);
    CHECK(arch.layers[2].kind == LayerKind::maxpool);
    // final pool dropped: 8x8 conv output stays 8x8, 4 channels
    CHECK(feature_count(arch) == 256);
}

TEST_CASE("architecture spec parse errors carry line numbers") {
    TempDir tmp;
    const std::string path = tmp.file("bad.arch");
    std::ofstream(path) << "name toy\ninput 8 8\nconv 4 3\n";
    try {
        load_arch_spec(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("preprocess: image already at target only rescales values") {
    Image img;
    img.height = img.width = 3;
    img.channels = 1;
    img.maxval = 200;
    img.data = {0, 100, 200, 50, 150, 200, 0, 0, 100};

    const Tensor4 out = preprocess(img, 3, 3);
    CHECK(out.c() == 3);
    for (size_t ch = 0; ch < 3; ++ch) // grayscale replicated across channels
        for (size_t y = 0; y < 3; ++y)
            for (size_t x = 0; x < 3; ++x)
                CHECK(out.at(0, ch, y, x) == doctest::Approx(img.data[y * 3 + x] / 200.0));
}

TEST_CASE("preprocess: constant image stays constant after resize") {
    Image img;
    img.height = img.width = 2;
    img.channels = 1;
    img.maxval = 255;
    img.data = {80, 80, 80, 80};
    const Tensor4 out = preprocess(img, 5, 7);
    for (double v : out.data()) CHECK(v == doctest::Approx(80.0 / 255.0));
}

TEST_CASE("preprocess: 2x2 ramp upscaled to 4x4 matches the bilinear formula") {
    Image img;
    img.height = img.width = 2;
    img.channels = 1;
    img.maxval = 255;
    img.data = {0, 1, 2, 3};

    // half-pixel centers with edge clamping: sample rows/cols at 0, .25, .75, 1
    const double expected[4][4] = {{0.0, 0.25, 0.75, 1.0},
                                   {0.5, 0.75, 1.25, 1.5},
                                   {1.5, 1.75, 2.25, 2.5},
                                   {2.0, 2.25, 2.75, 3.0}};
    const Tensor4 out = preprocess(img, 4, 4);
    for (size_t y = 0; y < 4; ++y)
        for (size_t x = 0; x < 4; ++x)
            CHECK(out.at(0, 0, y, x) == doctest::Approx(expected[y][x] / 255.0));
}

TEST_CASE("preprocess: zero-dimension image rejected") {
    Image img;
    img.height = 0;
    img.width = 4;
    img.channels = 1;
    CHECK_THROWS_AS(preprocess(img, 4, 4), ValidationError);
}

TEST_CASE("PNM reader handles binary P5, ascii P2 and RGB P6") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("gray.pgm"), std::ios::binary);
        out << "P5\n# comment\n2 2\n255\n";
        const unsigned char px[4] = {0, 64, 128, 255};
        out.write(reinterpret_cast<const char*>(px), 4);
    }
    const Image p5 = read_pnm(tmp.file("gray.pgm"));
    CHECK(p5.channels == 1);
    CHECK(p5.data == std::vector<uint8_t>{0, 64, 128, 255});

    std::ofstream(tmp.file("gray.p2")) << "P2\n2 2\n15\n0 5 10 15\n";
    const Image p2 = read_pnm(tmp.file("gray.p2"));
    CHECK(p2.maxval == 15);
    CHECK(p2.data == std::vector<uint8_t>{0, 5, 10, 15});

    {
        std::ofstream out(tmp.file("rgb.ppm"), std::ios::binary);
        out << "P6\n1 1\n255\n";
        const unsigned char px[3] = {10, 20, 30};
        out.write(reinterpret_cast<const char*>(px), 3);
    }
    const Image p6 = read_pnm(tmp.file("rgb.ppm"));
    CHECK(p6.channels == 3);
    CHECK(p6.data == std::vector<uint8_t>{10, 20, 30});
}

TEST_CASE("PNM reader rejects bad magic and truncation") {
    TempDir tmp;
    std::ofstream(tmp.file("junk.pgm")) << "P9\n2 2\n255\n";
    CHECK_THROWS_AS(read_pnm(tmp.file("junk.pgm")), FormatError);

    {
        std::ofstream out(tmp.file("short.pgm"), std::ios::binary);
        out << "P5\n2 2\n255\n";
        const unsigned char px[2] = {1, 2};
        out.write(reinterpret_cast<const char*>(px), 2);
    }
    CHECK_THROWS_AS(read_pnm(tmp.file("short.pgm")), FormatError);
}
