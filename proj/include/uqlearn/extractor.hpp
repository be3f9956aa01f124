#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uqlearn/tensor.hpp"
#include "uqlearn/weights.hpp"

namespace uqlearn {

enum class LayerKind { conv, relu, maxpool };

struct LayerSpec {
    LayerKind kind = LayerKind::relu;
    // conv parameters
    size_t out_channels = 0;
    size_t kernel = 0;
    size_t stride = 1;
    size_t padding = 0;
    std::string weight_name; // store holds "<weight_name>.weight" and "<weight_name>.bias"
    // maxpool parameters reuse kernel (window size) and stride
};

LayerSpec conv_layer(size_t out_channels, size_t kernel, size_t stride, size_t padding,
                     std::string weight_name);
LayerSpec relu_layer();
LayerSpec maxpool_layer(size_t size, size_t stride);

// A feature-extraction network. Executable specs carry a sequential
// conv/relu/maxpool chain; metadata-only presets (empty layer list) just
// declare their input size and feature count for file-based ingestion.
// drop_final_pool skips a trailing maxpool layer, the pooling stage that
// would otherwise collapse the last feature maps before flattening.
struct ArchitectureSpec {
    std::string name;
    size_t input_h = 0;
    size_t input_w = 0;
    std::vector<LayerSpec> layers;
    bool drop_final_pool = false;
    // Declared metadata for non-executable presets.
    std::optional<size_t> declared_features;
    std::optional<size_t> declared_params;

    bool executable() const { return !layers.empty(); }
};

// The four built-in presets. Only "vgg16" is executable; the other three are
// metadata presets whose features are ingested from CSV files.
ArchitectureSpec vgg16_preset();
ArchitectureSpec resnet50_preset();
ArchitectureSpec densenet121_preset();
ArchitectureSpec inception_resnet_v2_preset();
std::optional<ArchitectureSpec> find_preset(const std::string& name);
std::vector<ArchitectureSpec> all_presets();

// Flattened feature count. Pure shape arithmetic for executable specs,
// declared value for metadata presets.
size_t feature_count(const ArchitectureSpec& arch);

// Trainable-parameter count of the conv layers (weights + biases).
size_t parameter_count(const ArchitectureSpec& arch);

// Plain-text layer-per-line format:
//   name <identifier>
//   input <height> <width>
//   drop_final_pool <0|1>
//   conv <out_channels> <kernel> <stride> <padding> <weight_name>
//   relu
//   maxpool <size> <stride>
// Blank lines and '#' comments are ignored.
ArchitectureSpec load_arch_spec(const std::string& path);

// Forward pass with frozen weights; row i of the result is the flattened
// final feature map of image i. The store is never modified.
Matrix extract_features(const Tensor4& images, const ArchitectureSpec& arch,
                        const WeightStore& weights);

// Seeded synthetic weights matching an executable spec's conv layers.
WeightStore make_random_weights(const ArchitectureSpec& arch, uint64_t seed);

} // namespace uqlearn
