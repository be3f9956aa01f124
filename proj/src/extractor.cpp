#include "uqlearn/extractor.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "uqlearn/errors.hpp"
#include "uqlearn/rng.hpp"

namespace uqlearn {

LayerSpec conv_layer(size_t out_channels, size_t kernel, size_t stride, size_t padding,
                     std::string weight_name) {
    if (out_channels < 1 || kernel < 1 || stride < 1)
        throw ValidationError("conv layer: out_channels, kernel and stride must be positive");
    if (weight_name.empty()) throw ValidationError("conv layer: weight_name required");
    LayerSpec l;
    l.kind = LayerKind::conv;
    l.out_channels = out_channels;
    l.kernel = kernel;
    l.stride = stride;
    l.padding = padding;
    l.weight_name = std::move(weight_name);
    return l;
}

LayerSpec relu_layer() {
    LayerSpec l;
    l.kind = LayerKind::relu;
    return l;
}

LayerSpec maxpool_layer(size_t size, size_t stride) {
    if (size < 1 || stride < 1)
        throw ValidationError("maxpool layer: size and stride must be positive");
    LayerSpec l;
    l.kind = LayerKind::maxpool;
    l.kernel = size;
    l.stride = stride;
    return l;
}

namespace {

// The layers to execute: drop_final_pool removes a trailing maxpool.
std::vector<LayerSpec> effective_layers(const ArchitectureSpec& arch) {
    std::vector<LayerSpec> layers = arch.layers;
    if (arch.drop_final_pool && !layers.empty() && layers.back().kind == LayerKind::maxpool)
        layers.pop_back();
    return layers;
}

struct MapShape {
    size_t c, h, w;
};

MapShape walk_shapes(const ArchitectureSpec& arch, const std::vector<LayerSpec>& layers) {
    MapShape s{3, arch.input_h, arch.input_w};
    for (size_t i = 0; i < layers.size(); ++i) {
        const LayerSpec& l = layers[i];
        switch (l.kind) {
        case LayerKind::conv: {
            const size_t ph = s.h + 2 * l.padding, pw = s.w + 2 * l.padding;
            if (l.kernel > ph || l.kernel > pw)
                throw ShapeError(arch.name + ": layer " + std::to_string(i) +
                                 " (conv) kernel exceeds padded input");
            s.c = l.out_channels;
            s.h = (ph - l.kernel) / l.stride + 1;
            s.w = (pw - l.kernel) / l.stride + 1;
            break;
        }
        case LayerKind::relu:
            break;
        case LayerKind::maxpool:
            if (l.kernel > s.h || l.kernel > s.w)
                throw ShapeError(arch.name + ": layer " + std::to_string(i) +
                                 " (maxpool) window exceeds input");
            s.h = (s.h - l.kernel) / l.stride + 1;
            s.w = (s.w - l.kernel) / l.stride + 1;
            break;
        }
    }
    return s;
}

} // namespace

ArchitectureSpec vgg16_preset() {
    ArchitectureSpec arch;
    arch.name = "vgg16";
    arch.input_h = arch.input_w = 224;
    arch.drop_final_pool = true;
    arch.declared_features = 25088;
    arch.declared_params = 14714688;

    auto block = [&arch](size_t channels, int convs, const std::string& prefix) {
        for (int i = 1; i <= convs; ++i) {
            arch.layers.push_back(conv_layer(channels, 3, 1, 1, prefix + "_" + std::to_string(i)));
            arch.layers.push_back(relu_layer());
        }
        arch.layers.push_back(maxpool_layer(2, 2));
    };
    block(64, 2, "conv1");
    block(128, 2, "conv2");
    block(256, 3, "conv3");
    block(512, 3, "conv4");
    block(512, 3, "conv5");
    // Final pooling stage that would collapse the 7x7 maps to one value per
    // channel; dropped by drop_final_pool so the flattened maps survive.
    arch.layers.push_back(maxpool_layer(7, 7));
    return arch;
}

namespace {
ArchitectureSpec metadata_preset(std::string name, size_t input, size_t features, size_t params) {
    ArchitectureSpec arch;
    arch.name = std::move(name);
    arch.input_h = arch.input_w = input;
    arch.drop_final_pool = true;
    arch.declared_features = features;
    arch.declared_params = params;
    return arch;
}
} // namespace

ArchitectureSpec resnet50_preset() { return metadata_preset("resnet50", 224, 100352, 23587712); }
ArchitectureSpec densenet121_preset() { return metadata_preset("densenet121", 224, 50176, 7037504); }
ArchitectureSpec inception_resnet_v2_preset() {
    return metadata_preset("inception_resnet_v2", 299, 98304, 54336736);
}

std::vector<ArchitectureSpec> all_presets() {
    return {vgg16_preset(), resnet50_preset(), densenet121_preset(), inception_resnet_v2_preset()};
}

std::optional<ArchitectureSpec> find_preset(const std::string& name) {
    for (auto& p : all_presets())
        if (p.name == name) return p;
    return std::nullopt;
}

size_t feature_count(const ArchitectureSpec& arch) {
    if (!arch.executable()) {
        if (!arch.declared_features)
            throw ValidationError(arch.name + ": metadata preset lacks a declared feature count");
        return *arch.declared_features;
    }
    MapShape s = walk_shapes(arch, effective_layers(arch));
    return s.c * s.h * s.w;
}

size_t parameter_count(const ArchitectureSpec& arch) {
    if (!arch.executable()) {
        if (!arch.declared_params)
            throw ValidationError(arch.name + ": metadata preset lacks a declared parameter count");
        return *arch.declared_params;
    }
    size_t total = 0;
    size_t in_c = 3;
    for (const LayerSpec& l : arch.layers) {
        if (l.kind != LayerKind::conv) continue;
        total += l.out_channels * in_c * l.kernel * l.kernel + l.out_channels;
        in_c = l.out_channels;
    }
    return total;
}

ArchitectureSpec load_arch_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    ArchitectureSpec arch;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;

        auto want = [&](auto& value, const char* what) {
            if (!(ls >> value)) throw ParseError(path + ": missing " + std::string(what), line_no);
        };

        if (word == "name") {
            want(arch.name, "architecture name");
        } else if (word == "input") {
            want(arch.input_h, "input height");
            want(arch.input_w, "input width");
        } else if (word == "drop_final_pool") {
            int flag;
            want(flag, "drop_final_pool flag");
            arch.drop_final_pool = flag != 0;
        } else if (word == "conv") {
            size_t out_c, kernel, stride, padding;
            std::string weight_name;
            want(out_c, "conv out_channels");
            want(kernel, "conv kernel");
            want(stride, "conv stride");
            want(padding, "conv padding");
            want(weight_name, "conv weight_name");
            arch.layers.push_back(conv_layer(out_c, kernel, stride, padding, weight_name));
        } else if (word == "relu") {
            arch.layers.push_back(relu_layer());
        } else if (word == "maxpool") {
            size_t size, stride;
            want(size, "maxpool size");
            want(stride, "maxpool stride");
            arch.layers.push_back(maxpool_layer(size, stride));
        } else {
            throw ParseError(path + ": unknown directive \"" + word + "\"", line_no);
        }
    }
    if (arch.name.empty()) throw ParseError(path + ": missing name directive", line_no);
    if (arch.input_h == 0 || arch.input_w == 0)
        throw ParseError(path + ": missing or zero input size", line_no);
    return arch;
}

Matrix extract_features(const Tensor4& images, const ArchitectureSpec& arch,
                        const WeightStore& weights) {
    if (!arch.executable())
        throw ValidationError(arch.name + ": metadata-only preset cannot extract features");
    if (images.c() != 3 || images.h() != arch.input_h || images.w() != arch.input_w)
        throw ShapeError("extract_features: input is " + std::to_string(images.c()) + "x" +
                         std::to_string(images.h()) + "x" + std::to_string(images.w()) +
                         ", architecture expects 3x" + std::to_string(arch.input_h) + "x" +
                         std::to_string(arch.input_w));

    const std::vector<LayerSpec> layers = effective_layers(arch);
    walk_shapes(arch, layers); // shape-check the whole chain up front

    Tensor4 current = images;
    for (size_t i = 0; i < layers.size(); ++i) {
        const LayerSpec& l = layers[i];
        try {
            switch (l.kind) {
            case LayerKind::conv: {
                const std::string wname = l.weight_name + ".weight";
                const std::string bname = l.weight_name + ".bias";
                if (!weights.contains(wname))
                    throw ValidationError("missing weight tensor \"" + wname + "\"");
                if (!weights.contains(bname))
                    throw ValidationError("missing bias tensor \"" + bname + "\"");
                const NamedTensor& wt = weights.get(wname);
                const NamedTensor& bt = weights.get(bname);
                if (wt.shape.size() != 4 || wt.shape[0] != l.out_channels ||
                    wt.shape[1] != current.c() || wt.shape[2] != l.kernel ||
                    wt.shape[3] != l.kernel)
                    throw ShapeError("weight tensor \"" + wname + "\" has wrong shape");
                if (bt.shape.size() != 1 || bt.shape[0] != l.out_channels)
                    throw ShapeError("bias tensor \"" + bname + "\" has wrong shape");
                Tensor4 kernels(wt.shape[0], wt.shape[1], wt.shape[2], wt.shape[3], wt.values);
                current = conv2d(current, kernels, bt.values, l.stride, l.padding);
                break;
            }
            case LayerKind::relu:
                current = relu(current);
                break;
            case LayerKind::maxpool:
                current = maxpool2d(current, l.kernel, l.stride);
                break;
            }
        } catch (const std::runtime_error& e) {
            throw ValidationError(arch.name + ": layer " + std::to_string(i) + ": " + e.what());
        }
    }

    const size_t features = current.c() * current.h() * current.w();
    Matrix out(images.n(), features);
    for (size_t img = 0; img < images.n(); ++img) {
        const double* src = current.data().data() + img * features;
        std::copy(src, src + features, out.row(img).begin());
    }
    return out;
}

WeightStore make_random_weights(const ArchitectureSpec& arch, uint64_t seed) {
    WeightStore store;
    Rng rng(seed);
    size_t in_c = 3;
    for (const LayerSpec& l : arch.layers) {
        if (l.kind != LayerKind::conv) continue;
        const size_t fan_in = in_c * l.kernel * l.kernel;
        const double sd = std::sqrt(2.0 / static_cast<double>(fan_in));
        std::vector<double> w(l.out_channels * in_c * l.kernel * l.kernel);
        for (double& v : w) v = sd * rng.normal();
        std::vector<double> b(l.out_channels, 0.0);
        store.add(l.weight_name + ".weight",
                  {static_cast<uint32_t>(l.out_channels), static_cast<uint32_t>(in_c),
                   static_cast<uint32_t>(l.kernel), static_cast<uint32_t>(l.kernel)},
                  std::move(w));
        store.add(l.weight_name + ".bias", {static_cast<uint32_t>(l.out_channels)}, std::move(b));
        in_c = l.out_channels;
    }
    return store;
}

} // namespace uqlearn
