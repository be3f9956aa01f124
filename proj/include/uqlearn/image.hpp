#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uqlearn/tensor.hpp"

namespace uqlearn {

// Raw pixel grid as decoded from disk. channels is 1 (grayscale) or 3 (RGB),
// data is row-major with interleaved channels, values in [0, maxval].
struct Image {
    size_t height = 0;
    size_t width = 0;
    size_t channels = 1;
    uint16_t maxval = 255;
    std::vector<uint8_t> data;
};

// Minimal PGM/PPM reader: P2/P5 grayscale and P3/P6 RGB, maxval <= 255,
// '#' comments allowed in the header.
Image read_pnm(const std::string& path);

// Bilinear resize to (target_h, target_w) with half-pixel sample centers and
// edge clamping, pixel values scaled to [0, 1] by 1/maxval. Grayscale inputs
// are replicated to 3 channels. Result is a single-image (1, 3, h, w) batch.
Tensor4 preprocess(const Image& image, size_t target_h, size_t target_w);

// Stacks preprocessed images into one (n, 3, h, w) batch.
Tensor4 preprocess_batch(const std::vector<Image>& images, size_t target_h, size_t target_w);

} // namespace uqlearn
