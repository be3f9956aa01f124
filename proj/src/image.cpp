#include "uqlearn/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "uqlearn/errors.hpp"

namespace uqlearn {

namespace {

// Reads the next whitespace-separated token, skipping '#' comment lines.
std::string next_token(std::istream& in, const std::string& path) {
    std::string tok;
    for (;;) {
        int ch = in.peek();
        if (ch == EOF) throw FormatError(path + ": unexpected end of PNM header");
        if (std::isspace(ch)) {
            in.get();
            continue;
        }
        if (ch == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        break;
    }
    in >> tok;
    return tok;
}

size_t parse_dim(const std::string& tok, const std::string& path, const char* what) {
    try {
        long v = std::stol(tok);
        if (v <= 0) throw std::invalid_argument("non-positive");
        return static_cast<size_t>(v);
    } catch (const std::exception&) {
        throw FormatError(path + ": invalid " + what + " \"" + tok + "\"");
    }
}

} // namespace

Image read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);

    std::string magic = next_token(in, path);
    bool ascii;
    size_t channels;
    if (magic == "P2") { ascii = true; channels = 1; }
    else if (magic == "P3") { ascii = true; channels = 3; }
    else if (magic == "P5") { ascii = false; channels = 1; }
    else if (magic == "P6") { ascii = false; channels = 3; }
    else throw FormatError(path + ": unsupported PNM magic \"" + magic + "\"");

    Image img;
    img.channels = channels;
    img.width = parse_dim(next_token(in, path), path, "width");
    img.height = parse_dim(next_token(in, path), path, "height");
    size_t maxval = parse_dim(next_token(in, path), path, "maxval");
    if (maxval == 0 || maxval > 255)
        throw FormatError(path + ": unsupported maxval " + std::to_string(maxval));
    img.maxval = static_cast<uint16_t>(maxval);

    const size_t count = img.width * img.height * channels;
    img.data.resize(count);
    if (ascii) {
        for (size_t i = 0; i < count; ++i) {
            long v;
            if (!(in >> v) || v < 0 || v > static_cast<long>(maxval))
                throw FormatError(path + ": bad pixel value at index " + std::to_string(i));
            img.data[i] = static_cast<uint8_t>(v);
        }
    } else {
        in.get(); // single whitespace after maxval
        in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(count));
        if (static_cast<size_t>(in.gcount()) != count)
            throw FormatError(path + ": truncated pixel payload, expected " +
                              std::to_string(count) + " bytes");
    }
    return img;
}

Tensor4 preprocess(const Image& image, size_t target_h, size_t target_w) {
    std::vector<Image> one{image};
    return preprocess_batch(one, target_h, target_w);
}

Tensor4 preprocess_batch(const std::vector<Image>& images, size_t target_h, size_t target_w) {
    if (images.empty()) throw ValidationError("preprocess: empty batch");
    if (target_h == 0 || target_w == 0) throw ValidationError("preprocess: zero target size");

    Tensor4 out(images.size(), 3, target_h, target_w);
    for (size_t img_idx = 0; img_idx < images.size(); ++img_idx) {
        const Image& img = images[img_idx];
        if (img.height == 0 || img.width == 0)
            throw ValidationError("preprocess: image has a zero dimension");
        if (img.channels != 1 && img.channels != 3)
            throw ValidationError("preprocess: expected 1 or 3 channels, got " +
                                  std::to_string(img.channels));
        if (img.data.size() != img.height * img.width * img.channels)
            throw ValidationError("preprocess: pixel buffer size mismatch");

        const double scale = 1.0 / static_cast<double>(img.maxval);
        const double sy = static_cast<double>(img.height) / static_cast<double>(target_h);
        const double sx = static_cast<double>(img.width) / static_cast<double>(target_w);

        auto pixel = [&](size_t y, size_t x, size_t ch) -> double {
            size_t c = img.channels == 1 ? 0 : ch;
            return static_cast<double>(img.data[(y * img.width + x) * img.channels + c]);
        };

        for (size_t oy = 0; oy < target_h; ++oy) {
            double fy = (static_cast<double>(oy) + 0.5) * sy - 0.5;
            fy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
            const size_t y0 = static_cast<size_t>(fy);
            const size_t y1 = std::min(y0 + 1, img.height - 1);
            const double wy = fy - static_cast<double>(y0);
            for (size_t ox = 0; ox < target_w; ++ox) {
                double fx = (static_cast<double>(ox) + 0.5) * sx - 0.5;
                fx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
                const size_t x0 = static_cast<size_t>(fx);
                const size_t x1 = std::min(x0 + 1, img.width - 1);
                const double wx = fx - static_cast<double>(x0);
                for (size_t ch = 0; ch < 3; ++ch) {
                    const double top = (1.0 - wx) * pixel(y0, x0, ch) + wx * pixel(y0, x1, ch);
                    const double bot = (1.0 - wx) * pixel(y1, x0, ch) + wx * pixel(y1, x1, ch);
                    out.at(img_idx, ch, oy, ox) = ((1.0 - wy) * top + wy * bot) * scale;
                }
            }
        }
    }
    return out;
}

} // namespace uqlearn
