#include "uqlearn/weights.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "uqlearn/errors.hpp"

namespace uqlearn {

namespace {

constexpr uint32_t kContainerVersion = 1;

class Reader {
public:
    Reader(const std::string& path, std::vector<char> bytes)
        : path_(path), bytes_(std::move(bytes)) {}

    size_t offset() const { return pos_; }
    bool at_end() const { return pos_ == bytes_.size(); }

    void read_bytes(void* dst, size_t count, const char* field) {
        if (pos_ + count > bytes_.size())
            throw FormatError(path_ + ": truncated while reading " + field + " at offset " +
                              std::to_string(pos_));
        std::memcpy(dst, bytes_.data() + pos_, count);
        pos_ += count;
    }

    uint8_t read_u8(const char* field) {
        uint8_t v;
        read_bytes(&v, 1, field);
        return v;
    }
    uint16_t read_u16(const char* field) {
        uint8_t b[2];
        read_bytes(b, 2, field);
        return static_cast<uint16_t>(b[0] | (b[1] << 8));
    }
    uint32_t read_u32(const char* field) {
        uint8_t b[4];
        read_bytes(b, 4, field);
        return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
               (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::vector<char> bytes_;
    size_t pos_ = 0;
};

void append_u16(std::vector<char>& out, uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void append_u32(std::vector<char>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

} // namespace

std::map<std::string, NamedTensor> read_container(const std::string& path,
                                                  const std::string& magic,
                                                  uint8_t max_dtype) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Reader r(path, std::move(bytes));

    char got[4];
    r.read_bytes(got, 4, "magic");
    if (std::memcmp(got, magic.data(), 4) != 0)
        throw FormatError(path + ": bad magic at offset 0, expected \"" + magic + "\"");
    const uint32_t version = r.read_u32("version");
    if (version != kContainerVersion)
        throw FormatError(path + ": unsupported version " + std::to_string(version) +
                          " at offset 4");
    const uint32_t count = r.read_u32("tensor count");

    std::map<std::string, NamedTensor> tensors;
    for (uint32_t t = 0; t < count; ++t) {
        const size_t entry_offset = r.offset();
        const uint16_t name_len = r.read_u16("name length");
        std::string name(name_len, '\0');
        r.read_bytes(name.data(), name_len, "name");
        if (tensors.count(name))
            throw FormatError(path + ": duplicate tensor name \"" + name + "\" at offset " +
                              std::to_string(entry_offset));

        NamedTensor tensor;
        tensor.dtype = r.read_u8("dtype");
        if (tensor.dtype > max_dtype)
            throw FormatError(path + ": unknown dtype code " + std::to_string(tensor.dtype) +
                              " for \"" + name + "\" at offset " + std::to_string(r.offset() - 1));
        const uint8_t rank = r.read_u8("rank");
        uint64_t total = 1;
        for (uint8_t d = 0; d < rank; ++d) {
            uint32_t dim = r.read_u32("dim");
            if (dim == 0)
                throw FormatError(path + ": zero dim in shape of \"" + name + "\" at offset " +
                                  std::to_string(r.offset() - 4));
            tensor.shape.push_back(dim);
            total *= dim;
        }

        tensor.values.resize(total);
        if (tensor.dtype == 0) {
            for (uint64_t i = 0; i < total; ++i) {
                uint32_t raw = r.read_u32("float32 payload");
                float f;
                std::memcpy(&f, &raw, 4);
                tensor.values[i] = static_cast<double>(f);
            }
        } else {
            for (uint64_t i = 0; i < total; ++i) {
                uint8_t b[8];
                r.read_bytes(b, 8, "float64 payload");
                uint64_t raw = 0;
                for (int k = 0; k < 8; ++k) raw |= static_cast<uint64_t>(b[k]) << (8 * k);
                double d;
                std::memcpy(&d, &raw, 8);
                tensor.values[i] = d;
            }
        }
        tensors.emplace(std::move(name), std::move(tensor));
    }
    if (!r.at_end())
        throw FormatError(path + ": trailing bytes after last tensor at offset " +
                          std::to_string(r.offset()));
    return tensors;
}

void write_container(const std::string& path, const std::string& magic,
                     const std::map<std::string, NamedTensor>& tensors) {
    std::vector<char> out;
    out.insert(out.end(), magic.begin(), magic.end());
    append_u32(out, kContainerVersion);
    append_u32(out, static_cast<uint32_t>(tensors.size()));

    // std::map iterates in name order, so serialization is canonical: two
    // saves of equal stores produce identical bytes.
    for (const auto& [name, tensor] : tensors) {
        append_u16(out, static_cast<uint16_t>(name.size()));
        out.insert(out.end(), name.begin(), name.end());
        out.push_back(static_cast<char>(tensor.dtype));
        out.push_back(static_cast<char>(tensor.shape.size()));
        for (uint32_t dim : tensor.shape) append_u32(out, dim);
        if (tensor.dtype == 0) {
            for (double v : tensor.values) {
                float f = static_cast<float>(v);
                uint32_t raw;
                std::memcpy(&raw, &f, 4);
                append_u32(out, raw);
            }
        } else {
            for (double v : tensor.values) {
                uint64_t raw;
                std::memcpy(&raw, &v, 8);
                for (int k = 0; k < 8; ++k)
                    out.push_back(static_cast<char>((raw >> (8 * k)) & 0xff));
            }
        }
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("write failed for " + path);
}

void WeightStore::add(const std::string& name, std::vector<uint32_t> shape,
                      std::vector<double> values) {
    if (name.empty() || name.size() > std::numeric_limits<uint16_t>::max())
        throw ValidationError("WeightStore: invalid tensor name");
    if (tensors_.count(name)) throw ValidationError("WeightStore: duplicate name \"" + name + "\"");
    uint64_t total = 1;
    for (uint32_t d : shape) total *= d;
    if (shape.empty() || total != values.size())
        throw ShapeError("WeightStore: shape product does not match value count for \"" + name +
                         "\"");
    NamedTensor t;
    t.dtype = 0;
    t.shape = std::move(shape);
    t.values.resize(values.size());
    for (size_t i = 0; i < values.size(); ++i)
        t.values[i] = static_cast<double>(static_cast<float>(values[i])); // float32 quantization
    tensors_.emplace(name, std::move(t));
}

const NamedTensor& WeightStore::get(const std::string& name) const {
    auto it = tensors_.find(name);
    if (it == tensors_.end()) throw ValidationError("WeightStore: missing tensor \"" + name + "\"");
    return it->second;
}

uint64_t WeightStore::content_hash() const {
    uint64_t h = 14695981039346656037ULL;
    auto mix = [&h](const void* data, size_t len) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    };
    for (const auto& [name, t] : tensors_) {
        mix(name.data(), name.size());
        mix(&t.dtype, 1);
        mix(t.shape.data(), t.shape.size() * sizeof(uint32_t));
        mix(t.values.data(), t.values.size() * sizeof(double));
    }
    return h;
}

WeightStore load_weights(const std::string& path) {
    WeightStore store;
    store.tensors_ = read_container(path, "FZWT", /*max_dtype=*/0);
    return store;
}

void save_weights(const WeightStore& store, const std::string& path) {
    write_container(path, "FZWT", store.tensors());
}

} // namespace uqlearn
