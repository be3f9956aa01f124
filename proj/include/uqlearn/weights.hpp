#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace uqlearn {

// One named tensor inside a binary container. dtype 0 = float32 (the FZWT
// payload type), dtype 1 = float64 (used by the CMDL model container).
// Values are held as doubles regardless of on-disk dtype; float32 entries
// are exact float32 values widened to double.
struct NamedTensor {
    uint8_t dtype = 0;
    std::vector<uint32_t> shape;
    std::vector<double> values;

    bool operator==(const NamedTensor& other) const = default;
};

// Container framing shared by FZWT and CMDL (little-endian):
//   magic[4], u32 version, u32 tensor count, then per tensor:
//   u16 name length, UTF-8 name, u8 dtype, u8 rank, rank x u32 dims, payload.
// All load errors name the byte offset and the field being read.
std::map<std::string, NamedTensor> read_container(const std::string& path,
                                                  const std::string& magic,
                                                  uint8_t max_dtype);
void write_container(const std::string& path, const std::string& magic,
                     const std::map<std::string, NamedTensor>& tensors);

// Frozen-weight store: name -> tensor. Values added through add() are
// quantized through float32 so a save/load round-trip is exact.
class WeightStore {
public:
    void add(const std::string& name, std::vector<uint32_t> shape, std::vector<double> values);

    bool contains(const std::string& name) const { return tensors_.count(name) > 0; }
    const NamedTensor& get(const std::string& name) const;
    size_t size() const { return tensors_.size(); }
    const std::map<std::string, NamedTensor>& tensors() const { return tensors_; }

    // FNV-1a over the serialized content; used to assert weights stay frozen.
    uint64_t content_hash() const;

    bool operator==(const WeightStore& other) const = default;

private:
    friend WeightStore load_weights(const std::string&);
    std::map<std::string, NamedTensor> tensors_;
};

WeightStore load_weights(const std::string& path);
void save_weights(const WeightStore& store, const std::string& path);

} // namespace uqlearn
