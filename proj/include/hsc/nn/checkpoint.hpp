#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "hsc/error.hpp"
#include "hsc/nn/layer.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// Checkpoint file layout (little-endian):
//   magic   "HSCW" (4 bytes)
//   version u32 (currently 1)
//   count   u64 records
// then per record:
//   name_len u32, name bytes
//   rank     u32, dims u64[rank]
//   data     float32[product(dims)]
// Records cover every parameter and every buffer of the model, in collection
// order, under their layer-qualified names (e.g. "branch0.conv1.weight").

namespace detail {

inline void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint32_t read_u32(std::istream& is, const std::string& what) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw DataError("checkpoint: truncated file while reading " + what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

inline std::uint64_t read_u64(std::istream& is, const std::string& what) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8))
        throw DataError("checkpoint: truncated file while reading " + what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

inline void write_f32_array(std::ostream& os, const float* p, std::size_t n) {
    // Assumes IEEE-754 floats; serialize each value's bit pattern little-endian.
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t bits;
        std::memcpy(&bits, &p[i], 4);
        write_u32(os, bits);
    }
}

inline void read_f32_array(std::istream& is, float* p, std::size_t n, const std::string& what) {
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t bits = read_u32(is, what);
        std::memcpy(&p[i], &bits, 4);
    }
}

} // namespace detail

struct NamedTensorF32 {
    std::string name;
    Tensor<float> value;
};

inline void save_records(const std::string& path, const std::vector<NamedTensorF32>& records) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("checkpoint: cannot open '" + path + "' for writing");
    os.write("HSCW", 4);
    detail::write_u32(os, 1);
    detail::write_u64(os, records.size());
    for (const auto& r : records) {
        detail::write_u32(os, static_cast<std::uint32_t>(r.name.size()));
        os.write(r.name.data(), static_cast<std::streamsize>(r.name.size()));
        detail::write_u32(os, static_cast<std::uint32_t>(r.value.rank()));
        for (std::size_t d : r.value.shape) detail::write_u64(os, d);
        detail::write_f32_array(os, r.value.data.data(), r.value.numel());
    }
    if (!os) throw DataError("checkpoint: write to '" + path + "' failed");
}

inline std::vector<NamedTensorF32> load_records(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("checkpoint: cannot open '" + path + "'");
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "HSCW", 4) != 0)
        throw DataError("checkpoint: '" + path + "' is not a model checkpoint (bad magic)");
    const std::uint32_t version = detail::read_u32(is, "version");
    if (version != 1)
        throw DataError("checkpoint: unsupported version " + std::to_string(version));
    const std::uint64_t count = detail::read_u64(is, "record count");
    std::vector<NamedTensorF32> records;
    records.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint32_t name_len = detail::read_u32(is, "name length");
        std::string name(name_len, '\0');
        if (!is.read(name.data(), name_len))
            throw DataError("checkpoint: truncated file while reading record name");
        const std::uint32_t rank = detail::read_u32(is, "rank of '" + name + "'");
        std::vector<std::size_t> shape(rank);
        for (std::uint32_t d = 0; d < rank; ++d)
            shape[d] = static_cast<std::size_t>(detail::read_u64(is, "dims of '" + name + "'"));
        Tensor<float> t(shape);
        detail::read_f32_array(is, t.data.data(), t.numel(), "data of '" + name + "'");
        records.push_back({std::move(name), std::move(t)});
    }
    return records;
}

// Gather a model's parameters and buffers as float32 records.
template <class T>
std::vector<NamedTensorF32> snapshot_model(Layer<T>& model) {
    std::vector<Param<T>*> params;
    std::vector<Buffer<T>*> buffers;
    model.collect_params(params);
    model.collect_buffers(buffers);
    std::vector<NamedTensorF32> records;
    records.reserve(params.size() + buffers.size());
    for (const Param<T>* p : params)
        records.push_back({p->name, p->value.template cast<float>()});
    for (const Buffer<T>* b : buffers)
        records.push_back({b->name, b->value.template cast<float>()});
    return records;
}

// Load records back into a model. Every model tensor must be present with a
// matching shape; extra records in the file are an error too, so a checkpoint
// can only be restored into the architecture that produced it.
template <class T>
void restore_model(Layer<T>& model, const std::vector<NamedTensorF32>& records) {
    std::vector<Param<T>*> params;
    std::vector<Buffer<T>*> buffers;
    model.collect_params(params);
    model.collect_buffers(buffers);
    if (records.size() != params.size() + buffers.size())
        throw DataError("checkpoint: file has " + std::to_string(records.size()) +
                        " records, model expects " +
                        std::to_string(params.size() + buffers.size()));
    std::size_t idx = 0;
    auto take = [&](const std::string& name, Tensor<T>& dst) {
        const NamedTensorF32& r = records[idx++];
        if (r.name != name)
            throw DataError("checkpoint: expected record '" + name + "', found '" + r.name + "'");
        if (r.value.shape != dst.shape)
            throw DataError("checkpoint: record '" + name + "' has shape " + r.value.shape_str() +
                            ", model expects " + dst.shape_str());
        dst = r.value.template cast<T>();
    };
    for (Param<T>* p : params) take(p->name, p->value);
    for (Buffer<T>* b : buffers) take(b->name, b->value);
}

template <class T>
void save_model(const std::string& path, Layer<T>& model) {
    save_records(path, snapshot_model(model));
}

template <class T>
void load_model(const std::string& path, Layer<T>& model) {
    restore_model(model, load_records(path));
}

} // namespace hsc::nn
