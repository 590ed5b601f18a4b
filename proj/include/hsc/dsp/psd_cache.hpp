#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "hsc/error.hpp"
#include "hsc/tensor.hpp"

namespace hsc::dsp {

// A batch of B equal-length spectra, stored sample-major: spectrum b occupies
// data[b*F .. (b+1)*F).
struct PsdBatch {
    std::size_t bins = 0;  // F
    std::vector<double> data;

    std::size_t size() const { return bins == 0 ? 0 : data.size() / bins; }

    void append(const std::vector<double>& psd) {
        if (bins == 0) bins = psd.size();
        if (psd.size() != bins)
            throw ShapeError("psd batch: spectrum of " + std::to_string(psd.size()) +
                             " bins appended to batch of " + std::to_string(bins) + "-bin spectra");
        data.insert(data.end(), psd.begin(), psd.end());
    }

    std::vector<double> spectrum(std::size_t b) const {
        if (b >= size()) throw DataError("psd batch: sample index out of range");
        return std::vector<double>(data.begin() + static_cast<std::ptrdiff_t>(b * bins),
                                   data.begin() + static_cast<std::ptrdiff_t>((b + 1) * bins));
    }
};

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t get_u32(std::istream& is, const std::string& what) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw DataError("psd cache: truncated file while reading " + what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

} // namespace detail

// Cache file layout (little-endian):
//   magic "HSPC", F u32, B u32, then F*B float64 values sample-major.
inline void save_psd_cache(const std::string& path, const PsdBatch& batch) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("psd cache: cannot open '" + path + "' for writing");
    os.write("HSPC", 4);
    detail::put_u32(os, static_cast<std::uint32_t>(batch.bins));
    detail::put_u32(os, static_cast<std::uint32_t>(batch.size()));
    for (double v : batch.data) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
        os.write(reinterpret_cast<const char*>(b), 8);
    }
    if (!os) throw DataError("psd cache: write to '" + path + "' failed");
}

inline PsdBatch load_psd_cache(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("psd cache: cannot open '" + path + "'");
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "HSPC", 4) != 0)
        throw DataError("psd cache: '" + path + "' is not a spectrum cache (bad magic)");
    const std::uint32_t F = detail::get_u32(is, "bin count");
    const std::uint32_t B = detail::get_u32(is, "sample count");
    PsdBatch batch;
    batch.bins = F;
    batch.data.resize(static_cast<std::size_t>(F) * B);
    for (double& v : batch.data) {
        unsigned char b[8];
        if (!is.read(reinterpret_cast<char*>(b), 8))
            throw DataError("psd cache: truncated file while reading spectra");
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        std::memcpy(&v, &bits, 8);
    }
    return batch;
}

// Arrange a spectrum batch as the network input tensor of shape (1, F, 1, B):
// a single-channel, length-F feature map per sample, batch axis innermost.
// tensor[0, f, 0, b] = spectrum_b[f], copied without modification.
template <class T = double>
Tensor<T> make_input_tensor(const PsdBatch& batch) {
    if (batch.bins == 0 || batch.size() == 0)
        throw ShapeError("input tensor: empty spectrum batch");
    const std::size_t F = batch.bins, B = batch.size();
    Tensor<T> t({1, F, 1, B});
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t f = 0; f < F; ++f)
            t.data[f * B + b] = static_cast<T>(batch.data[b * F + f]);
    return t;
}

} // namespace hsc::dsp
