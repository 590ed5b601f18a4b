#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "hsc/error.hpp"

namespace hsc::dataset {

struct WavData {
    std::vector<double> samples; // mono, scaled to [-1, 1]
    std::uint32_t sample_rate = 0;
};

namespace detail {

inline std::uint16_t rd_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline std::uint32_t rd_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

} // namespace detail

// Read a RIFF/WAVE file: mono, 16-bit PCM (format 1) or 32-bit float
// (format 3). Chunks other than fmt/data are skipped, including their odd-size
// pad bytes. PCM samples are scaled by 1/32768 into [-1, 1].
inline WavData read_wav(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("wav: cannot open '" + path + "'");

    auto read_bytes = [&](void* dst, std::size_t n, const char* what) {
        if (!is.read(static_cast<char*>(dst), static_cast<std::streamsize>(n)))
            throw DataError("wav: '" + path + "' truncated while reading " + what);
    };

    unsigned char hdr[12];
    read_bytes(hdr, 12, "RIFF header");
    if (std::memcmp(hdr, "RIFF", 4) != 0 || std::memcmp(hdr + 8, "WAVE", 4) != 0)
        throw DataError("wav: '" + path + "' is not a RIFF/WAVE file");

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    std::vector<unsigned char> payload;

    unsigned char chdr[8];
    while (is.read(reinterpret_cast<char*>(chdr), 8)) {
        const std::uint32_t size = detail::rd_u32(chdr + 4);
        if (std::memcmp(chdr, "fmt ", 4) == 0) {
            if (size < 16) throw DataError("wav: '" + path + "' has a malformed fmt chunk");
            std::vector<unsigned char> fmt(size);
            read_bytes(fmt.data(), size, "fmt chunk");
            format = detail::rd_u16(&fmt[0]);
            channels = detail::rd_u16(&fmt[2]);
            rate = detail::rd_u32(&fmt[4]);
            bits = detail::rd_u16(&fmt[14]);
            have_fmt = true;
        } else if (std::memcmp(chdr, "data", 4) == 0) {
            payload.resize(size);
            read_bytes(payload.data(), size, "sample data");
        } else {
            is.seekg(size, std::ios::cur);
        }
        if (size % 2 == 1) is.seekg(1, std::ios::cur); // RIFF chunks are word-aligned
    }

    if (!have_fmt) throw DataError("wav: '" + path + "' has no fmt chunk");
    if (payload.empty()) throw DataError("wav: '" + path + "' has no sample data");
    if (channels != 1)
        throw DataError("wav: '" + path + "' has " + std::to_string(channels) +
                        " channels; only mono input is supported");
    if (rate == 0) throw DataError("wav: '" + path + "' declares a zero sample rate");

    WavData out;
    out.sample_rate = rate;
    if (format == 1 && bits == 16) {
        const std::size_t n = payload.size() / 2;
        out.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::int16_t v =
                static_cast<std::int16_t>(detail::rd_u16(&payload[2 * i]));
            out.samples[i] = static_cast<double>(v) / 32768.0;
        }
    } else if (format == 3 && bits == 32) {
        const std::size_t n = payload.size() / 4;
        out.samples.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t u = detail::rd_u32(&payload[4 * i]);
            float f;
            std::memcpy(&f, &u, 4);
            out.samples[i] = static_cast<double>(f);
        }
    } else {
        throw DataError("wav: '" + path + "' has format " + std::to_string(format) + " at " +
                        std::to_string(bits) + " bits; supported: 16-bit PCM, 32-bit float");
    }
    if (out.samples.empty()) throw DataError("wav: '" + path + "' contains no samples");
    return out;
}

// Write a mono 16-bit PCM WAV (values clipped to [-1, 1]). Used by the
// synthetic-corpus generator and tests.
inline void write_wav_pcm16(const std::string& path, const std::vector<double>& samples,
                            std::uint32_t sample_rate) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("wav: cannot open '" + path + "' for writing");
    auto w16 = [&](std::uint16_t v) {
        unsigned char b[2] = {static_cast<unsigned char>(v & 0xFF),
                              static_cast<unsigned char>((v >> 8) & 0xFF)};
        os.write(reinterpret_cast<const char*>(b), 2);
    };
    auto w32 = [&](std::uint32_t v) {
        unsigned char b[4];
        for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
        os.write(reinterpret_cast<const char*>(b), 4);
    };
    const std::uint32_t data_size = static_cast<std::uint32_t>(samples.size() * 2);
    os.write("RIFF", 4);
    w32(36 + data_size);
    os.write("WAVE", 4);
    os.write("fmt ", 4);
    w32(16);
    w16(1); // PCM
    w16(1); // mono
    w32(sample_rate);
    w32(sample_rate * 2); // byte rate
    w16(2);               // block align
    w16(16);              // bits per sample
    os.write("data", 4);
    w32(data_size);
    for (double v : samples) {
        double c = v;
        if (c > 1.0) c = 1.0;
        if (c < -1.0) c = -1.0;
        const double scaled = c * 32767.0;
        const std::int16_t s = static_cast<std::int16_t>(scaled >= 0 ? scaled + 0.5 : scaled - 0.5);
        w16(static_cast<std::uint16_t>(s));
    }
    if (!os) throw DataError("wav: write to '" + path + "' failed");
}

} // namespace hsc::dataset
