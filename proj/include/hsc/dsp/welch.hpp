#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "hsc/dsp/fft.hpp"
#include "hsc/error.hpp"

namespace hsc::dsp {

struct WelchConfig {
    std::size_t window_len = 256;
    std::size_t overlap = 128;
    std::size_t fft_len = 256;

    void validate() const {
        if (window_len == 0) throw ConfigError("welch: window length must be positive");
        if (overlap >= window_len)
            throw ConfigError("welch: overlap " + std::to_string(overlap) +
                              " must be smaller than window length " + std::to_string(window_len));
        if (window_len > fft_len)
            throw ConfigError("welch: window length " + std::to_string(window_len) +
                              " exceeds transform length " + std::to_string(fft_len));
    }

    std::size_t bins() const { return fft_len / 2 + 1; }
    std::size_t step() const { return window_len - overlap; }
    std::size_t frames(std::size_t signal_len) const {
        return (signal_len - window_len) / step() + 1;
    }
};

struct PowerSpectrum {
    std::vector<double> psd; // one-sided density, fft_len/2 + 1 bins
    double bin_width_hz = 0.0;
};

// Symmetric Hamming window: w[i] = 0.54 - 0.46 cos(2 pi i / (n-1)).
inline std::vector<double> hamming_window(std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(n - 1));
    return w;
}

// Welch power-spectral-density estimate: split the segment into overlapping
// frames, window each with a Hamming window, take |FFT|^2 scaled by
// 1 / (rate * sum(w^2)), and average across frames. One-sided output: interior
// bins are doubled; DC and Nyquist are not. Trailing samples that do not fill
// a whole frame are ignored.
inline PowerSpectrum welch_psd(const std::vector<double>& segment, double rate_hz,
                               const WelchConfig& cfg) {
    cfg.validate();
    if (!(rate_hz > 0.0)) throw ConfigError("welch: sample rate must be positive");
    if (segment.size() < cfg.window_len)
        throw DataError("welch: segment of " + std::to_string(segment.size()) +
                        " samples is shorter than the " + std::to_string(cfg.window_len) +
                        "-sample window");

    const std::vector<double> w = hamming_window(cfg.window_len);
    double w2 = 0.0;
    for (double v : w) w2 += v * v;
    const double scale = 1.0 / (rate_hz * w2);

    const std::size_t K = cfg.frames(segment.size());
    const std::size_t F = cfg.bins();
    std::vector<double> acc(F, 0.0);
    std::vector<double> frame(cfg.window_len);
    for (std::size_t k = 0; k < K; ++k) {
        const std::size_t off = k * cfg.step();
        for (std::size_t i = 0; i < cfg.window_len; ++i) frame[i] = segment[off + i] * w[i];
        const auto spec = fft_real(frame, cfg.fft_len);
        for (std::size_t f = 0; f < F; ++f) acc[f] += std::norm(spec[f]) * scale;
    }

    PowerSpectrum out;
    out.psd.resize(F);
    const double invK = 1.0 / static_cast<double>(K);
    for (std::size_t f = 0; f < F; ++f) {
        double v = acc[f] * invK;
        const bool interior = f != 0 && !(cfg.fft_len % 2 == 0 && f == F - 1);
        if (interior) v *= 2.0;
        out.psd[f] = v;
    }
    out.bin_width_hz = rate_hz / static_cast<double>(cfg.fft_len);
    return out;
}

} // namespace hsc::dsp
