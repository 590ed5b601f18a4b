#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "hsc/error.hpp"

namespace hsc::dsp {

// Polyphase windowed-sinc resampler for rational rate changes L/M (reduced by
// the gcd of the rates). The interpolation kernel is a Blackman-windowed sinc
// with zero crossings at input-sample spacing, i.e. it is purely an
// interpolator: it does NOT band-limit below the input Nyquist, so callers
// downsampling must low-pass the signal first (the conditioning pipeline runs
// its Butterworth filter before this step). Each polyphase branch is
// normalized to unit DC gain so constants pass through exactly.
//
// Output sample m is the interpolated value at input time m*M/L; the output
// has floor(n_in * to_rate / from_rate) samples.
inline std::vector<double> resample(const std::vector<double>& x, std::uint64_t from_rate,
                                    std::uint64_t to_rate, std::size_t taps_per_phase = 64) {
    if (from_rate == 0 || to_rate == 0)
        throw ConfigError("resample: rates must be positive");
    if (to_rate >= from_rate)
        throw ConfigError("resample: target rate " + std::to_string(to_rate) +
                          " Hz must be below source rate " + std::to_string(from_rate) + " Hz");
    if (taps_per_phase < 2) throw ConfigError("resample: need at least 2 taps per phase");

    const std::uint64_t g = std::gcd(from_rate, to_rate);
    const std::size_t L = static_cast<std::size_t>(to_rate / g);   // upsample factor
    const std::size_t M = static_cast<std::size_t>(from_rate / g); // downsample factor

    const std::size_t n_in = x.size();
    const std::size_t n_out =
        static_cast<std::size_t>((static_cast<std::uint64_t>(n_in) * to_rate) / from_rate);
    if (n_out == 0) return {};

    // Kernel over the upsampled grid: length P*L + 1 keeps the center on a
    // grid point, so phase 0 reduces to the identity.
    const std::size_t len = taps_per_phase * L + 1;
    const std::size_t c = (len - 1) / 2;
    std::vector<double> h(len);
    for (std::size_t i = 0; i < len; ++i) {
        const double t = (static_cast<double>(i) - static_cast<double>(c)) / static_cast<double>(L);
        const double sinc = t == 0.0 ? 1.0 : std::sin(std::numbers::pi * t) / (std::numbers::pi * t);
        const double u = static_cast<double>(i) / static_cast<double>(len - 1);
        const double window = 0.42 - 0.5 * std::cos(2.0 * std::numbers::pi * u) +
                              0.08 * std::cos(4.0 * std::numbers::pi * u);
        h[i] = sinc * window;
    }

    // Split into phases and normalize each phase to unit sum.
    std::vector<std::vector<double>> phase(L);
    for (std::size_t r = 0; r < L; ++r) {
        double sum = 0.0;
        for (std::size_t i = r; i < len; i += L) {
            phase[r].push_back(h[i]);
            sum += h[i];
        }
        if (sum == 0.0) throw NumericError("resample: degenerate polyphase branch");
        for (double& v : phase[r]) v /= sum;
    }

    // Out-of-range taps clamp to the first/last sample (edge hold), so a
    // constant signal stays exactly constant through the boundaries.
    std::vector<double> y(n_out, 0.0);
    const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(n_in) - 1;
    for (std::size_t m = 0; m < n_out; ++m) {
        const std::size_t n_up = m * M + c; // center-compensated upsampled index
        const std::size_t r = n_up % L;
        const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(n_up / L);
        const std::vector<double>& taps = phase[r];
        double acc = 0.0;
        for (std::size_t j = 0; j < taps.size(); ++j) {
            std::ptrdiff_t src = base - static_cast<std::ptrdiff_t>(j);
            if (src < 0) src = 0;
            if (src > last) src = last;
            acc += taps[j] * x[static_cast<std::size_t>(src)];
        }
        y[m] = acc;
    }
    return y;
}

} // namespace hsc::dsp
