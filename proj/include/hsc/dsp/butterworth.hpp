#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "hsc/error.hpp"

namespace hsc::dsp {

// One second-order IIR section in direct form II transposed coefficients
// (a0 normalized to 1):
//   y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct Biquad {
    double b0, b1, b2, a1, a2;
};

// A cascade of biquad sections applied causally (forward only) with zero
// initial state.
struct IirFilter {
    std::vector<Biquad> sections;
    double rate_hz = 0.0;

    std::vector<double> apply(const std::vector<double>& x) const {
        std::vector<double> y = x;
        for (const Biquad& s : sections) {
            double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
            for (double& v : y) {
                const double x0 = v;
                const double y0 = s.b0 * x0 + s.b1 * x1 + s.b2 * x2 - s.a1 * y1 - s.a2 * y2;
                x2 = x1;
                x1 = x0;
                y2 = y1;
                y1 = y0;
                v = y0;
            }
        }
        return y;
    }

    // Complex frequency response H(e^{j 2 pi f / rate}).
    std::complex<double> response(double freq_hz) const {
        const double w = 2.0 * std::numbers::pi * freq_hz / rate_hz;
        const std::complex<double> z1 = std::polar(1.0, -w); // z^-1
        const std::complex<double> z2 = z1 * z1;
        std::complex<double> h(1.0, 0.0);
        for (const Biquad& s : sections)
            h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
        return h;
    }

    double magnitude_db(double freq_hz) const {
        return 20.0 * std::log10(std::abs(response(freq_hz)));
    }
};

// Design a causal low-pass Butterworth filter of the given order via the
// analog prototype and the bilinear transform with frequency prewarping, so
// the -3 dB point lands exactly on cutoff_hz. Conjugate pole pairs map to
// biquads; an odd order contributes one first-order section.
inline IirFilter design_butterworth_lowpass(unsigned order, double cutoff_hz, double rate_hz) {
    if (order == 0) throw ConfigError("filter design: order must be at least 1");
    if (!(rate_hz > 0.0)) throw ConfigError("filter design: sample rate must be positive");
    if (!(cutoff_hz > 0.0) || cutoff_hz >= rate_hz / 2.0)
        throw ConfigError("filter design: cutoff " + std::to_string(cutoff_hz) +
                          " Hz must lie in (0, " + std::to_string(rate_hz / 2.0) +
                          ") Hz for a " + std::to_string(rate_hz) + " Hz rate");

    // Prewarped analog cutoff (bilinear transform with T = 2 absorbed).
    const double wc = std::tan(std::numbers::pi * cutoff_hz / rate_hz);

    IirFilter f;
    f.rate_hz = rate_hz;

    // Left-half-plane Butterworth poles, paired (p, conj p). For pair index m,
    // theta walks the upper-left quarter circle.
    const unsigned pairs = order / 2;
    for (unsigned m = 0; m < pairs; ++m) {
        const double theta =
            std::numbers::pi * (2.0 * m + 1.0 + order) / (2.0 * order); // in (pi/2, pi)
        const std::complex<double> p = wc * std::polar(1.0, theta);
        const double re = p.real();
        const double mag2 = std::norm(p);
        // H(s) = |p|^2 / (s^2 - 2 Re(p) s + |p|^2), bilinear s = (z-1)/(z+1).
        const double a0 = 1.0 - 2.0 * re + mag2;
        Biquad s{};
        s.b0 = mag2 / a0;
        s.b1 = 2.0 * mag2 / a0;
        s.b2 = mag2 / a0;
        s.a1 = (2.0 * mag2 - 2.0) / a0;
        s.a2 = (1.0 + 2.0 * re + mag2) / a0;
        f.sections.push_back(s);
    }
    if (order % 2 == 1) {
        // Real pole at -wc: H(s) = wc / (s + wc).
        const double a0 = 1.0 + wc;
        Biquad s{};
        s.b0 = wc / a0;
        s.b1 = wc / a0;
        s.b2 = 0.0;
        s.a1 = (wc - 1.0) / a0;
        s.a2 = 0.0;
        f.sections.push_back(s);
    }
    return f;
}

} // namespace hsc::dsp
