#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "hsc/dataset/label.hpp"
#include "hsc/dataset/wav.hpp"
#include "hsc/dsp/butterworth.hpp"
#include "hsc/error.hpp"
#include "hsc/rng.hpp"

namespace hsc::synth {

// A two-class benchmark corpus that is trivially separable in spectrum space:
// class "tone" is a handful of sinusoids (spiky spectrum), class "noise" is
// low-passed white noise (smooth broad spectrum). Both are emitted at the
// segment rate so the conditioning pipeline passes them through unchanged.
struct SynthConfig {
    std::size_t segments = 400;   // total; half per class
    std::uint64_t seed = 7;
    std::uint32_t sample_rate = 2000;
    std::size_t samples_per_record = 10000; // exactly one 5 s segment each
};

inline std::vector<double> tone_signal(std::size_t n, std::uint32_t rate, Rng& rng) {
    const double two_pi = 6.283185307179586476925286766559;
    std::vector<double> x(n, 0.0);
    const std::size_t parts = 3;
    for (std::size_t p = 0; p < parts; ++p) {
        const double f = rng.uniform(50.0, 400.0);
        const double a = rng.uniform(0.5, 1.0);
        const double phase = rng.uniform(0.0, two_pi);
        const double w = two_pi * f / static_cast<double>(rate);
        for (std::size_t i = 0; i < n; ++i)
            x[i] += a * std::sin(w * static_cast<double>(i) + phase);
    }
    for (std::size_t i = 0; i < n; ++i) x[i] += 0.01 * rng.normal();
    return x;
}

inline std::vector<double> noise_signal(std::size_t n, std::uint32_t rate, Rng& rng) {
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal();
    const dsp::IirFilter lp =
        dsp::design_butterworth_lowpass(4, 0.2 * static_cast<double>(rate), rate);
    return lp.apply(x);
}

struct SynthSummary {
    std::size_t records = 0;
    std::string manifest_path;
};

// Write <dir>/<id>.wav for every record plus <dir>/manifest.csv. Tones are
// labeled group A / Abnormal ("AA"), noise group A / Normal ("AN").
inline SynthSummary generate_corpus(const std::string& dir, const SynthConfig& cfg) {
    if (cfg.segments < 2 || cfg.segments % 2 != 0)
        throw ConfigError("synth: segment count must be even and at least 2");
    if (cfg.samples_per_record < 2) throw ConfigError("synth: records too short");
    Rng rng(cfg.seed);
    const std::size_t per_class = cfg.segments / 2;
    std::string manifest = "record_id,group,condition\n";

    auto emit = [&](const std::string& stem, std::size_t k, bool tone) {
        char name[32];
        std::snprintf(name, sizeof name, "%s%04zu", stem.c_str(), k);
        const std::vector<double> x = tone ? tone_signal(cfg.samples_per_record, cfg.sample_rate, rng)
                                           : noise_signal(cfg.samples_per_record, cfg.sample_rate, rng);
        // Keep PCM16 quantization comfortably inside [-1, 1].
        double peak = 1e-12;
        for (double v : x) peak = std::max(peak, std::abs(v));
        std::vector<double> scaled(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = 0.9 * x[i] / peak;
        dataset::write_wav_pcm16(dir + "/" + name + ".wav", scaled, cfg.sample_rate);
        manifest += std::string(name) + ",A," + (tone ? "Abnormal" : "Normal") + "\n";
    };

    for (std::size_t k = 0; k < per_class; ++k) emit("tone", k, true);
    for (std::size_t k = 0; k < per_class; ++k) emit("noise", k, false);

    SynthSummary s;
    s.records = cfg.segments;
    s.manifest_path = dir + "/manifest.csv";
    std::ofstream os(s.manifest_path, std::ios::binary);
    if (!os) throw DataError("synth: cannot open '" + s.manifest_path + "' for writing");
    os << manifest;
    if (!os) throw DataError("synth: write to '" + s.manifest_path + "' failed");
    return s;
}

} // namespace hsc::synth
