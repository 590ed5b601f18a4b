#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hsc/dataset/label.hpp"
#include "hsc/dataset/manifest.hpp"
#include "hsc/error.hpp"

namespace hsc::dataset {

inline constexpr std::uint32_t kSegmentRate = 2000;   // Hz after decimation
inline constexpr std::size_t kSegmentSamples = 10000; // 5 s x 2 kHz

struct Segment {
    std::string source_id;
    std::size_t index = 0; // position within the source recording
    std::vector<double> samples;
    ClassLabel label{};
    bool degenerate = false; // constant signal, zeroed by normalization

    std::string id() const { return source_id + "#" + std::to_string(index); }
};

// Cut a 2 kHz recording into consecutive non-overlapping 5-second windows.
// A trailing remainder shorter than 5 s is discarded; a recording shorter
// than 5 s yields no segments.
inline std::vector<Segment> segment_recording(const AudioRecording& rec) {
    if (rec.sample_rate != kSegmentRate)
        throw DataError("segment: record '" + rec.id + "' is at " +
                        std::to_string(rec.sample_rate) + " Hz; segmentation expects " +
                        std::to_string(kSegmentRate) + " Hz (run the conditioning pipeline first)");
    const std::size_t count = rec.samples.size() / kSegmentSamples;
    std::vector<Segment> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Segment s;
        s.source_id = rec.id;
        s.index = k;
        s.label = rec.label;
        s.samples.assign(rec.samples.begin() + static_cast<std::ptrdiff_t>(k * kSegmentSamples),
                         rec.samples.begin() + static_cast<std::ptrdiff_t>((k + 1) * kSegmentSamples));
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace hsc::dataset
