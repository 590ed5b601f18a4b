#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hsc/error.hpp"

namespace hsc::dsp {

// Standardize a segment to zero mean and unit population standard deviation:
//   x_norm[n] = (x[n] - mean) / sigma,  sigma = sqrt(mean((x - mean)^2))
// A (near-)constant segment (sigma < 1e-12) yields the zero vector with the
// degenerate flag set instead of an error, so batch pipelines keep going and
// callers can drop the segment.
inline std::vector<double> energy_normalize(const std::vector<double>& x,
                                            bool* degenerate = nullptr) {
    if (x.size() < 2) throw DataError("normalize: segment must have at least 2 samples");
    if (degenerate) *degenerate = false;
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) {
        const double d = v - mean;
        var += d * d;
    }
    var /= static_cast<double>(x.size());
    const double sigma = std::sqrt(var);
    if (sigma < 1e-12) {
        if (degenerate) *degenerate = true;
        return std::vector<double>(x.size(), 0.0);
    }
    std::vector<double> y(x.size());
    const double inv = 1.0 / sigma;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = (x[i] - mean) * inv;
    return y;
}

} // namespace hsc::dsp
