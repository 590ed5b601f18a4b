#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hsc/dataset/label.hpp"
#include "hsc/error.hpp"

namespace hsc::dataset {

// Inverse-frequency class weights from per-class counts:
//   weight_c = N_total / (C * N_c)
// so the frequency-weighted mean of the weights is exactly 1. Every class of
// the chosen mode must be represented.
inline std::vector<double> class_weights_from_counts(const std::vector<std::size_t>& counts,
                                                     ClassMode mode) {
    const std::size_t C = class_count(mode);
    if (counts.size() != C)
        throw DataError("class weights: got " + std::to_string(counts.size()) +
                        " counts for " + std::to_string(C) + " classes");
    std::size_t total = 0;
    for (std::size_t c = 0; c < C; ++c) {
        if (counts[c] == 0)
            throw DataError("class weights: no samples of class " + class_name(mode, c));
        total += counts[c];
    }
    std::vector<double> w(C);
    for (std::size_t c = 0; c < C; ++c)
        w[c] = static_cast<double>(total) / (static_cast<double>(C) * static_cast<double>(counts[c]));
    return w;
}

// Count labels under the given mode; result has class_count(mode) entries.
template <class LabelRange>
std::vector<std::size_t> count_classes(const LabelRange& labels, ClassMode mode) {
    std::vector<std::size_t> counts(class_count(mode), 0);
    for (const ClassLabel& l : labels) ++counts[l.index(mode)];
    return counts;
}

} // namespace hsc::dataset
