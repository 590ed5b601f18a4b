#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hsc/error.hpp"

namespace hsc::eval {

// C x C contingency table with rows = true class, columns = predicted class.
struct ConfusionMatrix {
    std::size_t classes = 0;
    std::vector<std::uint64_t> counts; // counts[i*C + j]

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t c) : classes(c), counts(c * c, 0) {}

    std::uint64_t& at(std::size_t t, std::size_t p) { return counts[t * classes + p]; }
    std::uint64_t at(std::size_t t, std::size_t p) const { return counts[t * classes + p]; }

    std::uint64_t row_sum(std::size_t t) const {
        std::uint64_t s = 0;
        for (std::size_t p = 0; p < classes; ++p) s += at(t, p);
        return s;
    }
    std::uint64_t col_sum(std::size_t p) const {
        std::uint64_t s = 0;
        for (std::size_t t = 0; t < classes; ++t) s += at(t, p);
        return s;
    }
    std::uint64_t total() const {
        std::uint64_t s = 0;
        for (std::uint64_t v : counts) s += v;
        return s;
    }
    std::uint64_t trace() const {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < classes; ++i) s += at(i, i);
        return s;
    }
};

// Tally true/predicted index pairs into a C x C matrix.
inline ConfusionMatrix confusion(const std::vector<std::size_t>& truth,
                                 const std::vector<std::size_t>& predicted, std::size_t classes) {
    if (truth.size() != predicted.size())
        throw DataError("confusion: " + std::to_string(truth.size()) + " true labels vs " +
                        std::to_string(predicted.size()) + " predictions");
    if (classes < 2) throw DataError("confusion: need at least 2 classes");
    ConfusionMatrix cm(classes);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= classes)
            throw DataError("confusion: true label " + std::to_string(truth[i]) +
                            " at position " + std::to_string(i) + " out of range");
        if (predicted[i] >= classes)
            throw DataError("confusion: predicted label " + std::to_string(predicted[i]) +
                            " at position " + std::to_string(i) + " out of range");
        ++cm.at(truth[i], predicted[i]);
    }
    return cm;
}

// Collapse a matrix over the twelve group+condition codes into the binary
// Normal(0)/Abnormal(1) view. Code index order is group-major with the
// abnormal code first, so even indices are Abnormal.
inline ConfusionMatrix project_binary(const ConfusionMatrix& cm12) {
    if (cm12.classes != 12)
        throw DataError("confusion: binary projection expects a 12-class matrix, got " +
                        std::to_string(cm12.classes));
    ConfusionMatrix cm2(2);
    for (std::size_t t = 0; t < 12; ++t)
        for (std::size_t p = 0; p < 12; ++p) {
            const std::size_t tb = (t % 2 == 0) ? 1 : 0;
            const std::size_t pb = (p % 2 == 0) ? 1 : 0;
            cm2.at(tb, pb) += cm12.at(t, p);
        }
    return cm2;
}

} // namespace hsc::eval
