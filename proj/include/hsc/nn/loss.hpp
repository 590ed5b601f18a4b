#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hsc/error.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// Weighted cross-entropy over softmax probabilities.
//
// probs:   (C, N) column-stochastic probabilities
// labels:  N class indices in [0, C)
// weights: per-class multipliers (size C); pass all-ones for the unweighted loss
//
// loss = (1/N) * sum_n weights[y_n] * -log(probs[y_n, n])
//
// Probabilities are clamped to >= floor (1e-30) before the log so a saturated
// softmax yields a large finite loss instead of inf; `clamped` counts how many
// samples hit the floor so callers can warn.
template <class T>
struct LossResult {
    T value{};
    std::size_t clamped = 0;
};

template <class T>
LossResult<T> weighted_cross_entropy(const Tensor<T>& probs,
                                     const std::vector<std::size_t>& labels,
                                     const std::vector<T>& weights,
                                     T floor = T(1e-30)) {
    if (probs.rank() != 2)
        throw ShapeError("cross-entropy: expected probabilities (C, N), got " + probs.shape_str());
    const std::size_t C = probs.dim(0), N = probs.dim(1);
    if (labels.size() != N)
        throw ShapeError("cross-entropy: " + std::to_string(labels.size()) + " labels for batch of " +
                         std::to_string(N));
    if (weights.size() != C)
        throw ShapeError("cross-entropy: " + std::to_string(weights.size()) + " class weights for " +
                         std::to_string(C) + " classes");
    LossResult<T> r;
    double acc = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        const std::size_t y = labels[n];
        if (y >= C)
            throw DataError("cross-entropy: label " + std::to_string(y) + " out of range for " +
                            std::to_string(C) + " classes");
        T p = probs.data[y * N + n];
        if (p < floor) {
            p = floor;
            ++r.clamped;
        }
        acc += static_cast<double>(weights[y]) * -std::log(static_cast<double>(p));
    }
    r.value = static_cast<T>(acc / static_cast<double>(N));
    return r;
}

// Gradient of the weighted cross-entropy with respect to the LOGITS feeding
// the softmax (the fused softmax+CE backward):
//   dlogits[c, n] = weights[y_n] * (probs[c, n] - [c == y_n]) / N
template <class T>
Tensor<T> cross_entropy_logit_grad(const Tensor<T>& probs,
                                   const std::vector<std::size_t>& labels,
                                   const std::vector<T>& weights) {
    const std::size_t C = probs.dim(0), N = probs.dim(1);
    Tensor<T> g(probs.shape);
    const T invN = T(1) / static_cast<T>(N);
    for (std::size_t n = 0; n < N; ++n) {
        const std::size_t y = labels[n];
        const T w = weights[y] * invN;
        for (std::size_t c = 0; c < C; ++c) {
            const T indicator = (c == y) ? T(1) : T(0);
            g.data[c * N + n] = w * (probs.data[c * N + n] - indicator);
        }
    }
    return g;
}

} // namespace hsc::nn
