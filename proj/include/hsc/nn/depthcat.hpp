#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "hsc/tensor.hpp"

namespace hsc::nn {

// Concatenate rank-3 tensors (C_i, L, N) along the channel axis. All inputs
// must share L and N. Output is (sum C_i, L, N) with input order preserved.
template <class T>
Tensor<T> depth_concat(const std::vector<Tensor<T>>& xs) {
    if (xs.empty()) throw ShapeError("depth_concat: no inputs");
    const std::size_t L = xs[0].dim(1), N = xs[0].dim(2);
    std::size_t C = 0;
    for (const auto& x : xs) {
        if (x.rank() != 3 || x.dim(1) != L || x.dim(2) != N)
            throw ShapeError("depth_concat: input " + x.shape_str() +
                             " does not match (*, " + std::to_string(L) + ", " +
                             std::to_string(N) + ")");
        C += x.dim(0);
    }
    Tensor<T> y({C, L, N});
    std::size_t off = 0;
    for (const auto& x : xs) {
        std::copy(x.data.begin(), x.data.end(), y.data.begin() + static_cast<std::ptrdiff_t>(off));
        off += x.numel();
    }
    return y;
}

// Split a gradient of shape (sum C_i, L, N) back into per-input slices.
template <class T>
std::vector<Tensor<T>> depth_split(const Tensor<T>& gy, const std::vector<std::size_t>& channels) {
    if (gy.rank() != 3) throw ShapeError("depth_split: expected rank-3 tensor, got " + gy.shape_str());
    std::size_t total = 0;
    for (std::size_t c : channels) total += c;
    if (gy.dim(0) != total)
        throw ShapeError("depth_split: tensor has " + std::to_string(gy.dim(0)) +
                         " channels, slices sum to " + std::to_string(total));
    const std::size_t L = gy.dim(1), N = gy.dim(2);
    std::vector<Tensor<T>> out;
    out.reserve(channels.size());
    std::size_t off = 0;
    for (std::size_t c : channels) {
        Tensor<T> part({c, L, N});
        std::copy(gy.data.begin() + static_cast<std::ptrdiff_t>(off),
                  gy.data.begin() + static_cast<std::ptrdiff_t>(off + part.numel()),
                  part.data.begin());
        off += part.numel();
        out.push_back(std::move(part));
    }
    return out;
}

} // namespace hsc::nn
