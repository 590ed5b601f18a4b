#pragma once

#include <cmath>

#include "hsc/rng.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// Glorot-style uniform init: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
template <class T>
void init_glorot_uniform(Tensor<T>& w, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (T& v : w.data) v = static_cast<T>(rng.uniform(-a, a));
}

// Small uniform init used for recurrent weights.
template <class T>
void init_uniform(Tensor<T>& w, double a, Rng& rng) {
    for (T& v : w.data) v = static_cast<T>(rng.uniform(-a, a));
}

} // namespace hsc::nn
