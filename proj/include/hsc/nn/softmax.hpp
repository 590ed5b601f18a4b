#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hsc/nn/layer.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// Column-wise softmax over a (C, N) tensor of logits. Each column is shifted
// by its maximum before exponentiation so large logits cannot overflow.
template <class T>
class Softmax final : public Layer<T> {
public:
    explicit Softmax(std::string name) : name_(std::move(name)) {}

    Tensor<T> forward(const Tensor<T>& x, Mode /*mode*/) override {
        if (x.rank() != 2)
            throw ShapeError("softmax layer '" + name_ + "': expected rank-2 input (C, N), got " +
                             x.shape_str());
        if (!x.all_finite())
            throw NumericError("softmax layer '" + name_ + "': non-finite logits");
        const std::size_t C = x.dim(0), N = x.dim(1);
        Tensor<T> y(x.shape);
        for (std::size_t n = 0; n < N; ++n) {
            T mx = x.data[n];
            for (std::size_t c = 1; c < C; ++c) mx = std::max(mx, x.data[c * N + n]);
            T sum = T(0);
            for (std::size_t c = 0; c < C; ++c) {
                const T e = std::exp(x.data[c * N + n] - mx);
                y.data[c * N + n] = e;
                sum += e;
            }
            const T inv = T(1) / sum;
            for (std::size_t c = 0; c < C; ++c) y.data[c * N + n] *= inv;
        }
        y_ = y;
        return y;
    }

    // Jacobian-vector product: dx = p .* (gy - colsum(gy .* p)).
    Tensor<T> backward(const Tensor<T>& gy) override {
        if (y_.rank() == 0)
            throw StateError("softmax layer '" + name_ + "': backward called before forward");
        if (!gy.same_shape(y_))
            throw ShapeError("softmax layer '" + name_ + "': gradient shape " + gy.shape_str() +
                             " does not match output " + y_.shape_str());
        const std::size_t C = y_.dim(0), N = y_.dim(1);
        Tensor<T> gx(y_.shape);
        for (std::size_t n = 0; n < N; ++n) {
            T dot = T(0);
            for (std::size_t c = 0; c < C; ++c) dot += gy.data[c * N + n] * y_.data[c * N + n];
            for (std::size_t c = 0; c < C; ++c)
                gx.data[c * N + n] = y_.data[c * N + n] * (gy.data[c * N + n] - dot);
        }
        return gx;
    }

    std::string kind() const override { return "softmax"; }
    std::string describe() const override { return name_ + ": softmax"; }

private:
    std::string name_;
    Tensor<T> y_;
};

} // namespace hsc::nn
