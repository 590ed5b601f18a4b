#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hsc/nn/layer.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// 1D max pooling over the length axis of a (C, L, N) tensor.
// Window w, stride s, no padding: L_out = floor((L - w) / s) + 1.
// Ties take the first (lowest-index) element of the window, and trailing
// elements that do not fill a complete window are dropped.
template <class T>
class MaxPool1d final : public Layer<T> {
public:
    MaxPool1d(std::string name, std::size_t window = 2, std::size_t stride = 2)
        : name_(std::move(name)), w_(window), s_(stride) {
        if (w_ == 0 || s_ == 0)
            throw ShapeError("maxpool layer '" + name_ + "': window and stride must be positive");
    }

    Tensor<T> forward(const Tensor<T>& x, Mode /*mode*/) override {
        if (x.rank() != 3)
            throw ShapeError("maxpool layer '" + name_ + "': expected rank-3 input (C, L, N), got " +
                             x.shape_str());
        const std::size_t C = x.dim(0), L = x.dim(1), N = x.dim(2);
        if (L < w_)
            throw ShapeError("maxpool layer '" + name_ + "': length " + std::to_string(L) +
                             " is shorter than window " + std::to_string(w_));
        const std::size_t Lo = (L - w_) / s_ + 1;
        in_shape_ = x.shape;
        argmax_.assign(C * Lo * N, 0);
        Tensor<T> y({C, Lo, N});
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t lo = 0; lo < Lo; ++lo) {
                const std::size_t l0 = lo * s_;
                T* yrow = &y.data[(c * Lo + lo) * N];
                std::size_t* arow = &argmax_[(c * Lo + lo) * N];
                const T* x0 = &x.data[(c * L + l0) * N];
                for (std::size_t n = 0; n < N; ++n) {
                    yrow[n] = x0[n];
                    arow[n] = l0;
                }
                for (std::size_t j = 1; j < w_; ++j) {
                    const T* xj = &x.data[(c * L + l0 + j) * N];
                    for (std::size_t n = 0; n < N; ++n) {
                        if (xj[n] > yrow[n]) {
                            yrow[n] = xj[n];
                            arow[n] = l0 + j;
                        }
                    }
                }
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        if (in_shape_.empty())
            throw StateError("maxpool layer '" + name_ + "': backward called before forward");
        const std::size_t C = in_shape_[0], L = in_shape_[1], N = in_shape_[2];
        const std::size_t Lo = (L - w_) / s_ + 1;
        if (gy.rank() != 3 || gy.dim(0) != C || gy.dim(1) != Lo || gy.dim(2) != N)
            throw ShapeError("maxpool layer '" + name_ + "': gradient shape " + gy.shape_str() +
                             " does not match pooled output");
        Tensor<T> gx({C, L, N});
        for (std::size_t c = 0; c < C; ++c)
            for (std::size_t lo = 0; lo < Lo; ++lo) {
                const T* gyrow = &gy.data[(c * Lo + lo) * N];
                const std::size_t* arow = &argmax_[(c * Lo + lo) * N];
                for (std::size_t n = 0; n < N; ++n)
                    gx.data[(c * L + arow[n]) * N + n] += gyrow[n];
            }
        return gx;
    }

    std::string kind() const override { return "maxpool1d"; }
    std::string describe() const override {
        return name_ + ": maxpool1d(w=" + std::to_string(w_) + ", s=" + std::to_string(s_) + ")";
    }

    std::size_t window() const { return w_; }
    std::size_t stride() const { return s_; }

private:
    std::string name_;
    std::size_t w_, s_;
    std::vector<std::size_t> in_shape_;
    std::vector<std::size_t> argmax_;
};

} // namespace hsc::nn
