#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hsc/nn/init.hpp"
#include "hsc/nn/layer.hpp"
#include "hsc/rng.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// 1D convolution (cross-correlation), stride 1, zero "same" padding so the
// sequence length is preserved. Input (C_in, L, N) -> output (C_out, L, N).
//
// Weight shape: (C_out, C_in, K). Bias shape: (C_out).
// y[co, l, n] = b[co] + sum_{ci, j} w[co, ci, j] * x[ci, l + j - K/2, n]
// with x taken as 0 outside [0, L).
template <class T>
class Conv1d final : public Layer<T> {
public:
    Conv1d(std::string name, std::size_t in_channels, std::size_t out_channels,
           std::size_t kernel, Rng& rng)
        : name_(std::move(name)),
          in_(in_channels),
          out_(out_channels),
          k_(kernel),
          weight_(name_ + ".weight", Tensor<T>({out_channels, in_channels, kernel})),
          bias_(name_ + ".bias", Tensor<T>({out_channels})) {
        if (kernel == 0 || kernel % 2 == 0)
            throw ShapeError("conv layer '" + name_ + "': kernel size must be odd, got " +
                             std::to_string(kernel));
        // fan_in = C_in*K taps feed each output; fan_out = C_out*K taps fan out
        // of each input element.
        init_glorot_uniform(weight_.value, in_channels * kernel, out_channels * kernel, rng);
        bias_.value.fill(T(0));
    }

    Tensor<T> forward(const Tensor<T>& x, Mode /*mode*/) override {
        if (x.rank() != 3 || x.dim(0) != in_)
            throw ShapeError("conv layer '" + name_ + "': expected input (" +
                             std::to_string(in_) + ", L, N), got " + x.shape_str());
        x_ = x;
        const std::size_t L = x.dim(1), N = x.dim(2);
        const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(k_ / 2);
        Tensor<T> y({out_, L, N});
        const T* w = weight_.value.data.data();
        for (std::size_t co = 0; co < out_; ++co) {
            const T b = bias_.value.data[co];
            for (std::size_t l = 0; l < L; ++l) {
                T* yrow = &y.data[(co * L + l) * N];
                for (std::size_t n = 0; n < N; ++n) yrow[n] = b;
                for (std::size_t ci = 0; ci < in_; ++ci) {
                    for (std::size_t j = 0; j < k_; ++j) {
                        const std::ptrdiff_t src =
                            static_cast<std::ptrdiff_t>(l) + static_cast<std::ptrdiff_t>(j) - half;
                        if (src < 0 || src >= static_cast<std::ptrdiff_t>(L)) continue;
                        const T wv = w[(co * in_ + ci) * k_ + j];
                        const T* xrow = &x.data[(ci * L + static_cast<std::size_t>(src)) * N];
                        for (std::size_t n = 0; n < N; ++n) yrow[n] += wv * xrow[n];
                    }
                }
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        if (x_.rank() == 0)
            throw StateError("conv layer '" + name_ + "': backward called before forward");
        const std::size_t L = x_.dim(1), N = x_.dim(2);
        if (gy.rank() != 3 || gy.dim(0) != out_ || gy.dim(1) != L || gy.dim(2) != N)
            throw ShapeError("conv layer '" + name_ + "': gradient shape " + gy.shape_str() +
                             " does not match output (" + std::to_string(out_) + ", " +
                             std::to_string(L) + ", " + std::to_string(N) + ")");
        const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(k_ / 2);
        Tensor<T> gx = x_.zeros_like();
        T* gw = weight_.grad.data.data();
        const T* w = weight_.value.data.data();
        for (std::size_t co = 0; co < out_; ++co) {
            T gb = T(0);
            for (std::size_t l = 0; l < L; ++l) {
                const T* gyrow = &gy.data[(co * L + l) * N];
                for (std::size_t n = 0; n < N; ++n) gb += gyrow[n];
                for (std::size_t ci = 0; ci < in_; ++ci) {
                    for (std::size_t j = 0; j < k_; ++j) {
                        const std::ptrdiff_t src =
                            static_cast<std::ptrdiff_t>(l) + static_cast<std::ptrdiff_t>(j) - half;
                        if (src < 0 || src >= static_cast<std::ptrdiff_t>(L)) continue;
                        const std::size_t s = static_cast<std::size_t>(src);
                        const T* xrow = &x_.data[(ci * L + s) * N];
                        T* gxrow = &gx.data[(ci * L + s) * N];
                        const T wv = w[(co * in_ + ci) * k_ + j];
                        T acc = T(0);
                        for (std::size_t n = 0; n < N; ++n) {
                            acc += gyrow[n] * xrow[n];
                            gxrow[n] += wv * gyrow[n];
                        }
                        gw[(co * in_ + ci) * k_ + j] += acc;
                    }
                }
            }
            bias_.grad.data[co] += gb;
        }
        return gx;
    }

    void collect_params(std::vector<Param<T>*>& out) override {
        out.push_back(&weight_);
        out.push_back(&bias_);
    }
    std::string kind() const override { return "conv1d"; }
    std::string describe() const override {
        return name_ + ": conv1d(" + std::to_string(in_) + " -> " + std::to_string(out_) +
               ", k=" + std::to_string(k_) + ", same)";
    }

    std::size_t in_channels() const { return in_; }
    std::size_t out_channels() const { return out_; }
    std::size_t kernel() const { return k_; }

private:
    std::string name_;
    std::size_t in_, out_, k_;
    Param<T> weight_, bias_;
    Tensor<T> x_;
};

} // namespace hsc::nn
