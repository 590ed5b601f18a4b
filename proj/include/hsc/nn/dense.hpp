#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hsc/nn/gemm.hpp"
#include "hsc/nn/init.hpp"
#include "hsc/nn/layer.hpp"
#include "hsc/rng.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// Fully connected layer over column-major batches: input (F, N) -> output (U, N),
// y = W x + b with W (U, F) and b (U).
template <class T>
class Dense final : public Layer<T> {
public:
    Dense(std::string name, std::size_t in_features, std::size_t out_features, Rng& rng)
        : name_(std::move(name)),
          in_(in_features),
          out_(out_features),
          weight_(name_ + ".weight", Tensor<T>({out_features, in_features})),
          bias_(name_ + ".bias", Tensor<T>({out_features})) {
        init_glorot_uniform(weight_.value, in_features, out_features, rng);
        bias_.value.fill(T(0));
    }

    Tensor<T> forward(const Tensor<T>& x, Mode /*mode*/) override {
        if (x.rank() != 2 || x.dim(0) != in_)
            throw ShapeError("dense layer '" + name_ + "': expected input (" +
                             std::to_string(in_) + ", N), got " + x.shape_str());
        x_ = x;
        const std::size_t N = x.dim(1);
        Tensor<T> y({out_, N});
        for (std::size_t u = 0; u < out_; ++u) {
            const T b = bias_.value.data[u];
            T* yrow = &y.data[u * N];
            for (std::size_t n = 0; n < N; ++n) yrow[n] = b;
        }
        detail::gemm_accum(y.data.data(), weight_.value.data.data(), x.data.data(), out_, in_, N);
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        if (x_.rank() == 0)
            throw StateError("dense layer '" + name_ + "': backward called before forward");
        const std::size_t N = x_.dim(1);
        if (gy.rank() != 2 || gy.dim(0) != out_ || gy.dim(1) != N)
            throw ShapeError("dense layer '" + name_ + "': gradient shape " + gy.shape_str() +
                             " does not match output (" + std::to_string(out_) + ", " +
                             std::to_string(N) + ")");
        // dW += gy . x^T ; db += rowsum(gy) ; dx = W^T . gy
        detail::gemm_abt_accum(weight_.grad.data.data(), gy.data.data(), x_.data.data(), out_, in_, N);
        for (std::size_t u = 0; u < out_; ++u) {
            const T* gyrow = &gy.data[u * N];
            T acc = T(0);
            for (std::size_t n = 0; n < N; ++n) acc += gyrow[n];
            bias_.grad.data[u] += acc;
        }
        Tensor<T> gx({in_, N});
        detail::gemm_at_accum(gx.data.data(), weight_.value.data.data(), gy.data.data(), out_, in_, N);
        return gx;
    }

    void collect_params(std::vector<Param<T>*>& out) override {
        out.push_back(&weight_);
        out.push_back(&bias_);
    }
    std::string kind() const override { return "dense"; }
    std::string describe() const override {
        return name_ + ": dense(" + std::to_string(in_) + " -> " + std::to_string(out_) + ")";
    }

    std::size_t in_features() const { return in_; }
    std::size_t out_features() const { return out_; }

private:
    std::string name_;
    std::size_t in_, out_;
    Param<T> weight_, bias_;
    Tensor<T> x_;
};

} // namespace hsc::nn
