#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hsc/nn/layer.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// Per-channel batch normalization over a (C, L, N) tensor: statistics are
// taken across the L*N elements of each channel. Uses biased variance for
// the batch statistics, eps = 1e-5, and running-stat momentum 0.1:
//   running <- (1 - momentum) * running + momentum * batch_stat
// The moving averages are seeded with the first training batch's statistics
// rather than an arbitrary (0, 1) prior: when the true activation scale is far
// from 1 (spectral-density inputs sit near 1e-3), a fixed prior would need
// hundreds of updates to decay and inference would be mis-scaled for most of a
// short training run. The seeding state is carried in a `batches_seen` buffer
// so it survives checkpoint round trips. In inference mode the running
// statistics are used instead of batch statistics.
template <class T>
class BatchNorm1d final : public Layer<T> {
public:
    BatchNorm1d(std::string name, std::size_t channels, T momentum = T(0.1), T eps = T(1e-5))
        : name_(std::move(name)),
          c_(channels),
          momentum_(momentum),
          eps_(eps),
          gamma_(name_ + ".gamma", Tensor<T>({channels})),
          beta_(name_ + ".beta", Tensor<T>({channels})),
          running_mean_(name_ + ".running_mean", Tensor<T>({channels})),
          running_var_(name_ + ".running_var", Tensor<T>({channels})),
          batches_seen_(name_ + ".batches_seen", Tensor<T>({1})) {
        gamma_.value.fill(T(1));
        beta_.value.fill(T(0));
        running_mean_.value.fill(T(0));
        running_var_.value.fill(T(1));
        batches_seen_.value.fill(T(0));
    }

    Tensor<T> forward(const Tensor<T>& x, Mode mode) override {
        if (x.rank() != 3 || x.dim(0) != c_)
            throw ShapeError("batchnorm layer '" + name_ + "': expected input (" +
                             std::to_string(c_) + ", L, N), got " + x.shape_str());
        if (mode == Mode::train && x.dim(2) < 2)
            throw ShapeError("batchnorm layer '" + name_ +
                             "': training requires a batch of at least 2, got " +
                             std::to_string(x.dim(2)));
        const std::size_t L = x.dim(1), N = x.dim(2), M = L * N;
        Tensor<T> y(x.shape);
        if (mode == Mode::train) {
            mean_ = Tensor<T>({c_});
            inv_std_ = Tensor<T>({c_});
            xhat_ = Tensor<T>(x.shape);
            const bool seed = batches_seen_.value.data[0] == T(0);
            for (std::size_t c = 0; c < c_; ++c) {
                const T* xc = &x.data[c * M];
                T mean = T(0);
                for (std::size_t i = 0; i < M; ++i) mean += xc[i];
                mean /= static_cast<T>(M);
                T var = T(0);
                for (std::size_t i = 0; i < M; ++i) {
                    const T d = xc[i] - mean;
                    var += d * d;
                }
                var /= static_cast<T>(M);
                const T inv = T(1) / std::sqrt(var + eps_);
                mean_.data[c] = mean;
                inv_std_.data[c] = inv;
                if (seed) {
                    running_mean_.value.data[c] = mean;
                    running_var_.value.data[c] = var;
                } else {
                    running_mean_.value.data[c] =
                        (T(1) - momentum_) * running_mean_.value.data[c] + momentum_ * mean;
                    running_var_.value.data[c] =
                        (T(1) - momentum_) * running_var_.value.data[c] + momentum_ * var;
                }
                const T g = gamma_.value.data[c], b = beta_.value.data[c];
                T* xh = &xhat_.data[c * M];
                T* yc = &y.data[c * M];
                for (std::size_t i = 0; i < M; ++i) {
                    xh[i] = (xc[i] - mean) * inv;
                    yc[i] = g * xh[i] + b;
                }
            }
            batches_seen_.value.data[0] += T(1);
        } else {
            for (std::size_t c = 0; c < c_; ++c) {
                const T* xc = &x.data[c * M];
                const T mean = running_mean_.value.data[c];
                const T inv = T(1) / std::sqrt(running_var_.value.data[c] + eps_);
                const T g = gamma_.value.data[c], b = beta_.value.data[c];
                T* yc = &y.data[c * M];
                for (std::size_t i = 0; i < M; ++i) yc[i] = g * (xc[i] - mean) * inv + b;
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        if (xhat_.rank() == 0)
            throw StateError("batchnorm layer '" + name_ +
                             "': backward called before a training-mode forward");
        if (!gy.same_shape(xhat_))
            throw ShapeError("batchnorm layer '" + name_ + "': gradient shape " + gy.shape_str() +
                             " does not match cached input " + xhat_.shape_str());
        const std::size_t M = xhat_.dim(1) * xhat_.dim(2);
        Tensor<T> gx(xhat_.shape);
        for (std::size_t c = 0; c < c_; ++c) {
            const T* gyc = &gy.data[c * M];
            const T* xh = &xhat_.data[c * M];
            T sum_gy = T(0), sum_gy_xh = T(0);
            for (std::size_t i = 0; i < M; ++i) {
                sum_gy += gyc[i];
                sum_gy_xh += gyc[i] * xh[i];
            }
            gamma_.grad.data[c] += sum_gy_xh;
            beta_.grad.data[c] += sum_gy;
            const T g_inv = gamma_.value.data[c] * inv_std_.data[c];
            const T mean_gy = sum_gy / static_cast<T>(M);
            const T mean_gy_xh = sum_gy_xh / static_cast<T>(M);
            T* gxc = &gx.data[c * M];
            for (std::size_t i = 0; i < M; ++i)
                gxc[i] = g_inv * (gyc[i] - mean_gy - xh[i] * mean_gy_xh);
        }
        return gx;
    }

    void collect_params(std::vector<Param<T>*>& out) override {
        out.push_back(&gamma_);
        out.push_back(&beta_);
    }
    void collect_buffers(std::vector<Buffer<T>*>& out) override {
        out.push_back(&running_mean_);
        out.push_back(&running_var_);
        out.push_back(&batches_seen_);
    }
    std::string kind() const override { return "batchnorm1d"; }
    std::string describe() const override {
        return name_ + ": batchnorm1d(" + std::to_string(c_) + ")";
    }

    std::size_t channels() const { return c_; }

private:
    std::string name_;
    std::size_t c_;
    T momentum_, eps_;
    Param<T> gamma_, beta_;
    Buffer<T> running_mean_, running_var_, batches_seen_;
    Tensor<T> mean_, inv_std_, xhat_;
};

} // namespace hsc::nn
