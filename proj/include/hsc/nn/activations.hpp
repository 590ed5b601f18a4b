#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hsc/nn/layer.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// Elementwise rectified linear unit. Works on tensors of any rank.
template <class T>
class ReLU final : public Layer<T> {
public:
    explicit ReLU(std::string name) : name_(std::move(name)) {}

    Tensor<T> forward(const Tensor<T>& x, Mode /*mode*/) override {
        mask_.assign(x.numel(), 0);
        Tensor<T> y(x.shape);
        for (std::size_t i = 0; i < x.numel(); ++i) {
            if (x.data[i] > T(0)) {
                y.data[i] = x.data[i];
                mask_[i] = 1;
            } else {
                y.data[i] = T(0);
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        if (gy.numel() != mask_.size())
            throw ShapeError("relu layer '" + name_ + "': gradient has " +
                             std::to_string(gy.numel()) + " elements, expected " +
                             std::to_string(mask_.size()));
        Tensor<T> gx(gy.shape);
        for (std::size_t i = 0; i < gy.numel(); ++i)
            gx.data[i] = mask_[i] ? gy.data[i] : T(0);
        return gx;
    }

    std::string kind() const override { return "relu"; }
    std::string describe() const override { return name_ + ": relu"; }

private:
    std::string name_;
    std::vector<unsigned char> mask_;
};

} // namespace hsc::nn
