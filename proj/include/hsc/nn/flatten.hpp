#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hsc/nn/layer.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// Collapse a (C, L, N) tensor to (C*L, N) feature columns. Because the batch
// axis is innermost, the flattened feature order is channel-major: feature
// index f = c*L + l. No data movement is required.
template <class T>
class Flatten final : public Layer<T> {
public:
    explicit Flatten(std::string name) : name_(std::move(name)) {}

    Tensor<T> forward(const Tensor<T>& x, Mode /*mode*/) override {
        if (x.rank() != 3)
            throw ShapeError("flatten layer '" + name_ + "': expected rank-3 input (C, L, N), got " +
                             x.shape_str());
        in_shape_ = x.shape;
        return x.reshaped({x.dim(0) * x.dim(1), x.dim(2)});
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        if (in_shape_.empty())
            throw StateError("flatten layer '" + name_ + "': backward called before forward");
        if (gy.rank() != 2 || gy.dim(0) != in_shape_[0] * in_shape_[1] || gy.dim(1) != in_shape_[2])
            throw ShapeError("flatten layer '" + name_ + "': gradient shape " + gy.shape_str() +
                             " does not match flattened input");
        return gy.reshaped(in_shape_);
    }

    std::string kind() const override { return "flatten"; }
    std::string describe() const override { return name_ + ": flatten"; }

private:
    std::string name_;
    std::vector<std::size_t> in_shape_;
};

} // namespace hsc::nn
