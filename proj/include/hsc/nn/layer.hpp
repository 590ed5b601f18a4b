#pragma once

#include <string>
#include <vector>

#include "hsc/tensor.hpp"

namespace hsc::nn {

enum class Mode { train, infer };

// Learnable parameter with its gradient accumulator.
template <class T>
struct Param {
    std::string name;
    Tensor<T> value;
    Tensor<T> grad;

    Param() = default;
    Param(std::string n, Tensor<T> v) : name(std::move(n)), value(std::move(v)) {
        grad = value.zeros_like();
    }
};

// Persistent non-learnable state (batch-norm running statistics). Saved in
// checkpoints, untouched by the optimizer.
template <class T>
struct Buffer {
    std::string name;
    Tensor<T> value;
};

// One step of a feed-forward chain. Layers cache whatever the matching
// backward pass needs; backward() must follow a forward() call.
template <class T>
class Layer {
public:
    virtual ~Layer() = default;

    virtual Tensor<T> forward(const Tensor<T>& x, Mode mode) = 0;

    // Takes d(loss)/d(output), accumulates into parameter grads, and returns
    // d(loss)/d(input).
    virtual Tensor<T> backward(const Tensor<T>& grad_out) = 0;

    virtual void collect_params(std::vector<Param<T>*>& out) { (void)out; }
    virtual void collect_buffers(std::vector<Buffer<T>*>& out) { (void)out; }

    virtual std::string kind() const = 0;
    // Short structural description used by the graph descriptor.
    virtual std::string describe() const { return kind(); }
};

} // namespace hsc::nn
