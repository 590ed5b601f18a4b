#pragma once

#include <cstddef>
#include <vector>

#include "hsc/error.hpp"
#include "hsc/nn/layer.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// Stochastic gradient descent with classical momentum:
//   v <- momentum * v + grad
//   theta <- theta - lr * v
// Velocities persist across steps, one per parameter tensor, starting at zero.
template <class T>
class Sgdm {
public:
    Sgdm(std::vector<Param<T>*> params, T lr, T momentum)
        : params_(std::move(params)), lr_(lr), momentum_(momentum) {
        velocity_.reserve(params_.size());
        for (const Param<T>* p : params_) velocity_.emplace_back(p->value.shape);
    }

    void zero_grad() {
        for (Param<T>* p : params_) p->grad.fill(T(0));
    }

    // Rejects the whole step (no parameter is touched) if any gradient entry
    // is non-finite.
    void step() {
        for (const Param<T>* p : params_)
            if (!p->grad.all_finite())
                throw NumericError("optimizer: non-finite gradient in '" + p->name +
                                   "', step rejected");
        for (std::size_t i = 0; i < params_.size(); ++i) {
            Param<T>& p = *params_[i];
            Tensor<T>& v = velocity_[i];
            for (std::size_t j = 0; j < v.numel(); ++j) {
                v.data[j] = momentum_ * v.data[j] + p.grad.data[j];
                p.value.data[j] -= lr_ * v.data[j];
            }
        }
    }

    T learning_rate() const { return lr_; }
    T momentum() const { return momentum_; }

private:
    std::vector<Param<T>*> params_;
    std::vector<Tensor<T>> velocity_;
    T lr_, momentum_;
};

} // namespace hsc::nn
