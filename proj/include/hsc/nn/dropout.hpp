#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hsc/nn/layer.hpp"
#include "hsc/rng.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// Inverted dropout: in training mode each element is zeroed with probability
// `rate` and survivors are scaled by 1/(1-rate), so inference is the identity.
// The layer holds a reference to the model RNG so masks are reproducible from
// the run seed.
template <class T>
class Dropout final : public Layer<T> {
public:
    Dropout(std::string name, double rate, Rng& rng)
        : name_(std::move(name)), rate_(rate), rng_(&rng) {
        if (rate < 0.0 || rate >= 1.0)
            throw ConfigError("dropout layer '" + name_ + "': rate must be in [0, 1), got " +
                              std::to_string(rate));
    }

    Tensor<T> forward(const Tensor<T>& x, Mode mode) override {
        if (mode != Mode::train || rate_ == 0.0) {
            mask_.clear();
            return x;
        }
        const T scale = static_cast<T>(1.0 / (1.0 - rate_));
        mask_.assign(x.numel(), T(0));
        Tensor<T> y(x.shape);
        for (std::size_t i = 0; i < x.numel(); ++i) {
            if (rng_->uniform() >= rate_) {
                mask_[i] = scale;
                y.data[i] = x.data[i] * scale;
            }
        }
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        if (mask_.empty()) return gy; // forward ran in inference mode
        if (gy.numel() != mask_.size())
            throw ShapeError("dropout layer '" + name_ + "': gradient has " +
                             std::to_string(gy.numel()) + " elements, expected " +
                             std::to_string(mask_.size()));
        Tensor<T> gx(gy.shape);
        for (std::size_t i = 0; i < gy.numel(); ++i) gx.data[i] = gy.data[i] * mask_[i];
        return gx;
    }

    std::string kind() const override { return "dropout"; }
    std::string describe() const override {
        return name_ + ": dropout(" + std::to_string(rate_) + ")";
    }

    double rate() const { return rate_; }

private:
    std::string name_;
    double rate_;
    Rng* rng_;
    std::vector<T> mask_;
};

} // namespace hsc::nn
