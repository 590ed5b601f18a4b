#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hsc/nn/layer.hpp"
#include "hsc/nn/sequential.hpp"
#include "hsc/nn/softmax.hpp"
#include "hsc/rng.hpp"
#include "hsc/tensor.hpp"

namespace hsc::models {

// A built architecture: a layer chain producing logits, plus the softmax
// head kept separate so training can inject the fused loss gradient directly
// at the logits. The graph owns the RNG that initialized it (dropout layers
// keep drawing from it during training), so builds are reproducible by seed.
template <class T>
class ModelGraph {
public:
    ModelGraph(std::string name, std::size_t num_classes, std::size_t input_features,
               std::uint64_t seed)
        : name_(std::move(name)),
          num_classes_(num_classes),
          input_features_(input_features),
          seed_(seed),
          rng_(std::make_unique<Rng>(seed)),
          body_(name_ + ".body"),
          softmax_(name_ + ".softmax") {}

    ModelGraph(ModelGraph&&) noexcept = default;
    ModelGraph& operator=(ModelGraph&&) noexcept = default;

    const std::string& name() const { return name_; }
    std::size_t num_classes() const { return num_classes_; }
    std::size_t input_features() const { return input_features_; }
    std::uint64_t seed() const { return seed_; }
    Rng& rng() { return *rng_; }
    nn::Sequential<T>& body() { return body_; }
    const nn::Sequential<T>& body() const { return body_; }

    // Accepts (1, F, N) or the cache tensor shape (1, F, 1, N); returns
    // column-stochastic class probabilities (num_classes, N).
    Tensor<T> forward(const Tensor<T>& x, nn::Mode mode) {
        Tensor<T> in = x;
        if (in.rank() == 4 && in.dim(0) == 1 && in.dim(2) == 1)
            in = in.reshaped({std::size_t{1}, in.dim(1), in.dim(3)});
        if (in.rank() != 3 || in.dim(0) != 1 || in.dim(1) != input_features_)
            throw ShapeError("model '" + name_ + "': expected input (1, " +
                             std::to_string(input_features_) + ", N), got " + x.shape_str());
        return softmax_.forward(body_.forward(in, mode), mode);
    }

    // Backpropagate from d(loss)/d(logits) — the caller computed the fused
    // softmax+cross-entropy gradient, so the softmax layer is skipped.
    Tensor<T> backward_from_logits(const Tensor<T>& dlogits) { return body_.backward(dlogits); }

    std::vector<nn::Param<T>*> params() {
        std::vector<nn::Param<T>*> out;
        body_.collect_params(out);
        return out;
    }
    std::vector<nn::Buffer<T>*> buffers() {
        std::vector<nn::Buffer<T>*> out;
        body_.collect_buffers(out);
        return out;
    }
    std::size_t param_count() {
        std::size_t n = 0;
        for (const auto* p : params()) n += p->value.numel();
        return n;
    }

    std::string describe() const { return body_.describe(); }

private:
    std::string name_;
    std::size_t num_classes_, input_features_;
    std::uint64_t seed_;
    std::unique_ptr<Rng> rng_;
    nn::Sequential<T> body_;
    nn::Softmax<T> softmax_;
};

} // namespace hsc::models
