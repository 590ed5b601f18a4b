#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hsc/nn/depthcat.hpp"
#include "hsc/nn/layer.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// A chain of layers applied in order. Itself a Layer, so chains nest.
template <class T>
class Sequential final : public Layer<T> {
public:
    Sequential() = default;
    explicit Sequential(std::string name) : name_(std::move(name)) {}

    template <class L, class... Args>
    L& emplace(Args&&... args) {
        auto layer = std::make_unique<L>(std::forward<Args>(args)...);
        L& ref = *layer;
        layers_.push_back(std::move(layer));
        return ref;
    }

    void append(std::unique_ptr<Layer<T>> layer) { layers_.push_back(std::move(layer)); }

    Tensor<T> forward(const Tensor<T>& x, Mode mode) override {
        Tensor<T> h = x;
        for (auto& l : layers_) h = l->forward(h, mode);
        return h;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        Tensor<T> g = gy;
        for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
        return g;
    }

    void collect_params(std::vector<Param<T>*>& out) override {
        for (auto& l : layers_) l->collect_params(out);
    }
    void collect_buffers(std::vector<Buffer<T>*>& out) override {
        for (auto& l : layers_) l->collect_buffers(out);
    }

    std::string kind() const override { return "sequential"; }
    std::string describe() const override {
        std::string s = name_.empty() ? "sequential" : name_ + ": sequential";
        s += " {";
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            s += (i ? "; " : " ");
            s += layers_[i]->describe();
        }
        s += " }";
        return s;
    }

    std::size_t size() const { return layers_.size(); }
    Layer<T>& at(std::size_t i) { return *layers_.at(i); }

private:
    std::string name_;
    std::vector<std::unique_ptr<Layer<T>>> layers_;
};

// Runs the same input through several parallel chains and concatenates their
// outputs along the channel axis. Backward splits the incoming gradient per
// branch and sums the branch input-gradients.
template <class T>
class Branches final : public Layer<T> {
public:
    explicit Branches(std::string name) : name_(std::move(name)) {}

    Sequential<T>& add_branch(std::string branch_name) {
        branches_.push_back(std::make_unique<Sequential<T>>(std::move(branch_name)));
        return *branches_.back();
    }

    Tensor<T> forward(const Tensor<T>& x, Mode mode) override {
        std::vector<Tensor<T>> outs;
        outs.reserve(branches_.size());
        channels_.clear();
        for (auto& b : branches_) {
            outs.push_back(b->forward(x, mode));
            channels_.push_back(outs.back().dim(0));
        }
        return depth_concat(outs);
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        auto parts = depth_split(gy, channels_);
        Tensor<T> gx = branches_[0]->backward(parts[0]);
        for (std::size_t i = 1; i < branches_.size(); ++i) {
            Tensor<T> gi = branches_[i]->backward(parts[i]);
            if (!gi.same_shape(gx))
                throw ShapeError("branches '" + name_ + "': branch input-gradient shapes differ");
            for (std::size_t j = 0; j < gx.numel(); ++j) gx.data[j] += gi.data[j];
        }
        return gx;
    }

    void collect_params(std::vector<Param<T>*>& out) override {
        for (auto& b : branches_) b->collect_params(out);
    }
    void collect_buffers(std::vector<Buffer<T>*>& out) override {
        for (auto& b : branches_) b->collect_buffers(out);
    }

    std::size_t branch_count() const { return branches_.size(); }
    Sequential<T>& branch(std::size_t i) { return *branches_.at(i); }

    std::string kind() const override { return "branches"; }
    std::string describe() const override {
        std::string s = name_ + ": branches {";
        for (std::size_t i = 0; i < branches_.size(); ++i) {
            s += (i ? "; " : " ");
            s += branches_[i]->describe();
        }
        s += " }";
        return s;
    }

private:
    std::string name_;
    std::vector<std::unique_ptr<Sequential<T>>> branches_;
    std::vector<std::size_t> channels_;
};

} // namespace hsc::nn
