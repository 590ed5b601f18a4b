#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "hsc/error.hpp"
#include "hsc/models/graph.hpp"
#include "hsc/nn/activations.hpp"
#include "hsc/nn/batchnorm.hpp"
#include "hsc/nn/conv1d.hpp"
#include "hsc/nn/dense.hpp"
#include "hsc/nn/dropout.hpp"
#include "hsc/nn/flatten.hpp"
#include "hsc/nn/lstm.hpp"
#include "hsc/nn/pool.hpp"
#include "hsc/nn/sequential.hpp"

namespace hsc::models {

inline constexpr std::array<std::size_t, 4> kBranchKernels = {3, 5, 9, 11};
inline constexpr std::size_t kBranchStage1 = 32;
inline constexpr std::size_t kBranchStage2 = 64;
inline constexpr std::size_t kTrunkChannels = 64; // post-concat conv width
inline constexpr std::size_t kLstm1Units = 600;
inline constexpr std::size_t kLstm2Units = 100;
inline constexpr std::array<std::size_t, 4> kCnn1dChannels = {22, 32, 64, 86};
inline constexpr std::array<std::size_t, 6> kMlpWidths = {512, 256, 128, 64, 32, 16};
inline constexpr double kMlpDropout = 0.2;

inline std::size_t pooled_len(std::size_t len) { return (len - 2) / 2 + 1; }

namespace detail {

// Shared convolutional front end: four parallel branches over the
// single-channel spectrum — conv(32,k) > BN > ReLU > conv(64,k) > BN > ReLU
// for k in {3,5,9,11} — joined by depth concatenation (4 x 64 = 256 channels),
// then a 3-wide conv down to 64 channels and a 2x max pool. Parameters are
// drawn from the graph RNG in this fixed order, so two architectures sharing
// this trunk and a seed start from identical trunk weights.
template <class T>
void add_trunk(ModelGraph<T>& g) {
    auto& s = g.body();
    auto& branches = s.template emplace<nn::Branches<T>>("branches");
    for (std::size_t b = 0; b < kBranchKernels.size(); ++b) {
        const std::size_t k = kBranchKernels[b];
        const std::string prefix = "branch" + std::to_string(b);
        auto& chain = branches.add_branch(prefix);
        chain.template emplace<nn::Conv1d<T>>(prefix + ".conv1", 1, kBranchStage1, k, g.rng());
        chain.template emplace<nn::BatchNorm1d<T>>(prefix + ".bn1", kBranchStage1);
        chain.template emplace<nn::ReLU<T>>(prefix + ".relu1");
        chain.template emplace<nn::Conv1d<T>>(prefix + ".conv2", kBranchStage1, kBranchStage2, k,
                                              g.rng());
        chain.template emplace<nn::BatchNorm1d<T>>(prefix + ".bn2", kBranchStage2);
        chain.template emplace<nn::ReLU<T>>(prefix + ".relu2");
    }
    s.template emplace<nn::Conv1d<T>>("trunk.conv", kBranchKernels.size() * kBranchStage2,
                                      kTrunkChannels, 3, g.rng());
    s.template emplace<nn::MaxPool1d<T>>("trunk.pool", 2, 2);
}

inline void check_classes(std::size_t num_classes, const char* model) {
    if (num_classes < 2)
        throw ConfigError(std::string(model) + ": need at least 2 classes, got " +
                          std::to_string(num_classes));
}

} // namespace detail

// Multi-branch convolutional classifier: trunk then flatten > dense > softmax.
template <class T>
ModelGraph<T> build_mbdcn(std::size_t input_features, std::size_t num_classes,
                          std::uint64_t seed) {
    detail::check_classes(num_classes, "mbdcn");
    if (input_features < 16)
        throw ConfigError("mbdcn: input feature length " + std::to_string(input_features) +
                          " is too short for the pooling stage (need at least 16)");
    ModelGraph<T> g("mbdcn", num_classes, input_features, seed);
    detail::add_trunk(g);
    const std::size_t flat = kTrunkChannels * pooled_len(input_features);
    g.body().template emplace<nn::Flatten<T>>("head.flatten");
    g.body().template emplace<nn::Dense<T>>("head.dense", flat, num_classes, g.rng());
    return g;
}

// Hybrid classifier: the same trunk feeding stacked LSTMs — pooled spectral
// positions are the time steps, trunk channels the per-step features — then
// dense > softmax on the final hidden state.
template <class T>
ModelGraph<T> build_lscn(std::size_t input_features, std::size_t num_classes,
                         std::uint64_t seed) {
    detail::check_classes(num_classes, "lscn");
    if (input_features < 16)
        throw ConfigError("lscn: input feature length " + std::to_string(input_features) +
                          " is too short for the pooling stage (need at least 16)");
    ModelGraph<T> g("lscn", num_classes, input_features, seed);
    detail::add_trunk(g);
    g.body().template emplace<nn::Lstm<T>>("lstm1", kTrunkChannels, kLstm1Units, true, g.rng());
    g.body().template emplace<nn::Lstm<T>>("lstm2", kLstm1Units, kLstm2Units, false, g.rng());
    g.body().template emplace<nn::Dense<T>>("head.dense", kLstm2Units, num_classes, g.rng());
    return g;
}

// Plain four-stage convolutional baseline: [conv k=3 > ReLU > pool] with
// channel widths 22/32/64/86, then dense > softmax.
template <class T>
ModelGraph<T> build_cnn1d(std::size_t input_features, std::size_t num_classes,
                          std::uint64_t seed) {
    detail::check_classes(num_classes, "cnn1d");
    if (input_features < 32)
        throw ConfigError("cnn1d: input feature length " + std::to_string(input_features) +
                          " is too short for four pooling stages (need at least 32)");
    ModelGraph<T> g("cnn1d", num_classes, input_features, seed);
    std::size_t in_ch = 1, len = input_features;
    for (std::size_t i = 0; i < kCnn1dChannels.size(); ++i) {
        const std::string prefix = "stage" + std::to_string(i + 1);
        g.body().template emplace<nn::Conv1d<T>>(prefix + ".conv", in_ch, kCnn1dChannels[i], 3,
                                                 g.rng());
        g.body().template emplace<nn::ReLU<T>>(prefix + ".relu");
        g.body().template emplace<nn::MaxPool1d<T>>(prefix + ".pool", 2, 2);
        in_ch = kCnn1dChannels[i];
        len = pooled_len(len);
    }
    g.body().template emplace<nn::Flatten<T>>("head.flatten");
    g.body().template emplace<nn::Dense<T>>("head.dense", in_ch * len, num_classes, g.rng());
    return g;
}

// Dense baseline: six dense+ReLU+dropout(0.2) stages with halving widths
// 512..16, then dense > softmax.
template <class T>
ModelGraph<T> build_mlp(std::size_t input_features, std::size_t num_classes, std::uint64_t seed) {
    detail::check_classes(num_classes, "mlp");
    if (input_features < 1) throw ConfigError("mlp: input feature length must be positive");
    ModelGraph<T> g("mlp", num_classes, input_features, seed);
    g.body().template emplace<nn::Flatten<T>>("flatten");
    std::size_t in = input_features;
    for (std::size_t i = 0; i < kMlpWidths.size(); ++i) {
        const std::string prefix = "fc" + std::to_string(i + 1);
        g.body().template emplace<nn::Dense<T>>(prefix + ".dense", in, kMlpWidths[i], g.rng());
        g.body().template emplace<nn::ReLU<T>>(prefix + ".relu");
        g.body().template emplace<nn::Dropout<T>>(prefix + ".dropout", kMlpDropout, g.rng());
        in = kMlpWidths[i];
    }
    g.body().template emplace<nn::Dense<T>>("head.dense", in, num_classes, g.rng());
    return g;
}

// Dispatch by model name as used by the command line.
template <class T>
ModelGraph<T> build_model(const std::string& name, std::size_t input_features,
                          std::size_t num_classes, std::uint64_t seed) {
    if (name == "mbdcn") return build_mbdcn<T>(input_features, num_classes, seed);
    if (name == "lscn") return build_lscn<T>(input_features, num_classes, seed);
    if (name == "cnn1d") return build_cnn1d<T>(input_features, num_classes, seed);
    if (name == "mlp") return build_mlp<T>(input_features, num_classes, seed);
    throw ConfigError("unknown model '" + name + "' (expected mbdcn, lscn, cnn1d, or mlp)");
}

} // namespace hsc::models
