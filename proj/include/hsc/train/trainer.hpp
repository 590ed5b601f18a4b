#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "hsc/error.hpp"
#include "hsc/models/graph.hpp"
#include "hsc/nn/checkpoint.hpp"
#include "hsc/nn/loss.hpp"
#include "hsc/nn/sgdm.hpp"
#include "hsc/rng.hpp"
#include "hsc/tensor.hpp"

namespace hsc::train {

// A set of feature vectors with labels, sample-major: sample i occupies
// data[i*features .. (i+1)*features).
template <class T>
struct Examples {
    std::size_t features = 0;
    std::vector<T> data;
    std::vector<std::size_t> labels;

    std::size_t size() const { return labels.size(); }

    void check() const {
        if (features == 0 || data.size() != features * labels.size())
            throw ShapeError("examples: data size " + std::to_string(data.size()) +
                             " does not match " + std::to_string(labels.size()) + " samples x " +
                             std::to_string(features) + " features");
    }
};

// Gather the selected samples into a (1, features, n) model input.
template <class T>
Tensor<T> gather_batch(const Examples<T>& ex, const std::vector<std::size_t>& idx) {
    const std::size_t F = ex.features, n = idx.size();
    Tensor<T> t({1, F, n});
    for (std::size_t j = 0; j < n; ++j) {
        const T* src = &ex.data[idx[j] * F];
        for (std::size_t f = 0; f < F; ++f) t.data[f * n + j] = src[f];
    }
    return t;
}

// Lowest index wins ties, so predictions are deterministic.
template <class T>
std::vector<std::size_t> argmax_columns(const Tensor<T>& probs) {
    const std::size_t C = probs.dim(0), N = probs.dim(1);
    std::vector<std::size_t> out(N, 0);
    for (std::size_t n = 0; n < N; ++n) {
        T best = probs.data[n];
        for (std::size_t c = 1; c < C; ++c)
            if (probs.data[c * N + n] > best) {
                best = probs.data[c * N + n];
                out[n] = c;
            }
    }
    return out;
}

template <class T>
struct EvalPass {
    double loss = 0.0;
    double accuracy = 0.0; // fraction in [0, 1]
    std::vector<std::size_t> predictions;
};

// Inference-mode pass over a whole example set, batched.
template <class T>
EvalPass<T> evaluate_examples(models::ModelGraph<T>& model, const Examples<T>& ex,
                              const std::vector<T>& class_weights, std::size_t batch_size) {
    ex.check();
    EvalPass<T> out;
    out.predictions.reserve(ex.size());
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < ex.size(); start += batch_size) {
        const std::size_t n = std::min(batch_size, ex.size() - start);
        std::vector<std::size_t> idx(n);
        for (std::size_t j = 0; j < n; ++j) idx[j] = start + j;
        const Tensor<T> x = gather_batch(ex, idx);
        const Tensor<T> probs = model.forward(x, nn::Mode::infer);
        std::vector<std::size_t> batch_labels(ex.labels.begin() + static_cast<std::ptrdiff_t>(start),
                                              ex.labels.begin() + static_cast<std::ptrdiff_t>(start + n));
        const auto loss = nn::weighted_cross_entropy(probs, batch_labels, class_weights);
        loss_sum += static_cast<double>(loss.value) * static_cast<double>(n);
        const auto preds = argmax_columns(probs);
        for (std::size_t j = 0; j < n; ++j) {
            if (preds[j] == batch_labels[j]) ++correct;
            out.predictions.push_back(preds[j]);
        }
    }
    out.loss = loss_sum / static_cast<double>(ex.size());
    out.accuracy = static_cast<double>(correct) / static_cast<double>(ex.size());
    return out;
}

struct TrainOptions {
    std::size_t epochs = 40;
    std::size_t batch_size = 64;
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::uint64_t shuffle_seed = 0;
    std::ostream* progress = nullptr; // epoch lines echoed here as they finish
};

template <class T>
struct TrainResult {
    std::size_t best_epoch = 0;    // 1-based epoch that produced the snapshot
    double best_val_accuracy = -1; // fraction
    std::vector<nn::NamedTensorF32> best_snapshot;
    std::string log_csv;           // epoch,train_loss,train_acc,val_loss,val_acc
    std::size_t clamped_probs = 0; // loss floor hits, for warnings
};

// SGDM training over shuffled mini-batches. Each epoch reshuffles with the
// epoch-stable RNG stream, trailing batches smaller than 2 samples are
// dropped (batch statistics need at least 2), and the best checkpoint by
// validation accuracy is kept (earlier epoch wins ties). A non-finite
// training loss aborts with the epoch/batch coordinates.
template <class T>
TrainResult<T> train_model(models::ModelGraph<T>& model, const Examples<T>& train,
                           const Examples<T>& val, const std::vector<T>& class_weights,
                           const TrainOptions& opt) {
    train.check();
    val.check();
    if (train.features != model.input_features())
        throw ShapeError("train: examples have " + std::to_string(train.features) +
                         " features, model expects " + std::to_string(model.input_features()));
    if (class_weights.size() != model.num_classes())
        throw ShapeError("train: " + std::to_string(class_weights.size()) +
                         " class weights for " + std::to_string(model.num_classes()) + " classes");
    if (opt.batch_size < 2) throw ConfigError("train: batch size must be at least 2");
    if (opt.epochs < 1) throw ConfigError("train: need at least 1 epoch");

    nn::Sgdm<T> optimizer(model.params(), static_cast<T>(opt.learning_rate),
                          static_cast<T>(opt.momentum));
    Rng shuffle_rng(opt.shuffle_seed);

    TrainResult<T> result;
    result.log_csv = "epoch,train_loss,train_acc,val_loss,val_acc\n";

    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 1; epoch <= opt.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t seen = 0, correct = 0, batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += opt.batch_size, ++batch_index) {
            const std::size_t n = std::min(opt.batch_size, order.size() - start);
            if (n < 2) continue; // too small for batch statistics
            std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(start),
                                         order.begin() + static_cast<std::ptrdiff_t>(start + n));
            std::vector<std::size_t> labels(n);
            for (std::size_t j = 0; j < n; ++j) labels[j] = train.labels[idx[j]];

            const Tensor<T> x = gather_batch(train, idx);
            const Tensor<T> probs = model.forward(x, nn::Mode::train);
            const auto loss = nn::weighted_cross_entropy(probs, labels, class_weights);
            result.clamped_probs += loss.clamped;
            if (!std::isfinite(static_cast<double>(loss.value)))
                throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(batch_index));
            loss_sum += static_cast<double>(loss.value) * static_cast<double>(n);
            const auto preds = argmax_columns(probs);
            for (std::size_t j = 0; j < n; ++j)
                if (preds[j] == labels[j]) ++correct;
            seen += n;

            optimizer.zero_grad();
            const Tensor<T> dlogits = nn::cross_entropy_logit_grad(probs, labels, class_weights);
            model.backward_from_logits(dlogits);
            optimizer.step();
        }
        if (seen == 0)
            throw DataError("train: no trainable batches (training split too small for batch size " +
                            std::to_string(opt.batch_size) + ")");

        const double train_loss = loss_sum / static_cast<double>(seen);
        const double train_acc = static_cast<double>(correct) / static_cast<double>(seen);
        const EvalPass<T> v = evaluate_examples(model, val, class_weights, opt.batch_size);

        char line[160];
        std::snprintf(line, sizeof line, "%zu,%.6f,%.4f,%.6f,%.4f\n", epoch, train_loss, train_acc,
                      v.loss, v.accuracy);
        result.log_csv += line;
        if (opt.progress) (*opt.progress) << "epoch " << line << std::flush;

        if (v.accuracy > result.best_val_accuracy) {
            result.best_val_accuracy = v.accuracy;
            result.best_epoch = epoch;
            result.best_snapshot = nn::snapshot_model(model.body());
        }
    }
    return result;
}

} // namespace hsc::train
