#pragma once

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "hsc/error.hpp"
#include "hsc/models/graph.hpp"
#include "hsc/nn/activations.hpp"
#include "hsc/nn/batchnorm.hpp"
#include "hsc/nn/conv1d.hpp"
#include "hsc/nn/dense.hpp"
#include "hsc/nn/dropout.hpp"
#include "hsc/nn/lstm.hpp"
#include "hsc/nn/pool.hpp"
#include "hsc/nn/sequential.hpp"

namespace hsc::models {

namespace detail {

template <class T>
nlohmann::json layer_entry(nn::Layer<T>& layer);

template <class T>
nlohmann::json chain_entries(nn::Sequential<T>& seq) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < seq.size(); ++i) arr.push_back(layer_entry(seq.at(i)));
    return arr;
}

template <class T>
nlohmann::json layer_entry(nn::Layer<T>& layer) {
    nlohmann::json e;
    e["kind"] = layer.kind();
    if (auto* c = dynamic_cast<nn::Conv1d<T>*>(&layer)) {
        e["in"] = c->in_channels();
        e["out"] = c->out_channels();
        e["kernel"] = c->kernel();
    } else if (auto* b = dynamic_cast<nn::BatchNorm1d<T>*>(&layer)) {
        e["channels"] = b->channels();
    } else if (auto* l = dynamic_cast<nn::Lstm<T>*>(&layer)) {
        e["in"] = l->in_features();
        e["units"] = l->units();
        e["sequences"] = l->return_sequences();
    } else if (auto* d = dynamic_cast<nn::Dense<T>*>(&layer)) {
        e["in"] = d->in_features();
        e["out"] = d->out_features();
    } else if (auto* p = dynamic_cast<nn::MaxPool1d<T>*>(&layer)) {
        e["window"] = p->window();
        e["stride"] = p->stride();
    } else if (auto* r = dynamic_cast<nn::Dropout<T>*>(&layer)) {
        e["rate"] = r->rate();
    } else if (auto* br = dynamic_cast<nn::Branches<T>*>(&layer)) {
        nlohmann::json subs = nlohmann::json::array();
        std::size_t out_channels = 0;
        for (std::size_t i = 0; i < br->branch_count(); ++i) {
            auto& chain = br->branch(i);
            subs.push_back(chain_entries(chain));
            // The branch's channel contribution is its last conv width.
            for (std::size_t j = chain.size(); j-- > 0;)
                if (auto* last = dynamic_cast<nn::Conv1d<T>*>(&chain.at(j))) {
                    out_channels += last->out_channels();
                    break;
                }
        }
        e["branches"] = subs;
        e["output_channels"] = out_channels;
    } else if (auto* s = dynamic_cast<nn::Sequential<T>*>(&layer)) {
        e["layers"] = chain_entries(*s);
    }
    return e;
}

} // namespace detail

// Structural self-description of a built graph: identity fields used to
// validate checkpoint loads, plus the full layer tree.
template <class T>
nlohmann::json graph_descriptor(ModelGraph<T>& g) {
    nlohmann::json d;
    d["name"] = g.name();
    d["num_classes"] = g.num_classes();
    d["input_features"] = g.input_features();
    d["seed"] = g.seed();
    d["layers"] = detail::chain_entries(g.body());
    return d;
}

template <class T>
void save_descriptor(const std::string& path, ModelGraph<T>& g) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("descriptor: cannot open '" + path + "' for writing");
    os << graph_descriptor(g).dump(2) << "\n";
    if (!os) throw DataError("descriptor: write to '" + path + "' failed");
}

inline nlohmann::json load_descriptor(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("descriptor: cannot open '" + path + "'");
    nlohmann::json d;
    try {
        is >> d;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("descriptor: '" + path + "' is not valid JSON: " + e.what());
    }
    return d;
}

// Refuse to pair a checkpoint with a differently-shaped model.
inline void check_descriptor(const nlohmann::json& d, const std::string& name,
                             std::size_t num_classes, std::size_t input_features) {
    auto field = [&](const char* key) -> const nlohmann::json& {
        if (!d.contains(key)) throw DataError(std::string("descriptor: missing field '") + key + "'");
        return d.at(key);
    };
    if (field("name").get<std::string>() != name)
        throw DataError("descriptor: checkpoint is for model '" +
                        d.at("name").get<std::string>() + "', configured model is '" + name + "'");
    if (field("num_classes").get<std::size_t>() != num_classes)
        throw DataError("descriptor: checkpoint expects " +
                        std::to_string(d.at("num_classes").get<std::size_t>()) +
                        " classes, configured " + std::to_string(num_classes));
    if (field("input_features").get<std::size_t>() != input_features)
        throw DataError("descriptor: checkpoint expects " +
                        std::to_string(d.at("input_features").get<std::size_t>()) +
                        " input features, configured " + std::to_string(input_features));
}

} // namespace hsc::models
