#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hsc/nn/gemm.hpp"
#include "hsc/nn/init.hpp"
#include "hsc/nn/layer.hpp"
#include "hsc/rng.hpp"
#include "hsc/tensor.hpp"

namespace hsc::nn {

// Long short-term memory layer over a (F, T, N) tensor: F features per step,
// T time steps, batch innermost. Gate pre-activations are packed (4U, N) in
// the order input, forget, cell-candidate, output:
//   z = W_x x_t + W_h h_{t-1} + b
//   i = sig(z_i), f = sig(z_f), g = tanh(z_g), o = sig(z_o)
//   c_t = f * c_{t-1} + i * g
//   h_t = o * tanh(c_t)
// With return_sequences the output is (U, T, N); otherwise the last hidden
// state (U, N). Weights start uniform in [-0.08, 0.08]; biases start at zero
// except the forget gate, which starts at 1 so early training can carry cell
// state across steps.
template <class T>
class Lstm final : public Layer<T> {
public:
    Lstm(std::string name, std::size_t in_features, std::size_t units, bool return_sequences,
         Rng& rng)
        : name_(std::move(name)),
          in_(in_features),
          units_(units),
          seq_(return_sequences),
          wx_(name_ + ".weight_x", Tensor<T>({4 * units, in_features})),
          wh_(name_ + ".weight_h", Tensor<T>({4 * units, units})),
          bias_(name_ + ".bias", Tensor<T>({4 * units})) {
        init_uniform(wx_.value, 0.08, rng);
        init_uniform(wh_.value, 0.08, rng);
        bias_.value.fill(T(0));
        for (std::size_t u = 0; u < units; ++u) bias_.value.data[units + u] = T(1);
    }

    Tensor<T> forward(const Tensor<T>& x, Mode /*mode*/) override {
        if (x.rank() != 3 || x.dim(0) != in_)
            throw ShapeError("lstm layer '" + name_ + "': expected input (" + std::to_string(in_) +
                             ", T, N), got " + x.shape_str());
        const std::size_t U = units_, Tn = x.dim(1), N = x.dim(2);
        x_ = x;
        steps_ = Tn;
        batch_ = N;

        // Input contribution for every step in one multiply: x viewed as a
        // (F, T*N) matrix gives zx = W_x x with shape (4U, T*N).
        Tensor<T> zx({4 * U, Tn * N});
        detail::gemm_accum(zx.data.data(), wx_.value.data.data(), x.data.data(), 4 * U, in_, Tn * N);

        gates_.assign(Tn, Tensor<T>({4 * U, N}));
        c_.assign(Tn, Tensor<T>({U, N}));
        tanh_c_.assign(Tn, Tensor<T>({U, N}));
        h_.assign(Tn, Tensor<T>({U, N}));

        Tensor<T> z({4 * U, N});
        for (std::size_t t = 0; t < Tn; ++t) {
            for (std::size_t r = 0; r < 4 * U; ++r) {
                const T* src = &zx.data[r * Tn * N + t * N];
                const T b = bias_.value.data[r];
                T* dst = &z.data[r * N];
                for (std::size_t n = 0; n < N; ++n) dst[n] = src[n] + b;
            }
            if (t > 0)
                detail::gemm_accum(z.data.data(), wh_.value.data.data(), h_[t - 1].data.data(),
                                   4 * U, U, N);
            Tensor<T>& g4 = gates_[t];
            for (std::size_t u = 0; u < U; ++u) {
                const T* zi = &z.data[u * N];
                const T* zf = &z.data[(U + u) * N];
                const T* zg = &z.data[(2 * U + u) * N];
                const T* zo = &z.data[(3 * U + u) * N];
                T* gi = &g4.data[u * N];
                T* gf = &g4.data[(U + u) * N];
                T* gg = &g4.data[(2 * U + u) * N];
                T* go = &g4.data[(3 * U + u) * N];
                const T* cprev = t > 0 ? &c_[t - 1].data[u * N] : nullptr;
                T* ct = &c_[t].data[u * N];
                T* tct = &tanh_c_[t].data[u * N];
                T* ht = &h_[t].data[u * N];
                for (std::size_t n = 0; n < N; ++n) {
                    const T iv = sigmoid(zi[n]);
                    const T fv = sigmoid(zf[n]);
                    const T gv = std::tanh(zg[n]);
                    const T ov = sigmoid(zo[n]);
                    gi[n] = iv;
                    gf[n] = fv;
                    gg[n] = gv;
                    go[n] = ov;
                    const T cv = (cprev ? fv * cprev[n] : T(0)) + iv * gv;
                    ct[n] = cv;
                    const T tc = std::tanh(cv);
                    tct[n] = tc;
                    ht[n] = ov * tc;
                }
            }
        }

        if (!seq_) return h_[Tn - 1];
        Tensor<T> y({U, Tn, N});
        for (std::size_t t = 0; t < Tn; ++t)
            for (std::size_t u = 0; u < U; ++u)
                std::copy_n(&h_[t].data[u * N], N, &y.data[(u * Tn + t) * N]);
        return y;
    }

    Tensor<T> backward(const Tensor<T>& gy) override {
        if (steps_ == 0)
            throw StateError("lstm layer '" + name_ + "': backward called before forward");
        const std::size_t U = units_, Tn = steps_, N = batch_;
        if (seq_) {
            if (gy.rank() != 3 || gy.dim(0) != U || gy.dim(1) != Tn || gy.dim(2) != N)
                throw ShapeError("lstm layer '" + name_ + "': gradient shape " + gy.shape_str() +
                                 " does not match sequence output");
        } else {
            if (gy.rank() != 2 || gy.dim(0) != U || gy.dim(1) != N)
                throw ShapeError("lstm layer '" + name_ + "': gradient shape " + gy.shape_str() +
                                 " does not match last-step output");
        }

        Tensor<T> dh({U, N}), dc({U, N});
        Tensor<T> dz({4 * U, N});
        Tensor<T> dz_all({4 * U, Tn * N}); // accumulated for the batched input grads

        for (std::size_t t = Tn; t-- > 0;) {
            // Add this step's slice of the output gradient to the recurrent one.
            if (seq_) {
                for (std::size_t u = 0; u < U; ++u) {
                    const T* src = &gy.data[(u * Tn + t) * N];
                    T* dst = &dh.data[u * N];
                    for (std::size_t n = 0; n < N; ++n) dst[n] += src[n];
                }
            } else if (t == Tn - 1) {
                dh = gy;
            }

            const Tensor<T>& g4 = gates_[t];
            const T* cprev = t > 0 ? c_[t - 1].data.data() : nullptr;
            for (std::size_t u = 0; u < U; ++u) {
                const T* gi = &g4.data[u * N];
                const T* gf = &g4.data[(U + u) * N];
                const T* gg = &g4.data[(2 * U + u) * N];
                const T* go = &g4.data[(3 * U + u) * N];
                const T* tct = &tanh_c_[t].data[u * N];
                T* dhu = &dh.data[u * N];
                T* dcu = &dc.data[u * N];
                T* dzi = &dz.data[u * N];
                T* dzf = &dz.data[(U + u) * N];
                T* dzg = &dz.data[(2 * U + u) * N];
                T* dzo = &dz.data[(3 * U + u) * N];
                for (std::size_t n = 0; n < N; ++n) {
                    const T dov = dhu[n] * tct[n];
                    const T dct = dcu[n] + dhu[n] * go[n] * (T(1) - tct[n] * tct[n]);
                    const T div = dct * gg[n];
                    const T dgv = dct * gi[n];
                    const T dfv = cprev ? dct * cprev[u * N + n] : T(0);
                    dzi[n] = div * gi[n] * (T(1) - gi[n]);
                    dzf[n] = dfv * gf[n] * (T(1) - gf[n]);
                    dzg[n] = dgv * (T(1) - gg[n] * gg[n]);
                    dzo[n] = dov * go[n] * (T(1) - go[n]);
                    dcu[n] = dct * gf[n]; // becomes dc_{t-1}
                }
            }

            // db += rowsum(dz); stash dz for the batched W_x gradients.
            for (std::size_t r = 0; r < 4 * U; ++r) {
                const T* row = &dz.data[r * N];
                T acc = T(0);
                for (std::size_t n = 0; n < N; ++n) acc += row[n];
                bias_.grad.data[r] += acc;
                std::copy_n(row, N, &dz_all.data[r * Tn * N + t * N]);
            }

            // dW_h += dz h_{t-1}^T ; dh_{t-1} = W_h^T dz.
            dh.fill(T(0));
            if (t > 0) {
                detail::gemm_abt_accum(wh_.grad.data.data(), dz.data.data(), h_[t - 1].data.data(),
                                       4 * U, U, N);
                detail::gemm_at_accum(dh.data.data(), wh_.value.data.data(), dz.data.data(),
                                      4 * U, U, N);
            }
        }

        // dW_x += DZ X^T and dX = W_x^T DZ over all steps at once.
        detail::gemm_abt_accum(wx_.grad.data.data(), dz_all.data.data(), x_.data.data(),
                               4 * U, in_, Tn * N);
        Tensor<T> gx({in_, Tn, N});
        detail::gemm_at_accum(gx.data.data(), wx_.value.data.data(), dz_all.data.data(),
                              4 * U, in_, Tn * N);
        return gx;
    }

    void collect_params(std::vector<Param<T>*>& out) override {
        out.push_back(&wx_);
        out.push_back(&wh_);
        out.push_back(&bias_);
    }
    std::string kind() const override { return "lstm"; }
    std::string describe() const override {
        return name_ + ": lstm(" + std::to_string(in_) + " -> " + std::to_string(units_) +
               (seq_ ? ", sequences" : ", last") + ")";
    }

    std::size_t in_features() const { return in_; }
    std::size_t units() const { return units_; }
    bool return_sequences() const { return seq_; }

private:
    static T sigmoid(T v) { return T(1) / (T(1) + std::exp(-v)); }

    std::string name_;
    std::size_t in_, units_;
    bool seq_;
    Param<T> wx_, wh_, bias_;
    Tensor<T> x_;
    std::size_t steps_ = 0, batch_ = 0;
    std::vector<Tensor<T>> gates_, c_, tanh_c_, h_;
};

} // namespace hsc::nn
