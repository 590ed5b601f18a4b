// LSTM layer: hand-computed gate algebra, boundedness, initialization policy,
// sequence/last output agreement, and finite-difference gradient checks.

#include <cmath>
#include <cstddef>
#include <vector>

#include <gtest/gtest.h>

#include "hsc/nn/lstm.hpp"
#include "hsc/rng.hpp"
#include "hsc/tensor.hpp"
#include "testutil.hpp"

using hsc::Rng;
using hsc::Tensor;
using hsc::nn::Lstm;
using hsc::nn::Mode;
using hsc::nn::Param;

namespace {

std::vector<Param<double>*> params_of(Lstm<double>& layer) {
    std::vector<Param<double>*> p;
    layer.collect_params(p);
    return p; // order: weight_x, weight_h, bias
}

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

} // namespace

TEST(Lstm, AllZeroParametersProduceExactlyZeroOutputs) {
    // With every weight and bias zero: i = f = o = sigmoid(0) = 0.5 and
    // g = tanh(0) = 0, so c_t = 0.5*c_{t-1} + 0.5*0 stays 0 and
    // h_t = 0.5 * tanh(0) = 0 at every step, independent of the input.
    Rng rng(11);
    for (bool seq : {false, true}) {
        Lstm<double> lstm("z", 3, 2, seq, rng);
        for (auto* p : params_of(lstm)) p->value.fill(0.0);
        Tensor<double> x = testutil::random_tensor({3, 4, 2}, rng, -5.0, 5.0);
        const Tensor<double> y = lstm.forward(x, Mode::train);
        if (seq) {
            ASSERT_EQ(y.rank(), 3u);
            EXPECT_EQ(y.dim(0), 2u);
            EXPECT_EQ(y.dim(1), 4u);
            EXPECT_EQ(y.dim(2), 2u);
        } else {
            ASSERT_EQ(y.rank(), 2u);
            EXPECT_EQ(y.dim(0), 2u);
            EXPECT_EQ(y.dim(1), 2u);
        }
        for (double v : y.data) EXPECT_DOUBLE_EQ(v, 0.0);
    }
}

TEST(Lstm, ScalarTwoStepRecurrenceMatchesHandComputedGates) {
    // One unit, one feature, two steps, batch 1: the whole recurrence can be
    // followed by hand. Gate rows are packed input, forget, candidate, output.
    Rng rng(3);
    Lstm<double> lstm("s", 1, 1, /*return_sequences=*/true, rng);
    auto params = params_of(lstm);
    ASSERT_EQ(params.size(), 3u);
    Tensor<double>& wx = params[0]->value;   // (4, 1)
    Tensor<double>& wh = params[1]->value;   // (4, 1)
    Tensor<double>& bias = params[2]->value; // (4)
    ASSERT_EQ(wx.numel(), 4u);
    ASSERT_EQ(wh.numel(), 4u);
    ASSERT_EQ(bias.numel(), 4u);

    const double wxi = 0.4, wxf = -0.3, wxg = 0.8, wxo = 0.1;
    const double whi = -0.5, whf = 0.7, whg = 0.2, who = -0.6;
    const double bi = 0.05, bf = -0.1, bg = 0.3, bo = 0.2;
    wx.data = {wxi, wxf, wxg, wxo};
    wh.data = {whi, whf, whg, who};
    bias.data = {bi, bf, bg, bo};

    const double x1 = 0.9, x2 = -1.3;
    Tensor<double> x({1, 2, 1});
    x.data = {x1, x2};

    // Step 1 (h0 = c0 = 0).
    const double i1 = sigmoid(wxi * x1 + bi);
    const double f1 = sigmoid(wxf * x1 + bf);
    const double g1 = std::tanh(wxg * x1 + bg);
    const double o1 = sigmoid(wxo * x1 + bo);
    const double c1 = i1 * g1;
    const double h1 = o1 * std::tanh(c1);
    // Step 2.
    const double i2 = sigmoid(wxi * x2 + whi * h1 + bi);
    const double f2 = sigmoid(wxf * x2 + whf * h1 + bf);
    const double g2 = std::tanh(wxg * x2 + whg * h1 + bg);
    const double o2 = sigmoid(wxo * x2 + who * h1 + bo);
    const double c2 = f2 * c1 + i2 * g2;
    const double h2 = o2 * std::tanh(c2);
    (void)f1; // forget gate is inert at step 1 because c0 = 0

    const Tensor<double> y = lstm.forward(x, Mode::train);
    ASSERT_EQ(y.rank(), 3u);
    EXPECT_NEAR(y.at(0, 0, 0), h1, 1e-12);
    EXPECT_NEAR(y.at(0, 1, 0), h2, 1e-12);
}

TEST(Lstm, HiddenStateMagnitudeStaysStrictlyBelowOne) {
    // h = sigmoid(.) * tanh(.) is a product of factors each below 1 in
    // magnitude, so even wild weights cannot push the output past +-1.
    Rng rng(19);
    Lstm<double> lstm("b", 4, 3, /*return_sequences=*/true, rng);
    for (auto* p : params_of(lstm))
        for (auto& v : p->value.data) v = rng.uniform(-30.0, 30.0);
    Tensor<double> x = testutil::random_tensor({4, 6, 5}, rng, -50.0, 50.0);
    const Tensor<double> y = lstm.forward(x, Mode::train);
    for (double v : y.data) {
        EXPECT_LT(v, 1.0);
        EXPECT_GT(v, -1.0);
    }
}

TEST(Lstm, FreshLayerStartsWithForgetBiasOneAndSmallUniformWeights) {
    Rng rng(23);
    const std::size_t U = 8;
    Lstm<double> lstm("i", 5, U, /*return_sequences=*/false, rng);
    auto params = params_of(lstm);
    const Tensor<double>& wx = params[0]->value;
    const Tensor<double>& wh = params[1]->value;
    const Tensor<double>& bias = params[2]->value;

    double spread = 0.0;
    for (double v : wx.data) {
        EXPECT_LE(std::abs(v), 0.08);
        spread = std::max(spread, std::abs(v));
    }
    for (double v : wh.data) {
        EXPECT_LE(std::abs(v), 0.08);
        spread = std::max(spread, std::abs(v));
    }
    EXPECT_GT(spread, 0.04); // actually random, not all collapsed to zero

    ASSERT_EQ(bias.numel(), 4 * U);
    for (std::size_t r = 0; r < 4 * U; ++r) {
        const bool forget_row = r >= U && r < 2 * U;
        EXPECT_DOUBLE_EQ(bias.data[r], forget_row ? 1.0 : 0.0) << "bias row " << r;
    }
}

TEST(Lstm, SequenceModeFinalStepMatchesLastOnlyMode) {
    // Two layers built from identically seeded generators share their
    // initialization, so the sequence output's final step must equal the
    // last-state output bit for bit.
    Rng rng_a(77), rng_b(77), rng_x(78);
    Lstm<double> seq("a", 3, 4, /*return_sequences=*/true, rng_a);
    Lstm<double> last("b", 3, 4, /*return_sequences=*/false, rng_b);
    Tensor<double> x = testutil::random_tensor({3, 5, 2}, rng_x);

    const Tensor<double> ys = seq.forward(x, Mode::train);
    const Tensor<double> yl = last.forward(x, Mode::train);
    ASSERT_EQ(ys.rank(), 3u);
    ASSERT_EQ(yl.rank(), 2u);
    for (std::size_t u = 0; u < 4; ++u)
        for (std::size_t n = 0; n < 2; ++n)
            EXPECT_EQ(ys.at(u, 4, n), yl.at(u, n)) << "unit " << u << " sample " << n;
}

TEST(Lstm, GradientsMatchFiniteDifferencesOverBothOutputModes) {
    Rng rng(101);
    double worst = 0.0;
    std::size_t checked = 0;
    for (int iter = 0; iter < 50; ++iter) {
        const std::size_t F = 1 + rng.below(3);
        const std::size_t U = 1 + rng.below(3);
        const std::size_t T = 1 + rng.below(4);
        const std::size_t N = 1 + rng.below(3);
        const bool seq = (iter % 2) == 0;
        Lstm<double> lstm("g", F, U, seq, rng);
        Tensor<double> x = testutil::random_tensor({F, T, N}, rng);
        const auto res = testutil::check_layer(lstm, x, rng);
        worst = std::max(worst, res.max_rel);
        checked += res.checked;
        ASSERT_LT(res.max_rel, 1e-4) << "iter " << iter << " F=" << F << " U=" << U << " T=" << T
                                     << " N=" << N << " seq=" << seq;
    }
    EXPECT_GT(checked, 1000u);
    EXPECT_LT(worst, 1e-4);
}

TEST(Lstm, RejectsWrongShapesAndBackwardBeforeForward) {
    Rng rng(5);
    Lstm<double> lstm("r", 3, 2, /*return_sequences=*/false, rng);

    Tensor<double> flat({3, 4});
    EXPECT_THROW(lstm.forward(flat, Mode::train), hsc::ShapeError);
    Tensor<double> wrong_features({2, 4, 1});
    EXPECT_THROW(lstm.forward(wrong_features, Mode::train), hsc::ShapeError);

    Tensor<double> g({2, 1});
    EXPECT_THROW(lstm.backward(g), hsc::StateError);

    Tensor<double> x({3, 4, 1});
    (void)lstm.forward(x, Mode::train);
    Tensor<double> bad_grad({2, 4, 1}); // sequence-shaped grad for last-only output
    EXPECT_THROW(lstm.backward(bad_grad), hsc::ShapeError);
}
