// Dense layer, softmax, weighted cross-entropy, and the momentum optimizer:
// hand-computed oracles plus finite-difference checks of every gradient path.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "hsc/nn/dense.hpp"
#include "hsc/nn/loss.hpp"
#include "hsc/nn/sgdm.hpp"
#include "hsc/nn/softmax.hpp"
#include "hsc/rng.hpp"
#include "hsc/tensor.hpp"
#include "testutil.hpp"

using hsc::Rng;
using hsc::Tensor;
using hsc::nn::Dense;
using hsc::nn::Mode;
using hsc::nn::Param;
using hsc::nn::Sgdm;
using hsc::nn::Softmax;

TEST(Dense, MatchesHandComputedAffineMap) {
    Rng rng(1);
    Dense<double> dense("d", 3, 2, rng);
    std::vector<Param<double>*> params;
    dense.collect_params(params);
    ASSERT_EQ(params.size(), 2u);
    // W (2, 3) row-major, b (2).
    params[0]->value.data = {1.0, -2.0, 0.5,
                             0.0, 3.0, -1.0};
    params[1]->value.data = {0.25, -0.5};

    Tensor<double> x({3, 2}); // two samples in columns: (1,2,3) and (-1,0,4)
    x.data = {1.0, -1.0,
              2.0, 0.0,
              3.0, 4.0};
    const Tensor<double> y = dense.forward(x, Mode::train);
    ASSERT_EQ(y.rank(), 2u);
    ASSERT_EQ(y.dim(0), 2u);
    ASSERT_EQ(y.dim(1), 2u);
    // Sample 1: (1*1 - 2*2 + 0.5*3 + 0.25, 3*2 - 1*3 - 0.5) = (-1.25, 2.5)
    // Sample 2: (-1 + 0 + 2 + 0.25,        0 + 0 - 4 - 0.5) = ( 1.25, -4.5)
    EXPECT_NEAR(y.at(0, 0), -1.25, 1e-14);
    EXPECT_NEAR(y.at(1, 0), 2.5, 1e-14);
    EXPECT_NEAR(y.at(0, 1), 1.25, 1e-14);
    EXPECT_NEAR(y.at(1, 1), -4.5, 1e-14);
}

TEST(Dense, GradientsMatchFiniteDifferences) {
    Rng rng(42);
    for (int iter = 0; iter < 50; ++iter) {
        const std::size_t F = 1 + rng.below(6);
        const std::size_t U = 1 + rng.below(6);
        const std::size_t N = 1 + rng.below(4);
        Dense<double> dense("g", F, U, rng);
        Tensor<double> x = testutil::random_tensor({F, N}, rng);
        const auto res = testutil::check_layer(dense, x, rng);
        ASSERT_LT(res.max_rel, 1e-4) << "iter " << iter << " F=" << F << " U=" << U << " N=" << N;
    }
}

TEST(Dense, StartsWithZeroBiasAndBoundedWeights) {
    Rng rng(9);
    const std::size_t F = 20, U = 10;
    Dense<double> dense("i", F, U, rng);
    std::vector<Param<double>*> params;
    dense.collect_params(params);
    const double bound = std::sqrt(6.0 / double(F + U));
    for (double v : params[0]->value.data) EXPECT_LE(std::abs(v), bound);
    for (double v : params[1]->value.data) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(Dense, RejectsWrongShapesAndBackwardBeforeForward) {
    Rng rng(2);
    Dense<double> dense("r", 3, 2, rng);
    Tensor<double> bad({4, 2});
    EXPECT_THROW(dense.forward(bad, Mode::train), hsc::ShapeError);
    Tensor<double> g({2, 2});
    EXPECT_THROW(dense.backward(g), hsc::StateError);
    Tensor<double> x({3, 2});
    (void)dense.forward(x, Mode::train);
    Tensor<double> bad_grad({2, 3});
    EXPECT_THROW(dense.backward(bad_grad), hsc::ShapeError);
}

TEST(Softmax, ColumnsArePositiveAndSumToOne) {
    Rng rng(7);
    Softmax<double> sm("sm");
    Tensor<double> z = testutil::random_tensor({5, 6}, rng, -4.0, 4.0);
    const Tensor<double> p = sm.forward(z, Mode::infer);
    for (std::size_t n = 0; n < 6; ++n) {
        double sum = 0.0;
        for (std::size_t c = 0; c < 5; ++c) {
            EXPECT_GT(p.at(c, n), 0.0);
            sum += p.at(c, n);
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(Softmax, LargeLogitsStayFiniteThanksToMaxShift) {
    Softmax<double> sm("sm");
    Tensor<double> z({2, 2});
    z.data = {1000.0, -1000.0,
              0.0, 0.0};
    const Tensor<double> p = sm.forward(z, Mode::infer);
    ASSERT_TRUE(p.all_finite());
    EXPECT_NEAR(p.at(0, 0), 1.0, 1e-12); // exp(1000) would overflow without the shift
    EXPECT_NEAR(p.at(1, 0), 0.0, 1e-12);
    EXPECT_NEAR(p.at(0, 1), 0.0, 1e-12);
    EXPECT_NEAR(p.at(1, 1), 1.0, 1e-12);
}

TEST(Softmax, UniformLogitsGiveUniformProbabilities) {
    Softmax<double> sm("sm");
    Tensor<double> z({12, 3});
    z.fill(0.7);
    const Tensor<double> p = sm.forward(z, Mode::infer);
    for (double v : p.data) EXPECT_NEAR(v, 1.0 / 12.0, 1e-14);
}

TEST(Softmax, PerColumnShiftLeavesProbabilitiesUnchanged) {
    Rng rng(13);
    Softmax<double> sm("sm");
    Tensor<double> z = testutil::random_tensor({4, 3}, rng);
    Tensor<double> shifted = z;
    for (std::size_t n = 0; n < 3; ++n) {
        const double off = rng.uniform(-10.0, 10.0);
        for (std::size_t c = 0; c < 4; ++c) shifted.at(c, n) += off;
    }
    const Tensor<double> p0 = sm.forward(z, Mode::infer);
    const Tensor<double> p1 = sm.forward(shifted, Mode::infer);
    for (std::size_t i = 0; i < p0.numel(); ++i) EXPECT_NEAR(p0.data[i], p1.data[i], 1e-12);
}

TEST(Softmax, RejectsNonFiniteLogitsAndWrongRank) {
    Softmax<double> sm("sm");
    Tensor<double> z({2, 2});
    z.data = {0.0, 1.0, std::numeric_limits<double>::quiet_NaN(), 2.0};
    EXPECT_THROW(sm.forward(z, Mode::infer), hsc::NumericError);
    z.data[2] = std::numeric_limits<double>::infinity();
    EXPECT_THROW(sm.forward(z, Mode::infer), hsc::NumericError);
    Tensor<double> r3({2, 2, 2});
    EXPECT_THROW(sm.forward(r3, Mode::infer), hsc::ShapeError);
    Tensor<double> g({2, 2});
    Softmax<double> fresh("f");
    EXPECT_THROW(fresh.backward(g), hsc::StateError);
}

TEST(Softmax, StandaloneBackwardMatchesFiniteDifferences) {
    Rng rng(31);
    for (int iter = 0; iter < 50; ++iter) {
        const std::size_t C = 2 + rng.below(5);
        const std::size_t N = 1 + rng.below(4);
        Softmax<double> sm("sm");
        Tensor<double> z = testutil::random_tensor({C, N}, rng, -2.0, 2.0);
        const auto res = testutil::check_layer(sm, z, rng);
        ASSERT_LT(res.max_rel, 1e-4) << "iter " << iter << " C=" << C << " N=" << N;
    }
}

TEST(CrossEntropy, UniformTwelveClassProbabilitiesGiveLogTwelve) {
    Tensor<double> p({12, 4});
    p.fill(1.0 / 12.0);
    const std::vector<std::size_t> labels = {0, 3, 7, 11};
    const std::vector<double> weights(12, 1.0);
    const auto r = hsc::nn::weighted_cross_entropy(p, labels, weights);
    EXPECT_NEAR(r.value, 2.4849066497880004, 1e-12); // ln 12
    EXPECT_EQ(r.clamped, 0u);
}

TEST(CrossEntropy, ClassWeightsScaleEachSampleTerm) {
    // Two samples: p(correct) = 0.8 with weight 2, p(correct) = 0.7 with
    // weight 0.5. Loss = (2*(-ln 0.8) + 0.5*(-ln 0.7)) / 2.
    Tensor<double> p({2, 2});
    p.data = {0.8, 0.3,
              0.2, 0.7};
    const std::vector<std::size_t> labels = {0, 1};
    const std::vector<double> weights = {2.0, 0.5};
    const auto r = hsc::nn::weighted_cross_entropy(p, labels, weights);
    EXPECT_NEAR(r.value, 0.31231228729889287, 1e-14);
    EXPECT_EQ(r.clamped, 0u);
}

TEST(CrossEntropy, ZeroProbabilityIsClampedToAFiniteFloor) {
    Tensor<double> p({2, 1});
    p.data = {0.0, 1.0};
    const std::vector<std::size_t> labels = {0};
    const std::vector<double> weights = {1.0, 1.0};
    const auto r = hsc::nn::weighted_cross_entropy(p, labels, weights);
    EXPECT_EQ(r.clamped, 1u);
    EXPECT_NEAR(r.value, 69.07755278982137, 1e-10); // -ln(1e-30)
    EXPECT_TRUE(std::isfinite(r.value));
}

TEST(CrossEntropy, RejectsBadLabelsAndMismatchedSizes) {
    Tensor<double> p({3, 2});
    p.fill(1.0 / 3.0);
    const std::vector<double> w3(3, 1.0);
    EXPECT_THROW(hsc::nn::weighted_cross_entropy(p, {0, 3}, w3), hsc::DataError);
    EXPECT_THROW(hsc::nn::weighted_cross_entropy(p, {0}, w3), hsc::ShapeError);
    EXPECT_THROW(hsc::nn::weighted_cross_entropy(p, {0, 1}, {1.0, 1.0}), hsc::ShapeError);
    Tensor<double> r1({3});
    EXPECT_THROW(hsc::nn::weighted_cross_entropy(r1, {0}, w3), hsc::ShapeError);
}

TEST(CrossEntropy, FusedLogitGradientMatchesHandFormula) {
    // Single sample, two classes, label 0, weight 3:
    // g = w * (p - onehot) / N = 3 * (0.7-1, 0.3-0) / 1 = (-0.9, 0.9).
    Tensor<double> p({2, 1});
    p.data = {0.7, 0.3};
    const Tensor<double> g =
        hsc::nn::cross_entropy_logit_grad(p, {0}, std::vector<double>{3.0, 1.0});
    EXPECT_NEAR(g.at(0, 0), -0.9, 1e-14);
    EXPECT_NEAR(g.at(1, 0), 0.9, 1e-14);
}

TEST(CrossEntropy, FusedLogitGradientMatchesFiniteDifferences) {
    Rng rng(55);
    for (int iter = 0; iter < 50; ++iter) {
        const std::size_t C = 2 + rng.below(4);
        const std::size_t N = 1 + rng.below(4);
        Tensor<double> logits = testutil::random_tensor({C, N}, rng, -2.0, 2.0);
        std::vector<std::size_t> labels(N);
        for (auto& l : labels) l = rng.below(C);
        std::vector<double> weights(C);
        for (auto& w : weights) w = rng.uniform(0.2, 3.0);
        const auto res = testutil::check_softmax_ce(logits, labels, weights);
        ASSERT_LT(res.max_rel, 1e-4) << "iter " << iter << " C=" << C << " N=" << N;
    }
}

TEST(Sgdm, VelocityAccumulatesClassicalMomentum) {
    // Constant gradient 1, lr 0.1, momentum 0.9:
    //   v: 1, 1.9, 2.71   theta: -0.1, -0.29, -0.561
    Param<double> p("p", Tensor<double>({1}));
    Sgdm<double> opt({&p}, 0.1, 0.9);
    const double expected[3] = {-0.1, -0.29, -0.561};
    for (int s = 0; s < 3; ++s) {
        opt.zero_grad();
        p.grad.data[0] = 1.0;
        opt.step();
        EXPECT_NEAR(p.value.data[0], expected[s], 1e-15) << "step " << s;
    }
}

TEST(Sgdm, ZeroLearningRateLeavesParametersUntouched) {
    Param<double> p("p", Tensor<double>({3}));
    p.value.data = {1.0, -2.0, 3.0};
    Sgdm<double> opt({&p}, 0.0, 0.9);
    p.grad.data = {5.0, 5.0, 5.0};
    opt.step();
    opt.step();
    EXPECT_DOUBLE_EQ(p.value.data[0], 1.0);
    EXPECT_DOUBLE_EQ(p.value.data[1], -2.0);
    EXPECT_DOUBLE_EQ(p.value.data[2], 3.0);
}

TEST(Sgdm, ZeroMomentumReducesToPlainGradientDescent) {
    Param<double> p("p", Tensor<double>({1}));
    p.value.data[0] = 10.0;
    Sgdm<double> opt({&p}, 0.5, 0.0);
    p.grad.data[0] = 2.0;
    opt.step();
    p.grad.data[0] = -4.0;
    opt.step();
    // 10 - 0.5*2 - 0.5*(-4) = 11
    EXPECT_DOUBLE_EQ(p.value.data[0], 11.0);
}

TEST(Sgdm, NonFiniteGradientRejectsStepWithoutTouchingState) {
    Param<double> p("p", Tensor<double>({2}));
    p.value.data = {1.0, 2.0};
    Sgdm<double> opt({&p}, 0.1, 0.9);
    p.grad.data = {1.0, std::numeric_limits<double>::quiet_NaN()};
    EXPECT_THROW(opt.step(), hsc::NumericError);
    EXPECT_DOUBLE_EQ(p.value.data[0], 1.0);
    EXPECT_DOUBLE_EQ(p.value.data[1], 2.0);
    // A later valid step behaves as if the rejected one never happened
    // (velocity still zero).
    p.grad.data = {1.0, 1.0};
    opt.step();
    EXPECT_DOUBLE_EQ(p.value.data[0], 0.9);
    EXPECT_DOUBLE_EQ(p.value.data[1], 1.9);
}

TEST(Sgdm, ZeroGradClearsAccumulatedGradients) {
    Param<double> p("p", Tensor<double>({2}));
    p.grad.data = {3.0, -4.0};
    Sgdm<double> opt({&p}, 0.1, 0.9);
    opt.zero_grad();
    EXPECT_DOUBLE_EQ(p.grad.data[0], 0.0);
    EXPECT_DOUBLE_EQ(p.grad.data[1], 0.0);
}
