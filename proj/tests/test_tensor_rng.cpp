#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hsc/error.hpp"
#include "hsc/rng.hpp"
#include "hsc/tensor.hpp"

using hsc::Rng;
using hsc::Tensor;

TEST(Tensor, ZeroInitializedRowMajor) {
    Tensor<double> t({2, 3, 4});
    EXPECT_EQ(t.rank(), 3u);
    EXPECT_EQ(t.numel(), 24u);
    for (double v : t.data) EXPECT_EQ(v, 0.0);
    t.at(1, 2, 3) = 5.0;
    EXPECT_EQ(t.data[1 * 12 + 2 * 4 + 3], 5.0);
    t.at(0, 0, 1) = 7.0;
    EXPECT_EQ(t.data[1], 7.0);
}

TEST(Tensor, Rank2Accessor) {
    Tensor<float> t({3, 2});
    t.at(2, 1) = 9.0f;
    EXPECT_EQ(t.data[5], 9.0f);
}

TEST(Tensor, ReshapePreservesDataAndChecksCount) {
    Tensor<double> t({2, 6});
    for (std::size_t i = 0; i < 12; ++i) t.data[i] = static_cast<double>(i);
    const Tensor<double> r = t.reshaped({3, 4});
    EXPECT_EQ(r.dim(0), 3u);
    EXPECT_EQ(r.data, t.data);
    EXPECT_THROW(t.reshaped({5, 2}), hsc::ShapeError);
}

TEST(Tensor, CastRoundsTripThroughFloat) {
    Tensor<double> t({3});
    t.data = {1.5, -2.25, 0.125}; // exactly representable in both widths
    const Tensor<float> f = t.cast<float>();
    const Tensor<double> back = f.cast<double>();
    EXPECT_EQ(back.data, t.data);
}

TEST(Tensor, AllFiniteDetectsNanAndInf) {
    Tensor<double> t({2, 2});
    EXPECT_TRUE(t.all_finite());
    t.data[3] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_FALSE(t.all_finite());
    t.data[3] = std::numeric_limits<double>::infinity();
    EXPECT_FALSE(t.all_finite());
}

TEST(Tensor, ShapeStringAndChecks) {
    Tensor<double> t({2, 3});
    EXPECT_EQ(t.shape_str(), "(2,3)");
    EXPECT_THROW(hsc::check_shape(t, {2, 4}, "ctx"), hsc::ShapeError);
}

TEST(Rng, DeterministicPerSeed) {
    Rng a(42), b(42), c(43);
    bool diverged = false;
    for (int i = 0; i < 100; ++i) {
        const double va = a.uniform(), vb = b.uniform();
        EXPECT_EQ(va, vb);
        if (va != c.uniform()) diverged = true;
    }
    EXPECT_TRUE(diverged);
}

TEST(Rng, UniformRangeAndMoments) {
    Rng rng(7);
    double sum = 0.0, mn = 1.0, mx = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.uniform();
        ASSERT_GE(v, 0.0);
        ASSERT_LT(v, 1.0);
        sum += v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    EXPECT_NEAR(sum / n, 0.5, 0.01);
    EXPECT_LT(mn, 0.01);
    EXPECT_GT(mx, 0.99);
}

TEST(Rng, UniformIntervalStaysInside) {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.uniform(-2.5, 3.5);
        ASSERT_GE(v, -2.5);
        ASSERT_LT(v, 3.5);
    }
}

TEST(Rng, NormalMoments) {
    Rng rng(11);
    double sum = 0.0, sumsq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = rng.normal();
        sum += v;
        sumsq += v * v;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.02);
    EXPECT_NEAR(sumsq / n, 1.0, 0.03);
}

TEST(Rng, BelowIsUnbiasedAcrossSmallRange) {
    Rng rng(13);
    std::vector<int> counts(5, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[rng.below(5)];
    for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / n, 0.2, 0.01);
}

TEST(Rng, ShuffleIsAPermutationAndSeedStable) {
    std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    Rng a(5);
    a.shuffle(v);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));

    std::vector<int> w{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    Rng b(5);
    b.shuffle(w);
    EXPECT_EQ(v, w);
}
