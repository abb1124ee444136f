#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "maxconv/fast_conv.hpp"
#include "maxconv/harness.hpp"
#include "oracles.hpp"

using namespace maxconv;

namespace {

double maxNormRelativeError(const Pmf& got, const Pmf& want) {
    double diff = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        diff = std::max(diff, std::abs(got.values()[i] - want.values()[i]));
    }
    return diff / want.max();
}

}  // namespace

TEST(ConvPlan, PaddedLengthIsPowerOfTwoCoveringOutput) {
    for (std::size_t kL : {1u, 2u, 3u, 7u, 64u, 257u}) {
        for (std::size_t kR : {1u, 5u, 64u, 1000u}) {
            const std::size_t n = ConvPlan::forLengths(kL, kR).paddedLength;
            EXPECT_GE(n, kL + kR - 1);
            EXPECT_EQ(n & (n - 1), 0u);
            EXPECT_LT(n / 2, kL + kR - 1);
        }
    }
}

TEST(FastConvolve, SmallExamples) {
    const Pmf c = fastConvolve(Pmf({1, 1}), Pmf({1, 1}));
    ASSERT_EQ(c.size(), 3u);
    EXPECT_NEAR(c.values()[0], 1, 1e-12);
    EXPECT_NEAR(c.values()[1], 2, 1e-12);
    EXPECT_NEAR(c.values()[2], 1, 1e-12);

    const Pmf x({0.3, 0.1, 0.6, 0.0, 0.2}, -2);
    const Pmf id = fastConvolve(Pmf::delta(0), x);
    EXPECT_EQ(id.offset(), -2);
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_NEAR(id.values()[i], x.values()[i], 1e-12);
    }
    EXPECT_EQ(fastConvolve(Pmf::delta(2, 0.5), Pmf::delta(-7, 0.5)), Pmf::delta(-5, 0.25));
}

TEST(FastConvolve, MatchesNaiveOracleAtK257) {
    const auto [a, b] = generateUniformPair(257, 99);
    const Pmf fast = fastConvolve(a, b);
    const Pmf exact = naiveConvolve(a, b);
    ASSERT_EQ(fast.size(), exact.size());
    EXPECT_EQ(fast.offset(), exact.offset());
    EXPECT_LE(maxNormRelativeError(fast, exact), 1e-9);
}

TEST(FastConvolve, CommutesConservesMassAndStaysNonnegative) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Pmf a = oracle::randomPmf(rng, 10 + 37 * trial, trial);
        const Pmf b = oracle::randomPmf(rng, 3 + 91 * trial, -trial);
        const Pmf ab = fastConvolve(a, b);
        const Pmf ba = fastConvolve(b, a);
        for (std::size_t i = 0; i < ab.size(); ++i) {
            EXPECT_NEAR(ab.values()[i], ba.values()[i], 1e-12);
            EXPECT_GE(ab.values()[i], 0.0);
        }
        EXPECT_NEAR(ab.sum() / (a.sum() * b.sum()), 1.0, 1e-9);
    }
}

TEST(FastConvolve, NegativeRoundOffIsClamped) {
    // Widely separated magnitudes leave FFT noise well below zero in the
    // near-empty stretches of the output.
    std::vector<double> spiky(300, 0.0);
    spiky[0] = 1.0;
    spiky[299] = 1e-30;
    const Pmf out = fastConvolve(Pmf(spiky), Pmf(spiky));
    for (double v : out.values()) {
        EXPECT_GE(v, 0.0);
    }
}

TEST(ChooseNaiveOrFast, SizeRule) {
    EXPECT_EQ(chooseNaiveOrFast(8, 8), ConvMethod::Naive);
    EXPECT_EQ(chooseNaiveOrFast(4096, 4096), ConvMethod::Fast);
    for (std::size_t k : {1u, 2u, 100u, 100000u}) {
        EXPECT_EQ(chooseNaiveOrFast(1, k), ConvMethod::Naive);
        EXPECT_EQ(chooseNaiveOrFast(k, 1), ConvMethod::Naive);
    }
    // A larger constant shifts the crossover toward the naive method.
    EXPECT_EQ(chooseNaiveOrFast(64, 64), ConvMethod::Fast);
    EXPECT_EQ(chooseNaiveOrFast(64, 64, 10.0), ConvMethod::Naive);
    EXPECT_EQ(toString(ConvMethod::Naive), "naive");
}

TEST(FastConvolve, RuntimeGrowsNearLinearithmically) {
    // Sanity check only: doubling k from 2^14 should cost well under 3x.
    auto timeAt = [](std::size_t k) {
        const auto [a, b] = generateUniformPair(k, 1);
        double best = 1e9;
        for (int rep = 0; rep < 5; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            const Pmf c = fastConvolve(a, b);
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
            best = std::min(best, dt.count());
            EXPECT_GT(c.max(), 0.0);
        }
        return best;
    };
    const double small = timeAt(1 << 14);
    const double large = timeAt(1 << 15);
    EXPECT_LT(large / small, 3.0);
}
