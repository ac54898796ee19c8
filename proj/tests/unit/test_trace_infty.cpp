#include "sgap/trace_infty.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sgap;
namespace tg = sgap::testgen;

namespace {

DecaySequence constant_one(std::size_t length = 64) { return DecaySequence(std::vector<double>(length, 1.0)); }

// τ_n = 1/log(n+2)
DecaySequence inverse_log() {
    const TailModel tail = TailModel::powerlog(0.0, 1.0, 0.0, 2.0);
    return DecaySequence({tail.value_at(0.0)}, tail);
}

}  // namespace

TEST(Partition, FirstElements) {
    EXPECT_EQ(Partition::elements(1, 14), (std::vector<std::uint64_t>{1, 2, 6, 10, 14}));
    EXPECT_EQ(Partition::elements(2, 20), (std::vector<std::uint64_t>{3, 4, 12, 20}));
    EXPECT_EQ(Partition::elements(3, 40), (std::vector<std::uint64_t>{5, 8, 24, 40}));
    EXPECT_THROW(Partition(0), std::invalid_argument);
}

TEST(Partition, ClosedFormAgreesWithBlockOf) {
    for (std::uint64_t k = 1; k <= 4096; ++k) {
        const int j = Partition::block_of(k);
        for (int i = 1; i <= 2100; ++i) EXPECT_EQ(Partition::contains(i, k), i == j) << k << " " << i;
    }
}

TEST(Partition, EveryIndexInExactlyOneBlock) {
    const std::uint64_t limit = 1 << 16;
    std::vector<int> hits(limit + 1, 0);
    for (int j = 1; j <= static_cast<int>(limit / 2) + 1; ++j)
        for (std::uint64_t k : Partition::elements(j, limit)) ++hits[k];
    for (std::uint64_t k = 1; k <= limit; ++k) {
        EXPECT_EQ(hits[k], 1) << k;
        // Even k sit in block v_2(k) ≤ log2(limit); odd k in block (k+1)/2.
        if (k % 2 == 0) EXPECT_LE(Partition::block_of(k), 16);
        else EXPECT_EQ(Partition::block_of(k), static_cast<int>((k + 1) / 2));
    }
}

TEST(Partition, FirstBlocksAndTheirComplement) {
    // I_1..I_6 are disjoint; [1, 64] minus their union is exactly the part of
    // [1, 64] lying in blocks beyond 6 (the odd numbers 13, 15, ..., 63).
    const Partition p(6);
    std::vector<int> owner(65, 0);
    for (int j = 1; j <= p.j_max(); ++j) {
        for (std::uint64_t k : Partition::elements(j, 64)) {
            EXPECT_EQ(owner[k], 0) << k;
            owner[k] = j;
        }
    }
    for (std::uint64_t k = 1; k <= 64; ++k) {
        if (owner[k] == 0) {
            EXPECT_GT(Partition::block_of(k), 6);
            EXPECT_EQ(k % 2, 1u);
            EXPECT_GE(k, 13u);
        }
    }
}

TEST(Partition, OddAnchors) {
    for (int j = 1; j <= 16; ++j) EXPECT_EQ(Partition::elements(j, 1 << 17).front(), static_cast<std::uint64_t>(2 * j - 1));
}

TEST(Divergence, InverseSquareRootGrowsWithoutBound) {
    const auto sigma = DecaySequence::powerlog(0.0, 16, 1.0, 0.5);
    double prev = 0.0;
    for (std::uint64_t r = 16; r <= (1u << 22); r *= 4) {
        const DivergenceReport rep = block_tail_divergence_check(sigma, 1, r);
        EXPECT_GT(rep.block_sum, prev);
        EXPECT_TRUE(rep.chain_holds);
        prev = rep.block_sum;
    }
    EXPECT_GT(prev, 2.0);
}

TEST(Divergence, FiniteSupportStabilizes) {
    const DecaySequence sigma({1.0, 0.8, 0.5, 0.5, 0.3, 0.1});
    for (int j = 1; j <= 3; ++j) {
        const double a = block_tail_divergence_check(sigma, j, 100).block_sum;
        EXPECT_EQ(a, block_tail_divergence_check(sigma, j, 10000).block_sum);
    }
}

TEST(Divergence, ChainOnRandomMonotone) {
    tg::Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const DecaySequence sigma(tg::nonincreasing(rng, 10001));
        for (int j = 1; j <= 5; ++j) {
            const auto rep = block_tail_divergence_check(sigma, j, 10000);
            EXPECT_TRUE(rep.chain_holds);
            EXPECT_GE(rep.block_sum, rep.paired_sum);
            EXPECT_GE(rep.paired_sum, rep.averaged_sum);
            double direct = 0.0;
            for (std::uint64_t k : Partition::elements(j, 10000)) direct += sigma.at(k) * sigma.at(k);
            EXPECT_NEAR(rep.block_sum, direct, 1e-12 * std::max(1.0, direct));
        }
    }
}

TEST(BigIndex, LogAndValue) {
    const BigIndex two_200 = BigIndex(1) << 200;
    EXPECT_NEAR(log_of(two_200), 200 * std::log(2.0), 1e-10);
    EXPECT_NEAR(log_of(BigIndex(12345)), std::log(12345.0), 1e-14);
    const BigIndex huge = BigIndex(1) << 5000;
    EXPECT_NEAR(value_at(inverse_log(), huge), 1.0 / (5000 * std::log(2.0)), 1e-12);
    EXPECT_NEAR(value_at(inverse_log(), BigIndex(100)), 1.0 / std::log(102.0), 1e-15);
}

TEST(SelectIndices, ConstantSigmaInverseLogTau) {
    const auto sel = select_indices(constant_one(), inverse_log(), 6);
    ASSERT_EQ(sel.indices.size(), 7u);
    ASSERT_EQ(sel.thresholds.size(), 7u);
    for (int j = 1; j <= 7; ++j) {
        const double thr = std::pow(2.0, -0.5 * j) / 2.0;
        EXPECT_DOUBLE_EQ(sel.thresholds[static_cast<std::size_t>(j - 1)], thr);
        // smallest n with log(n+2) ≥ 1/thr
        const auto want = static_cast<long long>(std::ceil(std::exp(1.0L / thr) - 2.0L));
        const BigIndex& n = sel.indices[static_cast<std::size_t>(j - 1)];
        EXPECT_EQ(n, BigIndex(want)) << j;
        EXPECT_LE(value_at(inverse_log(), n), thr);
        EXPECT_GT(value_at(inverse_log(), n - 1), thr);
    }
    for (std::size_t i = 1; i < sel.indices.size(); ++i) EXPECT_LT(sel.indices[i - 1], sel.indices[i]);
}

TEST(SelectIndices, FiniteSupportTau) {
    const DecaySequence tau({1.0, 0.5, 0.25});
    const auto sel = select_indices(constant_one(), tau, 4);
    // τ_2 = 1/4 is already below 2^{-1/2}/2.
    EXPECT_EQ(sel.indices.front(), BigIndex(2));
    for (std::size_t i = 1; i < sel.indices.size(); ++i) EXPECT_EQ(sel.indices[i], sel.indices[i - 1] + 1);
}

TEST(SelectIndices, BudgetExhaustion) {
    const DecaySequence flat_tau({1.0}, TailModel::powerlog(0.0, 0.0));
    EXPECT_THROW(select_indices(constant_one(), flat_tau, 2, 40), std::runtime_error);
    EXPECT_THROW(select_indices(constant_one(), inverse_log(), 0), std::invalid_argument);
}

TEST(Composed, SingleOracleAndLinearity) {
    const std::vector<BlockOracle> one{{1, BigIndex(10), BigIndex(20), 0.5}};
    EXPECT_DOUBLE_EQ(composed_lower_bound(one, BigIndex(15)), std::pow(2.0, -0.5) * 0.5);
    EXPECT_THROW(composed_lower_bound(one, BigIndex(9)), std::out_of_range);
    EXPECT_THROW(composed_lower_bound(one, BigIndex(20)), std::out_of_range);

    const auto sel = select_indices(constant_one(), inverse_log(), 5);
    auto oracles = block_oracles(constant_one(), sel);
    ASSERT_EQ(oracles.size(), 5u);
    for (const auto& o : oracles) EXPECT_DOUBLE_EQ(o.lower_value, 0.5);
    const BigIndex probe = sel.indices[2] + 7;
    const double before = composed_lower_bound(oracles, probe);
    for (auto& o : oracles) o.lower_value *= 2.0;
    EXPECT_DOUBLE_EQ(composed_lower_bound(oracles, probe), 2.0 * before);
}

TEST(Composed, DominatesTauOnCoveredRange) {
    const auto tau = inverse_log();
    const auto sel = select_indices(constant_one(), tau, 4);
    const auto oracles = block_oracles(constant_one(), sel);
    const auto first = static_cast<std::uint64_t>(sel.indices.front());
    const auto last = static_cast<std::uint64_t>(sel.indices.back());
    for (std::uint64_t n = first; n < last; ++n)
        ASSERT_GE(composed_lower_bound(oracles, BigIndex(n)), tau.at(n)) << n;
}
