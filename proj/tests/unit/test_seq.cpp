#include "sgap/seq.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace sgap;
namespace tg = sgap::testgen;

namespace {

// Σ_{j≥lo, j∈Z} μ_j μ_{j+ℓ} by direct double loop over a map.
std::map<std::int64_t, double> brute_conv(const SpectralSequence& mu) {
    std::map<std::int64_t, double> out;
    const std::int64_t m = mu.bandwidth();
    for (std::int64_t j = -m; j <= m; ++j)
        for (std::int64_t k = -m; k <= m; ++k) out[k - j] += mu.at(j) * mu.at(k);
    return out;
}

std::vector<double> sorted_values(const SpectralSequence& g) {
    std::vector<double> v;
    for (std::int64_t j = -g.bandwidth(); j <= g.bandwidth(); ++j) v.push_back(g.at(j));
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace

TEST(TailModel, PowerlogValuesAndPlateau) {
    const TailModel t = TailModel::powerlog(0.5, 1.0, 3.0);
    EXPECT_DOUBLE_EQ(t.value_at(10.0), 1.0 / (std::sqrt(10.0) * std::log(10.0)));
    EXPECT_DOUBLE_EQ(t.value_at(0.0), t.value_at(3.0));
    EXPECT_THROW(TailModel::powerlog(0.5, 1.0, 1.0), SequenceError);
}

TEST(TailModel, GeometricSumIsExact) {
    const TailModel t = TailModel::geometric(0.5);
    const Estimate s = t.sum_power(3.0, 2.0);
    EXPECT_NEAR(s.value, std::pow(4.0, -3.0) * 4.0 / 3.0, 1e-15);
    EXPECT_EQ(s.remainder, 0.0);
}

TEST(TailModel, InverseSquareSumAgainstZeta) {
    // Σ_{j≥J} j^{-2} = ζ(2) - Σ_{j<J} j^{-2}
    const TailModel t = TailModel::powerlog(1.0, 0.0, 1.0);
    for (int first : {1, 2, 5, 40, 1000}) {
        long double head = 0.0L;
        for (int j = 1; j < first; ++j) head += 1.0L / (static_cast<long double>(j) * j);
        const double exact = static_cast<double>(std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 6.0L - head);
        const Estimate s = t.sum_power(first, 2.0);
        EXPECT_LE(s.value, exact * (1 + 1e-12)) << first;
        EXPECT_GE(s.upper(), exact * (1 - 1e-12)) << first;
    }
}

TEST(TailModel, LogTailEnclosuresAreConsistentUnderSplitting) {
    // Σ_{j≥J} = Σ_{J≤j<K} + Σ_{j≥K}: both enclosures must overlap.
    const TailModel t = TailModel::powerlog(0.5, 1.0, 3.0);
    for (double first : {3.0, 10.0, 100.0}) {
        const double split = first * 50.0;
        long double mid = 0.0L;
        for (double j = first; j < split; j += 1.0) mid += std::pow(t.value_at(j), 2.0);
        const Estimate a = t.sum_power(first, 2.0);
        const Estimate b = t.sum_power(split, 2.0);
        const double lo = static_cast<double>(mid) + b.value;
        const double hi = static_cast<double>(mid) + b.upper();
        EXPECT_LE(a.value, hi * (1 + 1e-12));
        EXPECT_LE(lo, a.upper() * (1 + 1e-12));
    }
}

TEST(TailModel, DivergentTailThrows) {
    const TailModel t = TailModel::powerlog(0.5, 0.5, 3.0);
    EXPECT_FALSE(t.summable(2.0));
    EXPECT_THROW(t.sum_power(10.0, 2.0), DivergenceError);
}

TEST(TailModel, AffineComposition) {
    const TailModel t = TailModel::powerlog(0.5, 1.0, 3.0);
    const TailModel u = t.affine(2.0, -1.0).affine(3.0, 0.0);
    EXPECT_DOUBLE_EQ(u.value_at(5.0), t.value_at(29.0));
}

TEST(TailModel, TextRoundTrip) {
    for (const TailModel& t : {TailModel::none(), TailModel::geometric(0.25),
                               TailModel::powerlog(0.5, 2.0, 3.0), TailModel::powerlog(0.5, 0.5, 0.0, 2.0)}) {
        EXPECT_EQ(TailModel::parse(t.to_string()), t);
    }
    EXPECT_THROW(TailModel::geometric(0.5).affine(2.0, 0.0).to_string(), SequenceError);
}

TEST(DecaySequence, RejectsIncreasingOrNegative) {
    EXPECT_THROW(DecaySequence({1.0, 2.0}), SequenceError);
    EXPECT_THROW(DecaySequence({1.0, -0.5}), SequenceError);
    EXPECT_THROW(DecaySequence({0.001}, TailModel::geometric(0.5)), SequenceError);
}

TEST(ConvolutionSquare, SingleSpike) {
    const auto g = convolution_square(SpectralSequence::from_map({{0, 1.0}}));
    EXPECT_DOUBLE_EQ(g.at(0), 1.0);
    EXPECT_EQ(g.at(1), 0.0);
    EXPECT_EQ(g.at(-1), 0.0);
}

TEST(ConvolutionSquare, TwoSpike) {
    const auto g = convolution_square(SpectralSequence::from_map({{0, 1.0}, {1, 1.0}}));
    EXPECT_NEAR(g.at(0), std::sqrt(2.0), 1e-15);
    EXPECT_DOUBLE_EQ(g.at(1), 1.0);
    EXPECT_DOUBLE_EQ(g.at(-1), 1.0);
    EXPECT_EQ(g.at(2), 0.0);
    EXPECT_EQ(g.bandwidth(), 2);
    EXPECT_EQ(g.provenance(), Provenance::convolution_square);
}

TEST(ConvolutionSquare, Rejections) {
    EXPECT_THROW(convolution_square(SpectralSequence::from_map({{0, 0.0}})), SequenceError);
    EXPECT_THROW(convolution_square(SpectralSequence::from_values({0.2, -1.0, 0.3})), SequenceError);
    EXPECT_THROW(convolution_square(SpectralSequence::powerlog(1.0, 8)), SequenceError);
}

TEST(ConvolutionSquare, MatchesBruteForceAndIdentities) {
    tg::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const bool one_sided = trial % 2 == 0;
        const auto mu = tg::random_mu(rng, tg::uniform_int(rng, 1, 9), one_sided);
        const auto g = convolution_square(mu);
        const auto brute = brute_conv(mu);
        double sum = 0.0;
        double sumsq = 0.0;
        for (std::int64_t j = -mu.bandwidth(); j <= mu.bandwidth(); ++j) {
            sum += mu.at(j);
            sumsq += mu.at(j) * mu.at(j);
        }
        for (const auto& [ell, v] : brute) {
            EXPECT_NEAR(g.at(ell) * g.at(ell), v, 1e-12 * std::max(1.0, v)) << ell;
            EXPECT_EQ(g.at(ell), g.at(-ell));
        }
        EXPECT_NEAR(norm_sq(g).value, sum * sum, 1e-12 * sum * sum);
        EXPECT_NEAR(g.at(0) * g.at(0), sumsq, 1e-12 * sumsq);
    }
}

TEST(ConvolutionSquare, TailBlockWeightsAreDominated) {
    // μ_k = c γ_k² 1_{k≥r}, c = (Σ_{ℓ≥r} γ_ℓ²)^{-1/2} gives γ̃_ℓ ≤ γ_ℓ.
    const auto gamma = SpectralSequence::powerlog(1.0, 64).truncated(64);
    for (std::int64_t r : {0, 3, 10, 30}) {
        const double tail = tail_sum_sq(gamma, r).value;
        std::map<std::int64_t, double> e;
        for (std::int64_t k = r; k <= 64; ++k) e[k - r] = gamma.at(k) * gamma.at(k) / std::sqrt(tail);
        const auto tilde = convolution_square(SpectralSequence::from_map(e));
        for (std::int64_t ell = -tilde.bandwidth(); ell <= tilde.bandwidth(); ++ell)
            EXPECT_LE(tilde.at(ell), gamma.at(ell) * (1 + 1e-12)) << r << " " << ell;
    }
}

TEST(Interleave, IndexBookkeeping) {
    const auto g = interleave(DecaySequence({4, 3, 2, 1}));
    EXPECT_EQ(g.at(0), 4);
    EXPECT_EQ(g.at(-1), 3);
    EXPECT_EQ(g.at(1), 2);
    EXPECT_EQ(g.at(-2), 1);
    EXPECT_EQ(g.at(2), 0);
}

TEST(Interleave, ConstantGivesPlateau) {
    const auto g = interleave(DecaySequence({2, 2, 2, 2, 2}));
    for (std::int64_t j = -2; j <= 2; ++j) EXPECT_EQ(g.at(j), 2);
    EXPECT_TRUE(g.is_symmetric());
}

TEST(Interleave, TailsFollowTheGenerator) {
    const auto a = DecaySequence::powerlog(1.0, 9);
    const auto g = interleave(a);
    for (std::int64_t k = 1; k < 40; ++k) {
        EXPECT_DOUBLE_EQ(g.at(k), a.at(static_cast<std::size_t>(2 * k)));
        EXPECT_DOUBLE_EQ(g.at(-k), a.at(static_cast<std::size_t>(2 * k - 1)));
    }
    EXPECT_TRUE(g.negative_side_dominates());
    EXPECT_TRUE(g.nonincreasing_on_nonnegative());
}

TEST(Rearrangement, Sorting) {
    const auto r = rearrangement(SpectralSequence::from_map({{0, 4}, {-1, 3}, {1, 2}, {-2, 1}}));
    EXPECT_EQ(r.values(), (std::vector<double>{4, 3, 2, 1, 0}));
}

TEST(Rearrangement, InverseIndexWithCutoff) {
    std::map<std::int64_t, double> e{{0, 2.0}};
    for (std::int64_t k = 1; k <= 3; ++k) e[k] = e[-k] = 1.0 / static_cast<double>(k);
    const auto r = rearrangement(SpectralSequence::from_map(e), 9);
    const std::vector<double> want{2, 1, 1, 0.5, 0.5, 1.0 / 3, 1.0 / 3, 0, 0};
    EXPECT_EQ(r.values(), want);
}

TEST(Rearrangement, InterleaveRoundTripAndIdempotence) {
    tg::Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const auto a = DecaySequence(tg::nonincreasing(rng, 50));
        const auto g = interleave(a);
        const auto r = rearrangement(g, a.size());
        EXPECT_EQ(r.values(), a.values());
        EXPECT_EQ(rearrangement(r).values(), r.values());
    }
}

TEST(Rearrangement, MatchesSortOracleAndIsPermutationInvariant) {
    tg::Rng rng(6);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = tg::random_spectral(rng, tg::uniform_int(rng, 0, 20));
        EXPECT_EQ(rearrangement(g).values(), sorted_values(g));
        std::vector<double> c = g.stored();
        std::reverse(c.begin(), c.end());
        EXPECT_EQ(rearrangement(SpectralSequence::from_values(c)).values(), sorted_values(g));
    }
}

TEST(Rearrangement, MergesTails) {
    const auto g = SpectralSequence::powerlog(1.0, 5);
    const auto r = rearrangement(g, 30);
    EXPECT_DOUBLE_EQ(r.at(0), g.at(0));
    for (std::size_t n = 1; n < 30; ++n) EXPECT_LE(r.at(n), r.at(n - 1));
    // symmetric: a_{2k-1} = a_{2k} = γ_k beyond the plateau
    for (std::int64_t k = 4; k < 14; ++k) {
        EXPECT_DOUBLE_EQ(r.at(static_cast<std::size_t>(2 * k - 1)), g.at(k));
        EXPECT_DOUBLE_EQ(r.at(static_cast<std::size_t>(2 * k)), g.at(k));
    }
    EXPECT_THROW(rearrangement(g), SequenceError);
}

TEST(TailSums, FiniteSupport) {
    const auto g = SpectralSequence::from_values({1, 2, 1});
    const Estimate s = tail_sum_sq(g, 0);
    EXPECT_EQ(s.value, 5.0);
    EXPECT_EQ(s.remainder, 0.0);
}

TEST(TailSums, Geometric) {
    const auto a = DecaySequence::geometric(0.5, 8);
    for (std::size_t n : {0u, 3u, 8u, 20u}) {
        const double want = std::pow(4.0, -static_cast<double>(n)) * 4.0 / 3.0;
        EXPECT_NEAR(tail_sum_sq(a, n).value, want, 1e-15);
    }
}

TEST(TailSums, PowerlogTwoBandwidthsAgreeWithinRemainder) {
    const auto coarse = SpectralSequence::powerlog(1.0, 1'000'000);
    const auto fine = SpectralSequence::powerlog(1.0, 10'000'000);
    const Estimate a = tail_sum_sq(coarse, 3);
    const Estimate b = tail_sum_sq(fine, 3);
    EXPECT_LE(std::abs(a.value - b.value), a.remainder + 1e-12);
    EXPECT_LE(b.remainder, a.remainder);
    EXPECT_LE(a.value, b.upper() + 1e-12);
    EXPECT_LE(b.value, a.upper() + 1e-12);
}

TEST(TailSums, OuterAndNorm) {
    const auto g = SpectralSequence::from_values({1, 2, 3, 4, 5});
    EXPECT_EQ(outer_sum_sq(g, 1).value, 1.0 + 25.0);
    EXPECT_EQ(norm_sq(g).value, 55.0);
    EXPECT_THROW(norm_sq(SpectralSequence::powerlog(0.5, 10)), DivergenceError);
}

TEST(SuffixSums, MatchesDirectTailSums) {
    const auto g = SpectralSequence::powerlog(2.0, 300);
    const SuffixSums s(g);
    for (std::int64_t r : {0, 1, 7, 150, 300, 301, 5000}) {
        const Estimate want2 = tail_sum_power(g, r, 2.0);
        const Estimate want4 = tail_sum_power(g, r, 4.0);
        EXPECT_NEAR(s.sq(r).value, want2.value, 1e-13);
        EXPECT_NEAR(s.quartic(r).value, want4.value, 1e-13);
        EXPECT_NEAR(s.sq(r).remainder, want2.remainder, 1e-15);
    }
}

TEST(Regularity, InverseSqrt) {
    std::vector<double> v(4097);
    v[0] = 1.0;
    for (std::size_t n = 1; n < v.size(); ++n) v[n] = 1.0 / std::sqrt(static_cast<double>(n));
    const DecaySequence s(v);
    EXPECT_TRUE(check_b_regular(s, std::pow(2.0, -0.5) * (1 - 1e-12), 1).regular);
    const auto fail = check_b_regular(s, 0.8, 1);
    EXPECT_FALSE(fail.regular);
    EXPECT_NEAR(fail.min_ratio, std::pow(2.0, -0.5), 1e-12);
}

TEST(Regularity, GeometricFailsEventually) {
    const auto s = DecaySequence::geometric(0.5, 200);
    const auto rep = check_b_regular(s, 1e-6, 1);
    EXPECT_FALSE(rep.regular);
}

TEST(Regularity, PowerlogRatioMinimumSitsAtThePlateauEdge) {
    // k^{-1/2} log^{-1} k for k ≥ 3: the smallest ratio v_{2n}/v_n is at n = 3.
    const auto s = DecaySequence::powerlog(1.0, 200'001);
    const auto rep = check_b_regular(s, 0.43, 3, 100'000);
    EXPECT_TRUE(rep.regular);
    EXPECT_EQ(rep.argmin, 3u);
    EXPECT_NEAR(rep.min_ratio, s.at(6) / s.at(3), 1e-15);
    EXPECT_FALSE(check_b_regular(s, 0.6, 3, 100'000).regular);
    EXPECT_TRUE(check_b_regular(s, 0.6, 49, 100'000).regular);
    EXPECT_FALSE(check_b_regular(s, 0.6, 48, 100'000).regular);
}

TEST(Regularity, ReportsInsufficientRange) {
    const auto rep = check_b_regular(DecaySequence({1.0, 0.5}), 0.5, 3);
    EXPECT_EQ(rep.checked, 0u);
    EXPECT_FALSE(rep.note.empty());
}

TEST(TextFormat, RoundTrip) {
    tg::Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = tg::random_spectral(rng, tg::uniform_int(rng, 0, 12));
        EXPECT_EQ(parse_sequence(emit_sequence(g)).spectral->stored(), g.stored());
        const auto a = DecaySequence(tg::nonincreasing(rng, 15));
        EXPECT_EQ(parse_sequence(emit_sequence(a)).decay->values(), a.values());
    }
    const auto p = SpectralSequence::powerlog(1.0, 10);
    const auto back = parse_sequence(emit_sequence(p)).spectral;
    EXPECT_EQ(back->stored(), p.stored());
    EXPECT_EQ(back->positive_tail(), p.positive_tail());
}

TEST(TextFormat, MissingEntriesComeFromTheTail) {
    const auto parsed = parse_sequence("kind=spectral bandwidth=4 tail=geometric 0.5\n0 1\n");
    ASSERT_TRUE(parsed.spectral);
    EXPECT_DOUBLE_EQ(parsed.spectral->at(3), 0.125);
    EXPECT_DOUBLE_EQ(parsed.spectral->at(-4), 0.0625);
    const auto zeros = parse_sequence("kind=spectral bandwidth=2 tail=none\n1 0.5\n");
    EXPECT_EQ(zeros.spectral->at(0), 0.0);
}

TEST(TextFormat, Errors) {
    EXPECT_THROW(parse_sequence("bandwidth=2 kind=spectral tail=none\n"), SequenceError);
    EXPECT_THROW(parse_sequence("kind=spectral bandwidth=1 tail=none\n5 1\n"), SequenceError);
    EXPECT_THROW(parse_sequence("kind=matrix bandwidth=1 tail=none\n"), SequenceError);
    EXPECT_THROW(parse_sequence("kind=decay bandwidth=1 tail=none\n0 x\n"), std::invalid_argument);
}
