// Block structure for combining integration lower bounds over an orthogonal
// sum H = ⊕_j H_j when the singular values are not square-summable.
//
// The positive integers split into I_j = {2j-1} ∪ {k ≡ 2^j mod 2^{j+1}},
// j ≥ 1.  Indices n_0 < n_1 < ... are chosen greedily with
// τ(n_{j-1}) ≤ 2^{-j/2} σ_{2j-1}/2, and on [n_{j-1}, n_j) the bound of block j,
// scaled by 2^{-j/2}, dominates τ.  For slowly decaying τ these indices are
// astronomically large, so they are arbitrary-precision integers.
#pragma once

#include "sgap/seq.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace sgap {

using BigIndex = boost::multiprecision::cpp_int;

class Partition {
public:
    explicit Partition(int j_max);

    int j_max() const { return j_max_; }

    /// The unique j ≥ 1 with k ∈ I_j (k ≥ 1); may exceed j_max.
    static int block_of(std::uint64_t k);
    /// k ∈ I_j from the closed form.
    static bool contains(int j, std::uint64_t k);
    /// Elements of I_j in [1, limit], increasing.
    static std::vector<std::uint64_t> elements(int j, std::uint64_t limit);

private:
    int j_max_;
};

struct DivergenceReport {
    double block_sum = 0.0;     // Σ_{k ∈ I_j, k ≤ R} σ_k²
    double paired_sum = 0.0;    // Σ_{l=1}^{L} σ_{l·2^{j+1}}², L = ⌊R/2^{j+1}⌋
    double averaged_sum = 0.0;  // 2^{-(j+1)} Σ_{k=2^{j+1}}^{(L+1)2^{j+1}-1} σ_k²
    bool chain_holds = true;    // block_sum ≥ paired_sum ≥ averaged_sum, termwise
};

/// Partial sums of σ² over I_j up to R together with the comparison chain
/// that shows Σ_{k∈I_j} σ_k² = ∞ whenever Σ σ_k² = ∞.  σ must be nonincreasing.
DivergenceReport block_tail_divergence_check(const DecaySequence& sigma, int j, std::uint64_t limit);

/// log(n) for n ≥ 1.
double log_of(const BigIndex& n);

/// v_n for an arbitrary-precision index, using the tail model past the
/// stored prefix (through log n once n leaves double range).
double value_at(const DecaySequence& v, const BigIndex& n);

struct IndexSelection {
    std::vector<BigIndex> indices;   // n_0, ..., n_{j_max}
    std::vector<double> thresholds;  // 2^{-j/2} σ_{2j-1}/2 for j = 1..j_max+1
};

/// Greedy smallest n_{j-1} > n_{j-2} with τ(n_{j-1}) ≤ 2^{-j/2} σ_{2j-1}/2,
/// j = 1..j_max+1.  τ must be nonincreasing.  Throws when τ stays above a
/// threshold up to 2^max_bits.
IndexSelection select_indices(const DecaySequence& sigma, const DecaySequence& tau, int j_max,
                              unsigned max_bits = 1u << 16);

/// Integration lower bound available on block j for fewer than `end` nodes.
struct BlockOracle {
    int j = 1;
    BigIndex start;  // n_{j-1}
    BigIndex end;    // n_j
    double lower_value = 0.0;
};

/// Oracles j = 1..j_max with lower_value = σ_{2j-1}/2 on [n_{j-1}, n_j).
std::vector<BlockOracle> block_oracles(const DecaySequence& sigma, const IndexSelection& selection);

/// 2^{-j/2} · lower_value_j for the oracle with start ≤ n < end.
/// Throws std::out_of_range outside [n_0, n_{j_max}).
double composed_lower_bound(const std::vector<BlockOracle>& oracles, const BigIndex& n);

}  // namespace sgap
