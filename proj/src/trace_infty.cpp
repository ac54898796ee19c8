#include "sgap/trace_infty.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sgap {

Partition::Partition(int j_max) : j_max_(j_max) {
    if (j_max < 1) throw std::invalid_argument("Partition: j_max must be at least 1");
}

int Partition::block_of(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("Partition: indices start at 1");
    if (k % 2 == 1) return static_cast<int>((k + 1) / 2);
    return std::countr_zero(k);
}

bool Partition::contains(int j, std::uint64_t k) {
    if (j < 1 || k == 0) return false;
    if (k == 2 * static_cast<std::uint64_t>(j) - 1) return true;
    if (j >= 63) return j == 63 && k == (std::uint64_t{1} << 63);
    const std::uint64_t period = std::uint64_t{1} << (j + 1);
    return k % period == (std::uint64_t{1} << j);
}

std::vector<std::uint64_t> Partition::elements(int j, std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (j < 1) return out;
    const std::uint64_t anchor = 2 * static_cast<std::uint64_t>(j) - 1;
    bool anchor_done = anchor > limit;
    if (j < 63) {
        const std::uint64_t first = std::uint64_t{1} << j;
        const std::uint64_t period = first << 1;
        for (std::uint64_t k = first; k <= limit; k += period) {
            if (!anchor_done && anchor < k) {
                out.push_back(anchor);
                anchor_done = true;
            }
            out.push_back(k);
            if (limit - k < period) break;
        }
    }
    if (!anchor_done) out.push_back(anchor);
    return out;
}

DivergenceReport block_tail_divergence_check(const DecaySequence& sigma, int j, std::uint64_t limit) {
    if (j < 1 || j > 60) throw std::invalid_argument("block_tail_divergence_check: j out of range");
    DivergenceReport rep;
    for (std::uint64_t k : Partition::elements(j, limit)) {
        const double s = sigma.at(k);
        rep.block_sum += s * s;
    }
    const std::uint64_t half = std::uint64_t{1} << j;
    const std::uint64_t period = half << 1;
    const std::uint64_t blocks = limit / period;
    for (std::uint64_t l = 1; l <= blocks; ++l) {
        const double member = sigma.at((2 * l - 1) * half);
        const double paired = sigma.at(l * period);
        double window = 0.0;
        for (std::uint64_t k = l * period; k < (l + 1) * period; ++k) window += sigma.at(k) * sigma.at(k);
        window /= static_cast<double>(period);
        rep.paired_sum += paired * paired;
        rep.averaged_sum += window;
        if (member * member < paired * paired || paired * paired < window * (1.0 - 1e-12))
            rep.chain_holds = false;
    }
    if (rep.block_sum < rep.paired_sum || rep.paired_sum < rep.averaged_sum * (1.0 - 1e-12))
        rep.chain_holds = false;
    return rep;
}

double log_of(const BigIndex& n) {
    if (n <= 0) throw std::domain_error("log_of: nonpositive argument");
    const auto bits = static_cast<long>(boost::multiprecision::msb(n));
    if (bits < 53) return std::log(n.convert_to<double>());
    const long shift = bits - 52;
    const BigIndex top = n >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

double value_at(const DecaySequence& v, const BigIndex& n) {
    if (n < 0) throw std::invalid_argument("value_at: negative index");
    static const BigIndex exact_limit = BigIndex(1) << 53;
    if (n < exact_limit) return v.at(n.convert_to<std::size_t>());
    return v.tail().value_at_log(log_of(n));
}

IndexSelection select_indices(const DecaySequence& sigma, const DecaySequence& tau, int j_max,
                              unsigned max_bits) {
    if (j_max < 1) throw std::invalid_argument("select_indices: j_max must be at least 1");
    IndexSelection sel;
    BigIndex next = 0;
    for (int j = 1; j <= j_max + 1; ++j) {
        const double threshold =
            std::pow(2.0, -0.5 * j) * sigma.at(static_cast<std::size_t>(2 * j - 1)) / 2.0;
        sel.thresholds.push_back(threshold);
        const auto below = [&](const BigIndex& n) { return value_at(tau, n) <= threshold; };

        BigIndex found = next;
        if (!below(next)) {
            // τ(lo) > threshold ≥ τ(hi) after the doubling phase.
            BigIndex lo = next;
            BigIndex step = 1;
            BigIndex hi = next + step;
            while (!below(hi)) {
                if (boost::multiprecision::msb(hi) >= max_bits)
                    throw std::runtime_error("select_indices: tau stays above " + std::to_string(threshold) +
                                             " up to 2^" + std::to_string(max_bits));
                lo = hi;
                step <<= 1;
                hi = next + step;
            }
            while (hi - lo > 1) {
                const BigIndex mid = (lo + hi) >> 1;
                if (below(mid))
                    hi = mid;
                else
                    lo = mid;
            }
            found = hi;
        }
        sel.indices.push_back(found);
        next = found + 1;
    }
    return sel;
}

std::vector<BlockOracle> block_oracles(const DecaySequence& sigma, const IndexSelection& selection) {
    std::vector<BlockOracle> out;
    for (std::size_t j = 1; j < selection.indices.size(); ++j) {
        BlockOracle o;
        o.j = static_cast<int>(j);
        o.start = selection.indices[j - 1];
        o.end = selection.indices[j];
        o.lower_value = sigma.at(2 * j - 1) / 2.0;
        out.push_back(std::move(o));
    }
    return out;
}

double composed_lower_bound(const std::vector<BlockOracle>& oracles, const BigIndex& n) {
    for (const BlockOracle& o : oracles) {
        if (o.start <= n && n < o.end) return std::pow(2.0, -0.5 * o.j) * o.lower_value;
    }
    throw std::out_of_range("composed_lower_bound: n outside the selected index range");
}

}  // namespace sgap
