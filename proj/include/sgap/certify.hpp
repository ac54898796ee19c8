// Certified lower bounds for the minimal worst-case integration error
// e_n(H_γ, INT) and, where noted, for sampling numbers g_n.
//
// A certificate at n states e_n² ≥ bound_sq (or g_n² ≥ bound_sq when
// `quantity` is sampling).  All bounds rest on the Gram criterion
//   (K(x_j,x_k))_{jk} ⪰ α (h(x_j) h(x_k))_{jk} for all node sets of size n
//   ⟺  e_n² ≥ ‖h‖² - 1/α.
#pragma once

#include "sgap/seq.hpp"
#include "sgap/space.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sgap {

enum class CertificateTag { convolution_square, tail_block, interleave_case1, interleave_case2, regular };

std::string_view to_string(CertificateTag tag);
std::optional<CertificateTag> parse_certificate_tag(std::string_view text);

enum class BoundQuantity { integration, sampling };

struct Certificate {
    std::int64_t n = 0;
    double bound_sq = 0.0;
    CertificateTag tag = CertificateTag::tail_block;
    BoundQuantity quantity = BoundQuantity::integration;
    /// Witness data (r, n(r), realized constants, ...) as printable values.
    std::map<std::string, double> params;
};

/// λ_min((M∘M) - (1/n) d dᵀ), d = diag(M).  Nonnegative for PSD M.
double schur_rank1_gap(const Eigen::MatrixXd& m);

struct CriterionResult {
    bool holds = false;
    double min_eigenvalue = 0.0;
    double tolerance = 0.0;
};

/// λ_min(G - α r rᵀ) ≥ -tol with G the Gram matrix at `nodes`, r_i = Re h(x_i),
/// tol = 1e-8·trace(G) + n·(kernel truncation remainder).
CriterionResult certificate_criterion_check(const KernelSpec& spec, const TrigPolynomial& h,
                                            double alpha, std::span<const double> nodes);

/// For γ = convolution_square(μ): e_n² ≥ max{0, γ_0²(1 - nγ_0²/‖γ‖²)}.
Certificate convolution_square_lower(const SpectralSequence& gamma, std::int64_t n);

/// n(r) = ⌊(Σ_{j≥r} γ_j²)² / (2 Σ_{j≥r} γ_j⁴)⌋ evaluated on tail enclosures.
struct BlockCount {
    std::int64_t n_lo = 0;  // floor with the smallest admissible ratio
    std::int64_t n_hi = 0;  // floor with the largest admissible ratio
    Estimate sq;            // Σ_{j≥r} γ_j²
    Estimate quartic;       // Σ_{j≥r} γ_j⁴
};

/// Tail-block bounds for γ nonincreasing on N_0 with γ_{-k} ≥ γ_k.  The
/// sequence γ̃ = convolution square of μ_k = γ_k² (Σ_{j≥r} γ_j²)^{-1/2}, k ≥ r,
/// is dominated by γ, so e_n² ≥ g(1 - n g/S2) with S2 = Σ_{j≥r} γ_j²,
/// S4 = Σ_{j≥r} γ_j⁴ and g = S4/S2.  At n = n(r) this is at least g/2, which
/// exceeds S2/(4(n(r)+1)); the sharper-looking S2/(2(n(r)+1)) does not follow and
/// fails on flat blocks.  Hypotheses are checked once at construction.
class TailBlockScanner {
public:
    explicit TailBlockScanner(const SpectralSequence& gamma);

    BlockCount count(std::int64_t r) const;
    /// g(1 - n g/S2) for block r at any n, using the conservative ends of both
    /// sums and clamped to [0, γ_0²].
    double bound_sq(std::int64_t r, std::int64_t n) const;
    /// Certificate at n(r) (lower end when the remainder leaves the floor
    /// ambiguous).
    Certificate at(std::int64_t r) const;

    const SpectralSequence& gamma() const { return gamma_; }
    const SuffixSums& sums() const { return sums_; }

private:
    SpectralSequence gamma_;
    SuffixSums sums_;
};

Certificate tail_block_lower(const SpectralSequence& gamma, std::int64_t r);

/// For γ = interleave(a) and r = 1..r_max: at n(r) when n(r) ≥ 2r (integration
/// bound from the tail block), otherwise at 2r with g_{2r}² ≥ a_{2r}² = γ_r².
std::vector<Certificate> interleaved_lower_schedule(const DecaySequence& a, std::int64_t r_max);

struct RegularScanOptions {
    std::int64_t r_budget = 1 << 20;  // largest r tried
    std::int64_t check_first = 1;     // range for γ_{2k} ≥ b γ_k
    std::optional<std::int64_t> check_last;
};

/// Bounds for b-regular γ (γ_{2k} ≥ b γ_k): for each n the scan takes the
/// smallest r with n(r) ≥ n and certifies the block-r bound at n itself.  Parameters report
/// r, n(r), the realized ratio n(r)/n and the measured constant
/// c = bound_sq / ((1/n) Σ_{j≥n} γ_j²).
class RegularScanner {
public:
    RegularScanner(const SpectralSequence& gamma, double b, const RegularScanOptions& options = {});

    Certificate at(std::int64_t n) const;
    const RegularityReport& regularity() const { return regularity_; }

private:
    TailBlockScanner blocks_;
    double b_;
    RegularScanOptions options_;
    RegularityReport regularity_;
};

Certificate regular_lower(const SpectralSequence& gamma, double b, std::int64_t n,
                          const RegularScanOptions& options = {});

struct GrowthReport {
    bool holds = true;
    std::int64_t r0 = 0;         // n(r) ≥ 1 for all scanned r ≥ r0
    std::int64_t checked = 0;
    double max_ratio = 0.0;      // max n(2r)/n(r) over r ≥ r0
    std::int64_t argmax = 0;
    double limit = 0.0;          // 2/b⁴
};

/// Checks n(2r) ≤ (2/b⁴) n(r) for r0 ≤ r ≤ r_max, comparing the upper end of
/// n(2r) against the lower end of n(r).
GrowthReport regular_growth_scan(const SpectralSequence& gamma, double b, std::int64_t r_max);

/// m(n) = ⌈n + Σ_{k>n} γ_k² / γ_n²⌉: a conjectural sample count, not a bound.
std::int64_t heuristic_mn(const SpectralSequence& gamma, std::int64_t n);

}  // namespace sgap
