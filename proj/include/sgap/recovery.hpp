// Optimal recovery and quadrature on H_γ: approximation numbers, optimal
// weights for given nodes, worst-case quadrature errors and a node search
// giving upper envelopes for sampling numbers on truncated spaces.
#pragma once

#include "sgap/sampling.hpp"
#include "sgap/seq.hpp"
#include "sgap/space.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgap {

/// The radicand of a worst-case error came out clearly negative: the Gram
/// matrix and the representer are inconsistent (usually a bandwidth too small
/// for the nodes).
class InconsistentTruncation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// (a_0, ..., a_{count-1}): the nonincreasing rearrangement of γ.
DecaySequence approximation_numbers(const SpectralSequence& gamma, std::size_t count);

/// Weights minimizing ‖R - Σ w_i K(·, x_i)‖ over real w, from the Gram system
/// solved by pseudo-inverse (eigenvalues below 1e-12·λ_max dropped).
QuadratureRule optimal_quadrature_weights(const KernelSpec& spec, std::span<const double> nodes,
                                          const TrigPolynomial& h_rep);

struct QuadratureError {
    /// Error with the truncated kernel; the full error lies in
    /// [value, value + remainder].
    Estimate error;
    /// The radicand was slightly negative and clamped to zero.
    bool clamped = false;
};

/// sqrt(‖R‖² - 2 Σ w_i Re R(x_i) + Σ w_i w_j K(x_i, x_j)) for real weights.
QuadratureError quadrature_worst_case_error(const KernelSpec& spec, const QuadratureRule& rule,
                                            const TrigPolynomial& h_rep);

enum class EquispacedWeights { optimal, midpoint };

struct EquispacedResult {
    QuadratureRule rule;
    Estimate error;
    /// Σ_{θ≠0} γ_{θn}²: the aliased mass seen by n equispaced nodes.
    Estimate aliased_mass;
};

/// Integration with n equispaced nodes j/n.  The Gram matrix is circulant, so
/// the optimal rule has equal weights w with n·w = γ_0²/(γ_0² + T),
/// T = Σ_{θ≠0} γ_{θn}², and squared error γ_0² T/(γ_0² + T); the midpoint
/// rule has squared error T.  T is enclosed from stored values and tails.
EquispacedResult equispaced_integration(const SpectralSequence& gamma, std::int64_t n,
                                        EquispacedWeights kind = EquispacedWeights::optimal);

/// Worst-case L₂ error of optimal recovery from samples at `nodes` on the
/// space truncated to |j| ≤ bandwidth: σ_max(Γ Z) with Z a basis of ker(V Γ).
double optimal_recovery_error(const SpectralSequence& gamma, std::int64_t bandwidth,
                              std::span<const double> nodes);

struct NodeSearchOptions {
    std::int64_t grid = 0;          // G; 0 disables the grid search
    std::uint64_t budget = 20000;   // max node sets for exhaustive grid search
    int restarts = 64;              // jittered random restarts otherwise
    std::uint64_t seed = 1;
};

struct NodeSearchResult {
    double value = 0.0;
    bool exhaustive = false;
    std::vector<double> best_nodes;
};

/// Smallest optimal-recovery error over searched node sets of size n
/// (equispaced, then all grid subsets if within budget, else jittered
/// restarts).  An upper bound on g_n of the truncated space.
NodeSearchResult brute_force_gn(const SpectralSequence& gamma, std::int64_t n,
                                std::int64_t bandwidth, const NodeSearchOptions& options = {});

/// One row of a sandwich table.  `lower_sq` is a certified lower bound on the
/// squared minimal integration error, `measured` an achieved error (exact
/// value within [measured, measured + remainder]), `upper` a proved bound.
struct BoundReport {
    std::int64_t n = 0;
    std::optional<double> lower_sq;
    std::string lower_tag;
    std::optional<double> measured;
    double measured_remainder = 0.0;
    std::optional<double> upper;

    /// Lower ≤ measured + remainder and measured ≤ upper, up to `tol`, for
    /// the populated fields.
    bool consistent(double tol = 1e-8) const;

    friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

}  // namespace sgap
