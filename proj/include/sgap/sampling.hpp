// Dirichlet-kernel recovery S_n and the midpoint rule Q_n on 2n+1 equispaced
// nodes, their exact errors in coefficient space, and the classical upper bound
//   e(Q_n) ≤ e(S_n) ≤ 2 max{ γ_{n+1}, ((1/n) Σ_{k>n} γ_k²)^{1/2} }.
#pragma once

#include "sgap/seq.hpp"
#include "sgap/space.hpp"

#include <cstdint>
#include <vector>

namespace sgap {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    QuadratureRule() = default;
    /// Nodes are reduced mod 1; lengths must agree.
    QuadratureRule(std::vector<double> nodes, std::vector<double> weights);

    std::size_t size() const { return nodes.size(); }
    /// Σ w_i f(x_i).
    Complex apply(const TrigPolynomial& f) const;
};

/// Degree n, N = 2n+1 nodes x_j = j/N.
class DirichletPlan {
public:
    explicit DirichletPlan(std::int64_t degree);

    std::int64_t degree() const { return degree_; }
    std::int64_t node_count() const { return 2 * degree_ + 1; }
    std::vector<double> nodes() const;

    /// Representative of j mod N in [-n, n].
    std::int64_t residue(std::int64_t j) const;

private:
    std::int64_t degree_;
};

/// S_n f: the k-th coefficient (|k| ≤ n) is Σ_θ α_{k+θN}.
TrigPolynomial apply_Sn(const DirichletPlan& plan, const TrigPolynomial& f);

/// ‖f - S_n f‖₂² = Σ_{|j|>n} |α_j|² + Σ_{|k|≤n} |Σ_{θ≠0} α_{k+θN}|².
double exact_L2_error_Sn(const DirichletPlan& plan, const TrigPolynomial& f);

/// Largest eigenvalue of diag(d) + g gᵀ with g_i² = d_i ≥ 0, by bisection on
/// the secular equation Σ d_i/(λ - d_i) = 1.
double rank_one_update_max_eigenvalue(const std::vector<double>& d);

/// sup_{‖f‖_{H_γ}≤1} ‖f - S_n f‖₂, frequencies |j| ≤ bandwidth handled exactly
/// per residue class mod N; the γ-tail beyond contributes `remainder`.
Estimate worst_case_error_Sn(const DirichletPlan& plan, const SpectralSequence& gamma,
                             std::int64_t bandwidth);

/// Q_n: weight 1/N at every node.
QuadratureRule midpoint_rule(const DirichletPlan& plan);

/// 2 max{ γ_{n+1}, ((1/n) Σ_{k>n} γ_k²)^{1/2} }, using the upper end of the
/// tail enclosure.  Requires γ symmetric and nonincreasing on N_0.
double dirichlet_upper_bound(const SpectralSequence& gamma, std::int64_t n);

}  // namespace sgap
