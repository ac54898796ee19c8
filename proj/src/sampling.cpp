#include "sgap/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgap {

QuadratureRule::QuadratureRule(std::vector<double> nodes_in, std::vector<double> weights_in)
    : nodes(std::move(nodes_in)), weights(std::move(weights_in)) {
    if (nodes.size() != weights.size())
        throw std::invalid_argument("QuadratureRule: node and weight counts differ");
    for (double& x : nodes) x = reduce_mod1(x);
}

Complex QuadratureRule::apply(const TrigPolynomial& f) const {
    Complex s{};
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
}

DirichletPlan::DirichletPlan(std::int64_t degree) : degree_(degree) {
    if (degree_ < 0) throw std::invalid_argument("DirichletPlan: negative degree");
}

std::vector<double> DirichletPlan::nodes() const {
    const std::int64_t big_n = node_count();
    std::vector<double> x(static_cast<std::size_t>(big_n));
    for (std::int64_t j = 0; j < big_n; ++j)
        x[static_cast<std::size_t>(j)] = static_cast<double>(j) / static_cast<double>(big_n);
    return x;
}

std::int64_t DirichletPlan::residue(std::int64_t j) const {
    const std::int64_t big_n = node_count();
    std::int64_t r = (j + degree_) % big_n;
    if (r < 0) r += big_n;
    return r - degree_;
}

TrigPolynomial apply_Sn(const DirichletPlan& plan, const TrigPolynomial& f) {
    TrigPolynomial::Coeffs out;
    for (const auto& [j, c] : f.coeffs()) out[plan.residue(j)] += c;
    return TrigPolynomial(std::move(out));
}

double exact_L2_error_Sn(const DirichletPlan& plan, const TrigPolynomial& f) {
    const std::int64_t n = plan.degree();
    double lost = 0.0;
    std::map<std::int64_t, Complex> aliased;
    for (const auto& [j, c] : f.coeffs()) {
        if (j >= -n && j <= n) continue;
        lost += std::norm(c);
        aliased[plan.residue(j)] += c;
    }
    double injected = 0.0;
    for (const auto& [k, c] : aliased) injected += std::norm(c);
    return lost + injected;
}

double rank_one_update_max_eigenvalue(const std::vector<double>& d) {
    double dmax = 0.0;
    double total = 0.0;
    for (double x : d) {
        if (x < 0.0) throw std::invalid_argument("rank_one_update_max_eigenvalue: negative entry");
        dmax = std::max(dmax, x);
        total += x;
    }
    if (total == 0.0) return 0.0;
    // f(λ) = Σ d_i/(λ - d_i) decreases from +∞ at d_max to ≤ 1 at d_max + Σ d_i.
    double lo = dmax;
    double hi = dmax + total;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double f = 0.0;
        for (double x : d) {
            if (x != 0.0) f += x / (mid - x);
        }
        if (f > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

namespace {

// Bound on Σ_{j>b, j ≡ k mod N} γ_j² on one side, uniform in k.
double class_tail_bound(const SpectralSequence& gamma, std::int64_t b, std::int64_t big_n,
                        int sign) {
    const std::int64_t bw = gamma.bandwidth();
    const TailModel& tail = sign > 0 ? gamma.positive_tail() : gamma.negative_tail();
    // Σ_{j > b} on this side
    double side = 0.0;
    bool monotone = true;
    double prev = gamma.at(sign * (b + 1));
    for (std::int64_t j = b + 1; j <= bw; ++j) {
        const double g = gamma.at(sign * j);
        side += g * g;
        if (g > prev) monotone = false;
        prev = g;
    }
    side += tail.sum_power(static_cast<double>(std::max(b, bw) + 1), 2.0).upper();
    if (!monotone) return side;
    // Nonincreasing beyond b: each class member after the first is dominated
    // by the average of the N squares preceding it.
    const double first = gamma.at(sign * (b + 1));
    return std::min(side, first * first + side / static_cast<double>(big_n));
}

}  // namespace

Estimate worst_case_error_Sn(const DirichletPlan& plan, const SpectralSequence& gamma,
                             std::int64_t bandwidth) {
    const std::int64_t n = plan.degree();
    const std::int64_t big_n = plan.node_count();
    const std::int64_t b = std::max<std::int64_t>(bandwidth, n);

    double worst = 0.0;
    std::vector<double> d;
    for (std::int64_t k = -n; k <= n; ++k) {
        d.clear();
        for (std::int64_t j = k + big_n; j <= b; j += big_n) {
            const double g = gamma.at(j);
            if (g != 0.0) d.push_back(g * g);
        }
        for (std::int64_t j = k - big_n; j >= -b; j -= big_n) {
            const double g = gamma.at(j);
            if (g != 0.0) d.push_back(g * g);
        }
        worst = std::max(worst, rank_one_update_max_eigenvalue(d));
    }
    const double tail = class_tail_bound(gamma, b, big_n, +1) + class_tail_bound(gamma, b, big_n, -1);
    return {std::sqrt(worst), std::sqrt(2.0 * tail)};
}

QuadratureRule midpoint_rule(const DirichletPlan& plan) {
    const auto big_n = static_cast<std::size_t>(plan.node_count());
    return QuadratureRule(plan.nodes(), std::vector<double>(big_n, 1.0 / static_cast<double>(big_n)));
}

double dirichlet_upper_bound(const SpectralSequence& gamma, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("dirichlet_upper_bound: n must be positive");
    if (!gamma.is_symmetric()) throw SequenceError("dirichlet_upper_bound: gamma must be symmetric");
    if (!gamma.nonincreasing_on_nonnegative())
        throw SequenceError("dirichlet_upper_bound: gamma must be nonincreasing on N_0");
    const double tail = tail_sum_sq(gamma, n + 1).upper();
    return 2.0 * std::max(gamma.at(n + 1), std::sqrt(tail / static_cast<double>(n)));
}

}  // namespace sgap
