#include "sgap/recovery.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace sgap {

DecaySequence approximation_numbers(const SpectralSequence& gamma, std::size_t count) {
    return rearrangement(gamma, count);
}

namespace {

Eigen::VectorXd representer_values(const TrigPolynomial& h_rep, std::span<const double> nodes) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i)
        r(static_cast<Eigen::Index>(i)) = h_rep(reduce_mod1(nodes[i])).real();
    return r;
}

}  // namespace

QuadratureRule optimal_quadrature_weights(const KernelSpec& spec, std::span<const double> nodes,
                                          const TrigPolynomial& h_rep) {
    std::vector<double> x(nodes.begin(), nodes.end());
    if (x.empty()) return {};
    const Eigen::MatrixXd g = gram_matrix(spec, x);
    const Eigen::VectorXd r = representer_values(h_rep, x);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double cutoff = 1e-12 * std::max(lambda.cwiseAbs().maxCoeff(), 0.0);
    Eigen::VectorXd coeffs = eig.eigenvectors().transpose() * r;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
        coeffs(i) = lambda(i) > cutoff ? coeffs(i) / lambda(i) : 0.0;
    const Eigen::VectorXd w = eig.eigenvectors() * coeffs;
    return QuadratureRule(std::move(x), std::vector<double>(w.data(), w.data() + w.size()));
}

QuadratureError quadrature_worst_case_error(const KernelSpec& spec, const QuadratureRule& rule,
                                            const TrigPolynomial& h_rep) {
    const double rr = h_norm_sq(h_rep, spec.gamma());
    double cross = 0.0;
    double quad = 0.0;
    double abs_sum = 0.0;
    if (rule.size() > 0) {
        const Eigen::MatrixXd g = gram_matrix(spec, rule.nodes);
        const Eigen::VectorXd r = representer_values(h_rep, rule.nodes);
        const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(),
                                                  static_cast<Eigen::Index>(rule.size()));
        cross = w.dot(r);
        quad = w.dot(g * w);
        abs_sum = w.cwiseAbs().sum();
    }
    double radicand = rr - 2.0 * cross + quad;
    QuadratureError out;
    if (radicand < 0.0) {
        const double scale = std::max(rr, std::abs(quad));
        if (radicand < -1e-8 * scale)
            throw InconsistentTruncation("quadrature error radicand " + std::to_string(radicand) +
                                         " is negative beyond round-off");
        radicand = 0.0;
        out.clamped = true;
    }
    // The omitted frequencies add a PSD matrix to the Gram, so the truncated
    // value is a lower end.
    const double value = std::sqrt(radicand);
    const double slack = abs_sum * abs_sum * spec.remainder_bound();
    out.error = {value, std::sqrt(radicand + slack) - value};
    return out;
}

namespace {

// Σ_{θ≥1} γ_{±θn}² on one side.
Estimate aliased_side(const SpectralSequence& gamma, std::int64_t n, int sign) {
    const std::int64_t bw = gamma.bandwidth();
    const std::int64_t last = bw / n;
    double s = 0.0;
    for (std::int64_t t = last; t >= 1; --t) {
        const double g = gamma.at(sign * t * n);
        s += g * g;
    }
    const TailModel& tail = sign > 0 ? gamma.positive_tail() : gamma.negative_tail();
    const Estimate rest =
        tail.affine(static_cast<double>(n), 0.0).sum_power(static_cast<double>(last + 1), 2.0);
    return {s + rest.value, rest.remainder};
}

}  // namespace

EquispacedResult equispaced_integration(const SpectralSequence& gamma, std::int64_t n,
                                        EquispacedWeights kind) {
    if (n < 0) throw std::invalid_argument("equispaced_integration: negative node count");
    const double g0sq = gamma.at(0) * gamma.at(0);
    EquispacedResult out;
    if (n == 0) {
        out.error = {std::sqrt(g0sq), 0.0};
        return out;
    }
    const Estimate pos = aliased_side(gamma, n, +1);
    const Estimate neg = aliased_side(gamma, n, -1);
    out.aliased_mass = {pos.value + neg.value, pos.remainder + neg.remainder};
    const double t_lo = out.aliased_mass.value;
    const double t_hi = out.aliased_mass.upper();

    double nw = 1.0;
    if (kind == EquispacedWeights::optimal) nw = g0sq > 0.0 ? g0sq / (g0sq + t_lo) : 0.0;
    // Squared error of the rule with n·w = nw as a function of the aliased mass.
    const auto err_sq = [&](double t) { return g0sq * (1.0 - nw) * (1.0 - nw) + nw * nw * t; };
    const double lo = std::sqrt(err_sq(t_lo));
    out.error = {lo, std::sqrt(err_sq(t_hi)) - lo};

    std::vector<double> nodes(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        nodes[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(n);
    out.rule = QuadratureRule(std::move(nodes),
                              std::vector<double>(static_cast<std::size_t>(n), nw / static_cast<double>(n)));
    return out;
}

double optimal_recovery_error(const SpectralSequence& gamma, std::int64_t bandwidth,
                              std::span<const double> nodes) {
    const Eigen::Index d = 2 * bandwidth + 1;
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::VectorXd g(d);
    for (Eigen::Index k = 0; k < d; ++k) g(k) = gamma.at(static_cast<std::int64_t>(k) - bandwidth);
    if (n == 0) return g.maxCoeff();

    Eigen::MatrixXcd a(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = reduce_mod1(nodes[static_cast<std::size_t>(i)]);
        for (Eigen::Index k = 0; k < d; ++k) {
            const double phase = 2.0 * std::numbers::pi *
                                 static_cast<double>(static_cast<std::int64_t>(k) - bandwidth) * x;
            a(i, k) = Complex(std::cos(phase), std::sin(phase)) * g(k);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    Eigen::Index rank = 0;
    const double thr = 1e-12 * (s.size() > 0 ? s(0) : 0.0);
    while (rank < s.size() && s(rank) > thr) ++rank;
    if (rank >= d) return 0.0;
    const Eigen::MatrixXcd z = svd.matrixV().rightCols(d - rank);
    const Eigen::MatrixXcd b = g.asDiagonal() * z;
    Eigen::JacobiSVD<Eigen::MatrixXcd> top(b);
    return top.singularValues()(0);
}

namespace {

// C(g, n), saturating above `cap`.
std::uint64_t binomial_capped(std::int64_t g, std::int64_t n, std::uint64_t cap) {
    if (n < 0 || n > g) return 0;
    n = std::min(n, g - n);
    long double c = 1.0L;
    for (std::int64_t i = 1; i <= n; ++i) {
        c = c * static_cast<long double>(g - n + i) / static_cast<long double>(i);
        if (c > static_cast<long double>(cap)) return cap + 1;
    }
    return static_cast<std::uint64_t>(std::llround(static_cast<double>(c)));
}

}  // namespace

NodeSearchResult brute_force_gn(const SpectralSequence& gamma, std::int64_t n,
                                std::int64_t bandwidth, const NodeSearchOptions& options) {
    if (n < 0) throw std::invalid_argument("brute_force_gn: negative node count");
    NodeSearchResult best;
    const auto consider = [&](const std::vector<double>& x) {
        const double v = optimal_recovery_error(gamma, bandwidth, x);
        if (v < best.value) {
            best.value = v;
            best.best_nodes = x;
        }
    };

    std::vector<double> x(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(n);
    best.value = optimal_recovery_error(gamma, bandwidth, x);
    best.best_nodes = x;
    if (n == 0) {
        best.exhaustive = true;
        return best;
    }

    const std::int64_t grid = options.grid;
    if (grid >= n && binomial_capped(grid, n, options.budget) <= options.budget) {
        std::vector<std::int64_t> idx(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
        while (true) {
            for (std::int64_t i = 0; i < n; ++i)
                x[static_cast<std::size_t>(i)] =
                    static_cast<double>(idx[static_cast<std::size_t>(i)]) / static_cast<double>(grid);
            consider(x);
            std::int64_t i = n - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] == grid - n + i) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (std::int64_t k = i + 1; k < n; ++k)
                idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
        }
        best.exhaustive = true;
        return best;
    }

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int r = 0; r < options.restarts; ++r) {
        // Even restarts perturb the equispaced set, odd ones draw uniformly.
        const double shift = unit(rng) / static_cast<double>(n);
        for (std::int64_t i = 0; i < n; ++i) {
            double xi = r % 2 == 0 ? (static_cast<double>(i) + 0.5 * (unit(rng) - 0.5)) /
                                             static_cast<double>(n) + shift
                                   : unit(rng);
            x[static_cast<std::size_t>(i)] = reduce_mod1(xi);
        }
        consider(x);
    }
    return best;
}

bool BoundReport::consistent(double tol) const {
    if (lower_sq && measured && std::sqrt(std::max(*lower_sq, 0.0)) > *measured + measured_remainder + tol)
        return false;
    if (measured && upper && *measured > *upper + tol) return false;
    return true;
}

}  // namespace sgap
