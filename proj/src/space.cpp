#include "sgap/space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sgap {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

Complex unit(double phase) { return {std::cos(phase), std::sin(phase)}; }

}  // namespace

TrigPolynomial::TrigPolynomial(Coeffs coeffs) {
    for (const auto& [j, c] : coeffs) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw std::invalid_argument("TrigPolynomial: non-finite coefficient");
        if (c != Complex{}) coeffs_.emplace(j, c);
    }
    for (const auto& [j, c] : coeffs_) {
        if (c != std::conj(coeff(-j))) {
            real_ = false;
            break;
        }
    }
}

TrigPolynomial TrigPolynomial::monomial(std::int64_t j, Complex c) { return TrigPolynomial({{j, c}}); }

Complex TrigPolynomial::coeff(std::int64_t j) const {
    const auto it = coeffs_.find(j);
    return it == coeffs_.end() ? Complex{} : it->second;
}

std::int64_t TrigPolynomial::degree() const {
    if (coeffs_.empty()) return 0;
    return std::max(std::abs(coeffs_.begin()->first), std::abs(coeffs_.rbegin()->first));
}

Complex TrigPolynomial::operator()(double x) const {
    Complex s{};
    for (const auto& [j, c] : coeffs_) s += c * unit(two_pi * static_cast<double>(j) * x);
    return s;
}

double TrigPolynomial::l2_norm_sq() const {
    double s = 0.0;
    for (const auto& [j, c] : coeffs_) s += std::norm(c);
    return s;
}

TrigPolynomial TrigPolynomial::operator+(const TrigPolynomial& other) const {
    Coeffs out = coeffs_;
    for (const auto& [j, c] : other.coeffs_) out[j] += c;
    return TrigPolynomial(std::move(out));
}

TrigPolynomial TrigPolynomial::operator-(const TrigPolynomial& other) const {
    Coeffs out = coeffs_;
    for (const auto& [j, c] : other.coeffs_) out[j] -= c;
    return TrigPolynomial(std::move(out));
}

TrigPolynomial TrigPolynomial::operator*(Complex s) const {
    Coeffs out;
    for (const auto& [j, c] : coeffs_) out[j] = c * s;
    return TrigPolynomial(std::move(out));
}

double h_norm_sq(const TrigPolynomial& f, const SpectralSequence& gamma) {
    double s = 0.0;
    for (const auto& [j, c] : f.coeffs()) {
        const double g = gamma.at(j);
        if (g == 0.0)
            throw MembershipError("coefficient at frequency " + std::to_string(j) +
                                  " is nonzero but gamma vanishes there");
        s += std::norm(c) / (g * g);
    }
    return s;
}

Complex h_inner(const TrigPolynomial& f, const TrigPolynomial& g, const SpectralSequence& gamma) {
    Complex s{};
    for (const auto& [j, c] : f.coeffs()) {
        const Complex d = g.coeff(j);
        if (d == Complex{}) continue;
        const double w = gamma.at(j);
        if (w == 0.0)
            throw MembershipError("inner product at frequency " + std::to_string(j) +
                                  " where gamma vanishes");
        s += c * std::conj(d) / (w * w);
    }
    return s;
}

KernelSpec::KernelSpec(SpectralSequence gamma, std::int64_t bandwidth)
    : gamma_(std::move(gamma)), bandwidth_(bandwidth) {
    if (bandwidth_ < 0) throw std::invalid_argument("KernelSpec: negative bandwidth");
    if (!gamma_.square_summable())
        throw DivergenceError("KernelSpec: gamma is not square-summable, H_gamma has no kernel");
    remainder_ = outer_sum_sq(gamma_, bandwidth_).upper();
    weights_.resize(static_cast<std::size_t>(bandwidth_ + 1));
    weights_[0] = gamma_.at(0) * gamma_.at(0);
    for (std::int64_t j = 1; j <= bandwidth_; ++j) {
        const double gp = gamma_.at(j);
        const double gm = gamma_.at(-j);
        weights_[static_cast<std::size_t>(j)] = gp * gp + gm * gm;
    }
}

double reduce_mod1(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;
    return r;
}

Estimate kernel_eval(const KernelSpec& spec, double x, double y) {
    // |x - y| reduced to [0, 1/2]: the same argument for (x,y) and (y,x).
    double d = std::abs(reduce_mod1(x) - reduce_mod1(y));
    d = std::min(d, 1.0 - d);
    const auto& w = spec.cosine_weights();
    double s = 0.0;
    for (std::size_t j = w.size(); j-- > 0;) {
        if (w[j] != 0.0) s += w[j] * std::cos(two_pi * static_cast<double>(j) * d);
    }
    return {s, spec.remainder_bound()};
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, std::span<const double> nodes) {
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double k = kernel_eval(spec, nodes[static_cast<std::size_t>(i)],
                                         nodes[static_cast<std::size_t>(j)])
                                 .value;
            g(i, j) = k;
            g(j, i) = k;
        }
    }
    return g;
}

TrigPolynomial kernel_section(const KernelSpec& spec, double x) {
    TrigPolynomial::Coeffs c;
    const std::int64_t m = spec.bandwidth();
    for (std::int64_t j = -m; j <= m; ++j) {
        const double g = spec.gamma().at(j);
        if (g != 0.0) c[j] = g * g * unit(-two_pi * static_cast<double>(j) * x);
    }
    return TrigPolynomial(std::move(c));
}

TrigPolynomial integration_representer(const SpectralSequence& gamma) {
    const double g0 = gamma.at(0);
    if (g0 == 0.0)
        throw MembershipError("gamma_0 = 0: integration vanishes on H_gamma and has no nonzero representer");
    return TrigPolynomial::monomial(0, g0 * g0);
}

}  // namespace sgap
