// The space H_γ: trigonometric polynomials, norms, the reproducing kernel
// and the representer of integration.
#pragma once

#include "sgap/seq.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace sgap {

/// f has a nonzero Fourier coefficient where γ vanishes, so f ∉ H_γ.
class MembershipError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

using Complex = std::complex<double>;

/// Finitely supported f(x) = Σ_j α_j e^{2πijx}.  Zero coefficients are dropped.
class TrigPolynomial {
public:
    using Coeffs = std::map<std::int64_t, Complex>;

    TrigPolynomial() = default;
    explicit TrigPolynomial(Coeffs coeffs);

    static TrigPolynomial monomial(std::int64_t j, Complex c = 1.0);

    const Coeffs& coeffs() const { return coeffs_; }
    Complex coeff(std::int64_t j) const;
    bool empty() const { return coeffs_.empty(); }

    /// α_{-j} = conj(α_j) for all j.
    bool is_real() const { return real_; }
    /// max |j| over the support (0 for the zero polynomial).
    std::int64_t degree() const;

    Complex operator()(double x) const;
    /// Σ |α_j|^2.
    double l2_norm_sq() const;

    TrigPolynomial operator+(const TrigPolynomial& other) const;
    TrigPolynomial operator-(const TrigPolynomial& other) const;
    TrigPolynomial operator*(Complex s) const;

    friend bool operator==(const TrigPolynomial&, const TrigPolynomial&) = default;

private:
    Coeffs coeffs_;
    bool real_ = true;
};

/// ‖f‖²_{H_γ} = Σ |α_j|²/γ_j².
double h_norm_sq(const TrigPolynomial& f, const SpectralSequence& gamma);
/// ⟨f, g⟩_{H_γ} = Σ α_j conj(β_j)/γ_j².
Complex h_inner(const TrigPolynomial& f, const TrigPolynomial& g, const SpectralSequence& gamma);

/// γ together with the bandwidth used to truncate its kernel.
///
/// The kernel is evaluated in real cosine form
///   K_M(x,y) = Σ_{j=0}^{M} c_j cos(2πj(x-y)),  c_0 = γ_0², c_j = γ_j² + γ_{-j}²,
/// which equals Re K and is the exact kernel for symmetric γ.  `remainder`
/// bounds |K - K_M| uniformly by Σ_{|j|>M} γ_j².
class KernelSpec {
public:
    KernelSpec(SpectralSequence gamma, std::int64_t bandwidth);

    const SpectralSequence& gamma() const { return gamma_; }
    std::int64_t bandwidth() const { return bandwidth_; }
    double remainder_bound() const { return remainder_; }
    const std::vector<double>& cosine_weights() const { return weights_; }

private:
    SpectralSequence gamma_;
    std::int64_t bandwidth_;
    double remainder_;
    std::vector<double> weights_;
};

/// Reduces x into [0, 1).
double reduce_mod1(double x);

/// K_M(x, y) with the uniform truncation remainder.  Exactly symmetric in x, y.
Estimate kernel_eval(const KernelSpec& spec, double x, double y);

/// (K_M(x_i, x_j))_{ij}.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, std::span<const double> nodes);

/// K_M(·, x) as a trigonometric polynomial (Σ_{|j|≤M} γ_j² e_{-j}(x) e_j).
TrigPolynomial kernel_section(const KernelSpec& spec, double x);

/// h = γ_0² e_0, the representer of f ↦ ∫_0^1 f.
TrigPolynomial integration_representer(const SpectralSequence& gamma);

}  // namespace sgap
