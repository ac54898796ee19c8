#include "sgap/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgap {

std::string_view to_string(CertificateTag tag) {
    switch (tag) {
    case CertificateTag::convolution_square:
        return "convolution_square";
    case CertificateTag::tail_block:
        return "tail_block";
    case CertificateTag::interleave_case1:
        return "interleave_case1";
    case CertificateTag::interleave_case2:
        return "interleave_case2";
    case CertificateTag::regular:
        return "regular";
    }
    return "";
}

std::optional<CertificateTag> parse_certificate_tag(std::string_view text) {
    for (auto tag : {CertificateTag::convolution_square, CertificateTag::tail_block,
                     CertificateTag::interleave_case1, CertificateTag::interleave_case2,
                     CertificateTag::regular}) {
        if (to_string(tag) == text) return tag;
    }
    return std::nullopt;
}

double schur_rank1_gap(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("schur_rank1_gap: matrix is not square");
    const Eigen::Index n = m.rows();
    if (n == 0) return 0.0;
    const double scale = std::max(m.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("schur_rank1_gap: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> psd(m, Eigen::EigenvaluesOnly);
    if (psd.eigenvalues()(0) < -1e-10 * std::abs(m.trace()))
        throw std::invalid_argument("schur_rank1_gap: matrix is not positive semidefinite");

    const Eigen::VectorXd d = m.diagonal();
    const Eigen::MatrixXd a = m.cwiseProduct(m) - d * d.transpose() / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
    return eig.eigenvalues()(0);
}

CriterionResult certificate_criterion_check(const KernelSpec& spec, const TrigPolynomial& h,
                                            double alpha, std::span<const double> nodes) {
    if (!(alpha > 0.0)) throw std::invalid_argument("certificate_criterion_check: alpha must be positive");
    CriterionResult out;
    out.holds = true;
    if (nodes.empty()) return out;
    const Eigen::MatrixXd g = gram_matrix(spec, nodes);
    Eigen::VectorXd r(g.rows());
    for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = h(nodes[static_cast<std::size_t>(i)]).real();
    const Eigen::MatrixXd a = g - alpha * r * r.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = eig.eigenvalues()(0);
    out.tolerance = 1e-8 * g.trace() + static_cast<double>(nodes.size()) * spec.remainder_bound();
    out.holds = out.min_eigenvalue >= -out.tolerance;
    return out;
}

Certificate convolution_square_lower(const SpectralSequence& gamma, std::int64_t n) {
    if (gamma.provenance() != Provenance::convolution_square)
        throw SequenceError("convolution_square_lower: gamma was not built as a convolution square");
    if (n < 0) throw std::invalid_argument("convolution_square_lower: negative n");
    const double g0sq = gamma.at(0) * gamma.at(0);
    const double norm = norm_sq(gamma).value;
    Certificate c;
    c.n = n;
    c.tag = CertificateTag::convolution_square;
    c.bound_sq = std::max(0.0, g0sq * (1.0 - static_cast<double>(n) * g0sq / norm));
    c.params["norm_sq"] = norm;
    c.params["gamma0_sq"] = g0sq;
    return c;
}

TailBlockScanner::TailBlockScanner(const SpectralSequence& gamma)
    : gamma_(gamma), sums_(gamma) {
    if (!gamma_.nonincreasing_on_nonnegative())
        throw SequenceError("tail block bound: gamma must be nonincreasing on N_0");
    if (!gamma_.negative_side_dominates())
        throw SequenceError("tail block bound: gamma_{-k} >= gamma_k must hold for k >= 1");
    if (!gamma_.square_summable())
        throw DivergenceError("tail block bound: gamma is not square-summable");
}

BlockCount TailBlockScanner::count(std::int64_t r) const {
    if (r < 0) throw std::invalid_argument("tail block bound: negative r");
    BlockCount c;
    c.sq = sums_.sq(r);
    c.quartic = sums_.quartic(r);
    if (c.sq.value == 0.0) return c;
    const auto floor_ratio = [](double s2, double s4) -> std::int64_t {
        const double v = std::floor(s2 * s2 / (2.0 * s4));
        if (!(v < 9.0e18)) throw std::overflow_error("tail block bound: n(r) exceeds the integer range");
        return static_cast<std::int64_t>(v);
    };
    c.n_lo = floor_ratio(c.sq.value, c.quartic.upper());
    c.n_hi = floor_ratio(c.sq.upper(), c.quartic.value);
    return c;
}

double TailBlockScanner::bound_sq(std::int64_t r, std::int64_t n) const {
    if (n < 0) throw std::invalid_argument("tail block bound: negative n");
    const BlockCount c = count(r);
    if (c.sq.value == 0.0) return 0.0;
    // g = γ̃_0² = S4/S2 and ‖γ̃‖² = S2; g - n g²/S2 taken at the unfavourable ends.
    const double g_lo = c.quartic.value / c.sq.upper();
    const double g_hi = c.quartic.upper() / c.sq.value;
    const double v = g_lo - static_cast<double>(n) * g_hi * g_hi / c.sq.value;
    const double g0sq = gamma_.at(0) * gamma_.at(0);
    return std::clamp(v, 0.0, g0sq);
}

Certificate TailBlockScanner::at(std::int64_t r) const {
    const BlockCount c = count(r);
    Certificate out;
    out.n = c.n_lo;
    out.tag = CertificateTag::tail_block;
    out.bound_sq = bound_sq(r, c.n_lo);
    out.params["r"] = static_cast<double>(r);
    out.params["n_r"] = static_cast<double>(c.n_lo);
    out.params["n_r_hi"] = static_cast<double>(c.n_hi);
    out.params["tail_sq"] = c.sq.value;
    return out;
}

Certificate tail_block_lower(const SpectralSequence& gamma, std::int64_t r) {
    return TailBlockScanner(gamma).at(r);
}

std::vector<Certificate> interleaved_lower_schedule(const DecaySequence& a, std::int64_t r_max) {
    const TailBlockScanner blocks(interleave(a));
    const double a0sq = a.at(0) * a.at(0);
    std::vector<Certificate> out;
    for (std::int64_t r = 1; r <= r_max; ++r) {
        const BlockCount c = blocks.count(r);
        Certificate cert;
        if (c.n_lo >= 2 * r) {
            cert = blocks.at(r);
            cert.tag = CertificateTag::interleave_case1;
            const double n = static_cast<double>(cert.n);
            cert.params["target_sq"] =
                tail_sum_sq(a, static_cast<std::size_t>(cert.n)).value / (8.0 * n);
        } else {
            const double g = blocks.gamma().at(r);
            cert.n = 2 * r;
            cert.tag = CertificateTag::interleave_case2;
            cert.quantity = BoundQuantity::sampling;
            cert.bound_sq = std::min(g * g, a0sq);
            cert.params["r"] = static_cast<double>(r);
            cert.params["n_r"] = static_cast<double>(c.n_lo);
            cert.params["target_sq"] =
                tail_sum_sq(a, static_cast<std::size_t>(2 * r)).value / (16.0 * static_cast<double>(r));
        }
        out.push_back(std::move(cert));
    }
    return out;
}

RegularScanner::RegularScanner(const SpectralSequence& gamma, double b,
                               const RegularScanOptions& options)
    : blocks_(gamma), b_(b), options_(options) {
    if (!(b > 0.0)) throw SequenceError("regular bound: b must be positive");
    const DecaySequence side = nonnegative_side(gamma);
    std::optional<std::size_t> last;
    if (options_.check_last) last = static_cast<std::size_t>(*options_.check_last);
    regularity_ = check_b_regular(side, b, static_cast<std::size_t>(options_.check_first), last);
    if (!regularity_.regular)
        throw SequenceError("regular bound: gamma_{2k} >= b gamma_k fails at k = " +
                            std::to_string(regularity_.argmin));
}

Certificate RegularScanner::at(std::int64_t n) const {
    if (n < 1) throw std::invalid_argument("regular bound: n must be positive");
    for (std::int64_t r = 0; r <= options_.r_budget; ++r) {
        const BlockCount c = blocks_.count(r);
        if (c.n_lo < n) continue;
        Certificate cert = blocks_.at(r);
        cert.n = n;
        cert.bound_sq = blocks_.bound_sq(r, n);
        cert.tag = CertificateTag::regular;
        const double scale = blocks_.sums().sq(n).upper() / static_cast<double>(n);
        cert.params["b"] = b_;
        cert.params["ratio_C"] = static_cast<double>(c.n_lo) / static_cast<double>(n);
        cert.params["constant_c"] = scale > 0.0 ? cert.bound_sq / scale : 0.0;
        return cert;
    }
    throw std::runtime_error("regular bound: no r <= " + std::to_string(options_.r_budget) +
                             " has n(r) >= " + std::to_string(n));
}

Certificate regular_lower(const SpectralSequence& gamma, double b, std::int64_t n,
                          const RegularScanOptions& options) {
    return RegularScanner(gamma, b, options).at(n);
}

GrowthReport regular_growth_scan(const SpectralSequence& gamma, double b, std::int64_t r_max) {
    if (!(b > 0.0)) throw SequenceError("regular_growth_scan: b must be positive");
    const TailBlockScanner blocks(gamma);
    GrowthReport rep;
    rep.limit = 2.0 / (b * b * b * b);
    std::vector<std::int64_t> lo(static_cast<std::size_t>(r_max + 1));
    rep.r0 = 1;
    for (std::int64_t r = 1; r <= r_max; ++r) {
        lo[static_cast<std::size_t>(r)] = blocks.count(r).n_lo;
        if (lo[static_cast<std::size_t>(r)] < 1) rep.r0 = r + 1;
    }
    for (std::int64_t r = rep.r0; r <= r_max; ++r) {
        const double base = static_cast<double>(lo[static_cast<std::size_t>(r)]);
        const double doubled = static_cast<double>(blocks.count(2 * r).n_hi);
        ++rep.checked;
        const double ratio = doubled / base;
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.argmax = r;
        }
        if (doubled > rep.limit * base) rep.holds = false;
    }
    return rep;
}

std::int64_t heuristic_mn(const SpectralSequence& gamma, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("heuristic_mn: negative n");
    const double g = gamma.at(n);
    if (g == 0.0) throw std::domain_error("heuristic_mn: gamma_n = 0");
    const double tail = tail_sum_sq(gamma, n + 1).value;
    return static_cast<std::int64_t>(std::ceil(static_cast<double>(n) + tail / (g * g)));
}

}  // namespace sgap
