// Spectral and decay sequences: storage, closed-form tails, tail sums,
// rearrangement, interleaving and convolution squares.
//
// Every infinite sequence is a stored prefix plus a closed-form tail model.
// Quantities that depend on the tail are returned as an Estimate: the exact
// value lies in [value, value + remainder].
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sgap {

/// A precondition on a sequence does not hold (negative entries, wrong
/// monotonicity, missing provenance, ...).
class SequenceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An exact value was requested for a sum that does not converge.
class DivergenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Two-sided enclosure of a real quantity: exact ∈ [value, value + remainder].
struct Estimate {
    double value = 0.0;
    double remainder = 0.0;

    double upper() const { return value + remainder; }
};

/// Closed-form generator used past the stored prefix of a sequence.
///
/// `powerlog(r, beta, k0, shift)` is  t ↦ (t+shift)^{-r} log^{-beta}(t+shift)
/// for t ≥ k0 and constant φ(k0) below k0.  `geometric(q)` is t ↦ q^t.
/// Either can be composed with an affine index map t ↦ scale·t + offset,
/// which is how interleaved sequences describe their two sides.
/// All generators are nonincreasing in t ≥ 0.
class TailModel {
public:
    enum class Kind { none, powerlog, geometric };

    TailModel() = default;

    static TailModel none() { return {}; }
    static TailModel powerlog(double r, double beta, double k0 = 3.0, double shift = 0.0);
    static TailModel geometric(double q);

    Kind kind() const { return kind_; }
    bool is_none() const { return kind_ == Kind::none; }

    double r() const { return r_; }
    double beta() const { return beta_; }
    double k0() const { return k0_; }
    double shift() const { return shift_; }
    double q() const { return q_; }
    double scale() const { return scale_; }
    double offset() const { return offset_; }

    /// Generator composed with the affine map t ↦ scale·t + offset.
    TailModel affine(double scale, double offset) const;

    double value_at(double t) const;

    /// Value at an index t given only through log(t).  Used for indices far
    /// beyond double range; additive offsets are below resolution there.
    double value_at_log(double log_t) const;

    /// Whether Σ_j value(j)^p converges.
    bool summable(double p) const;

    /// Enclosure of Σ_{j ≥ first} value(j)^p.
    Estimate sum_power(double first, double p) const;

    /// Base generator text, e.g. "powerlog 0.5 1 3".  Throws for affine
    /// compositions, which the text format cannot express.
    std::string to_string() const;
    static TailModel parse(std::string_view text);

    friend bool operator==(const TailModel&, const TailModel&) = default;

private:
    double base_value(double u) const;
    // bounds on ∫_a^∞ base(u)^p du for the base generator
    Estimate base_integral(double a, double p) const;

    Kind kind_ = Kind::none;
    double r_ = 0.0;
    double beta_ = 0.0;
    double k0_ = 0.0;
    double shift_ = 0.0;
    double q_ = 0.0;
    double scale_ = 1.0;
    double offset_ = 0.0;
};

/// How a spectral sequence came to be.  Bounds with structural hypotheses check this.
enum class Provenance { literal, generator, convolution_square, interleave };

std::string_view to_string(Provenance p);

/// One-sided nonincreasing nonnegative sequence v_0 ≥ v_1 ≥ ...
class DecaySequence {
public:
    DecaySequence() = default;
    explicit DecaySequence(std::vector<double> values, TailModel tail = TailModel::none());

    static DecaySequence powerlog(double beta, std::size_t length, double k0 = 3.0,
                                  double r = 0.5);
    static DecaySequence geometric(double q, std::size_t length);

    /// v_n; past the stored prefix the tail model (or zero) is used.
    double at(std::size_t n) const;
    double operator[](std::size_t n) const { return at(n); }

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const TailModel& tail() const { return tail_; }

    friend bool operator==(const DecaySequence&, const DecaySequence&) = default;

private:
    std::vector<double> values_;
    TailModel tail_;
};

/// Two-sided nonnegative sequence γ = (γ_j)_{j∈Z} defining the space H_γ.
///
/// Stored densely on [-M, M] (M = bandwidth); each side continues with its
/// own tail model.
class SpectralSequence {
public:
    SpectralSequence() = default;

    /// `centered` holds γ_{-M}, ..., γ_M (odd length).
    SpectralSequence(std::vector<double> centered, TailModel positive_tail,
                     TailModel negative_tail, Provenance provenance = Provenance::literal);

    static SpectralSequence from_values(std::vector<double> centered,
                                        TailModel tail = TailModel::none());
    static SpectralSequence from_map(const std::map<std::int64_t, double>& entries);

    /// Symmetric γ_k = max(|k|,k0)^{-r} log^{-beta} max(|k|,k0).
    static SpectralSequence powerlog(double beta, std::int64_t bandwidth, double k0 = 3.0,
                                     double r = 0.5);
    /// Symmetric γ_k = q^{|k|}.
    static SpectralSequence geometric(double q, std::int64_t bandwidth);

    double at(std::int64_t j) const;
    double operator[](std::int64_t j) const { return at(j); }

    std::int64_t bandwidth() const { return bandwidth_; }
    const std::vector<double>& stored() const { return values_; }
    const TailModel& positive_tail() const { return positive_tail_; }
    const TailModel& negative_tail() const { return negative_tail_; }
    Provenance provenance() const { return provenance_; }
    bool has_tail() const { return !positive_tail_.is_none() || !negative_tail_.is_none(); }

    bool is_symmetric() const;
    bool square_summable() const;
    /// γ_0 ≥ γ_1 ≥ ... including the positive tail.
    bool nonincreasing_on_nonnegative() const;
    /// γ_{-k} ≥ γ_k for all k ≥ 1.
    bool negative_side_dominates() const;

    /// Restriction to [-m, m] with zero tails.
    SpectralSequence truncated(std::int64_t m) const;

    friend bool operator==(const SpectralSequence&, const SpectralSequence&) = default;

private:
    std::int64_t bandwidth_ = 0;
    std::vector<double> values_{0.0};
    TailModel positive_tail_;
    TailModel negative_tail_;
    Provenance provenance_ = Provenance::literal;
};

/// Nonnegative side γ_0, γ_1, ... as a decay sequence (no monotonicity check).
DecaySequence nonnegative_side(const SpectralSequence& gamma);

/// γ_ℓ = sqrt(Σ_j μ_j μ_{j+ℓ}).  μ must be finitely supported, nonnegative, nonzero.
SpectralSequence convolution_square(const SpectralSequence& mu);

/// γ = (..., a_3, a_1, a_0, a_2, a_4, ...).
SpectralSequence interleave(const DecaySequence& a);

/// Nonincreasing rearrangement.  Without `count` the sequence must be finitely
/// supported and the full stored range is returned.
DecaySequence rearrangement(const SpectralSequence& gamma,
                            std::optional<std::size_t> count = std::nullopt);
DecaySequence rearrangement(const DecaySequence& values,
                            std::optional<std::size_t> count = std::nullopt);

/// Σ_{j ≥ from} γ_j^p over the integers (one-sided for from ≥ 0).
Estimate tail_sum_power(const SpectralSequence& gamma, std::int64_t from, double p);
Estimate tail_sum_sq(const SpectralSequence& gamma, std::int64_t from);
/// Σ_{k ≥ from} v_k^p.
Estimate tail_sum_power(const DecaySequence& v, std::size_t from, double p);
Estimate tail_sum_sq(const DecaySequence& v, std::size_t from);
/// Σ_{|j| > m} γ_j^2.
Estimate outer_sum_sq(const SpectralSequence& gamma, std::int64_t m);
/// Σ_j γ_j^2.
Estimate norm_sq(const SpectralSequence& gamma);

/// Precomputed one-sided suffix sums Σ_{j≥r} γ_j^2 and Σ_{j≥r} γ_j^4.
class SuffixSums {
public:
    explicit SuffixSums(const SpectralSequence& gamma);

    Estimate sq(std::int64_t r) const;
    Estimate quartic(std::int64_t r) const;
    std::int64_t stored_end() const { return static_cast<std::int64_t>(sq_.size()); }

private:
    Estimate lookup(const std::vector<double>& table, double p, std::int64_t r) const;

    std::vector<double> sq_;
    std::vector<double> quartic_;
    TailModel tail_;
};

struct RegularityReport {
    bool regular = true;
    std::size_t first = 0;  // first n checked
    std::size_t last = 0;   // last n checked (2n within range)
    std::size_t checked = 0;
    double min_ratio = 1.0;  // min v_{2n}/v_n over the checked range
    std::size_t argmin = 0;
    std::string note;
};

/// Checks v_{2n} ≥ b·v_n for n in [first, last].  When `last` is omitted the
/// stored prefix bounds the range; the report says which range was checked.
RegularityReport check_b_regular(const DecaySequence& v, double b, std::size_t first = 0,
                                 std::optional<std::size_t> last = std::nullopt);

/// Text format: header line `kind=<spectral|decay> bandwidth=<M> tail=<...>`
/// followed by `index value` lines.
std::string emit_sequence(const SpectralSequence& gamma);
std::string emit_sequence(const DecaySequence& v);

struct ParsedSequence {
    std::optional<SpectralSequence> spectral;
    std::optional<DecaySequence> decay;
};
ParsedSequence parse_sequence(std::string_view text);
ParsedSequence load_sequence_file(const std::string& path);

}  // namespace sgap
