#include "sgap/seq.hpp"

#include "sgap/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

namespace sgap {

namespace {

// Neumaier compensated summation.
class Accumulator {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double ipow(double x, double p) {
    if (p == 2.0) return x * x;
    if (p == 4.0) {
        const double s = x * x;
        return s * s;
    }
    return std::pow(x, p);
}

void check_entries(const std::vector<double>& v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x) || x < 0.0)
            throw SequenceError(std::string(what) + ": entries must be finite and nonnegative");
    }
}

Estimate operator+(Estimate a, Estimate b) { return {a.value + b.value, a.remainder + b.remainder}; }

}  // namespace

// ---------------------------------------------------------------- TailModel

TailModel TailModel::powerlog(double r, double beta, double k0, double shift) {
    if (!(r >= 0.0) || !(beta >= 0.0) || !(k0 >= 0.0) || !std::isfinite(shift))
        throw SequenceError("powerlog: need r >= 0, beta >= 0, k0 >= 0");
    if (beta > 0.0 && !(k0 + shift > 1.0))
        throw SequenceError("powerlog: need k0 + shift > 1 so that the logarithm is positive");
    if (r > 0.0 && !(k0 + shift > 0.0))
        throw SequenceError("powerlog: need k0 + shift > 0");
    TailModel t;
    t.kind_ = Kind::powerlog;
    t.r_ = r;
    t.beta_ = beta;
    t.k0_ = k0;
    t.shift_ = shift;
    return t;
}

TailModel TailModel::geometric(double q) {
    if (!(q > 0.0 && q < 1.0)) throw SequenceError("geometric: need 0 < q < 1");
    TailModel t;
    t.kind_ = Kind::geometric;
    t.q_ = q;
    return t;
}

TailModel TailModel::affine(double scale, double offset) const {
    if (!(scale > 0.0)) throw SequenceError("affine tail map needs a positive scale");
    TailModel t = *this;
    t.scale_ = scale_ * scale;
    t.offset_ = scale_ * offset + offset_;
    return t;
}

double TailModel::base_value(double u) const {
    switch (kind_) {
    case Kind::none:
        return 0.0;
    case Kind::geometric:
        return std::pow(q_, u);
    case Kind::powerlog: {
        const double x = std::max(u, k0_) + shift_;
        double v = r_ == 0.0 ? 1.0 : std::pow(x, -r_);
        if (beta_ != 0.0) v *= std::pow(std::log(x), -beta_);
        return v;
    }
    }
    return 0.0;
}

double TailModel::value_at(double t) const { return base_value(scale_ * t + offset_); }

double TailModel::value_at_log(double log_t) const {
    if (log_t < 40.0) return value_at(std::exp(log_t));
    switch (kind_) {
    case Kind::none:
        return 0.0;
    case Kind::geometric:
        return 0.0;  // q^t underflows long before t = e^40
    case Kind::powerlog: {
        const double lx = log_t + std::log(scale_);
        return std::exp(-r_ * lx - (beta_ == 0.0 ? 0.0 : beta_ * std::log(lx)));
    }
    }
    return 0.0;
}

bool TailModel::summable(double p) const {
    switch (kind_) {
    case Kind::none:
    case Kind::geometric:
        return true;
    case Kind::powerlog: {
        const double pr = p * r_;
        return pr > 1.0 || (pr == 1.0 && p * beta_ > 1.0);
    }
    }
    return false;
}

Estimate TailModel::base_integral(double a, double p) const {
    switch (kind_) {
    case Kind::none:
        return {};
    case Kind::geometric: {
        const double v = std::pow(q_, p * a) / (-p * std::log(q_));
        return {v, 0.0};
    }
    case Kind::powerlog: {
        if (!summable(p))
            throw DivergenceError("powerlog tail with r=" + format_double(r_) +
                                  ", beta=" + format_double(beta_) + " is not " +
                                  format_double(p) + "-summable");
        Estimate plateau{};
        if (a < k0_) {
            plateau.value = (k0_ - a) * ipow(base_value(k0_), p);
            a = k0_;
        }
        const double b = a + shift_;
        const double pr = p * r_;
        const double q = p * beta_;
        if (pr == 1.0) {
            const double L = std::log(b);
            return plateau + Estimate{std::pow(L, 1.0 - q) / (q - 1.0), 0.0};
        }
        // ∫_L^∞ e^{-σv} v^{-q} dv with v = log u, σ = pr - 1 > 0.
        const double sigma = pr - 1.0;
        if (q == 0.0) return plateau + Estimate{std::pow(b, -sigma) / sigma, 0.0};
        const double L = std::log(b);
        const double head = std::pow(b, -sigma) * std::pow(L, -q);
        const double lo = head / (sigma + q / L);
        const double hi = head / sigma;
        return plateau + Estimate{lo, hi - lo};
    }
    }
    return {};
}

Estimate TailModel::sum_power(double first, double p) const {
    switch (kind_) {
    case Kind::none:
        return {};
    case Kind::geometric: {
        const double v = std::pow(q_, p * (scale_ * first + offset_)) /
                         (1.0 - std::pow(q_, p * scale_));
        return {v, 0.0};
    }
    case Kind::powerlog: {
        // f(j) = base(s j + c)^p is nonincreasing, so
        // ∫_J^∞ f ≤ Σ_{j≥J} f(j) ≤ f(J) + ∫_J^∞ f.
        const Estimate integral = base_integral(scale_ * first + offset_, p);
        const double lo = integral.value / scale_;
        const double hi = ipow(value_at(first), p) + integral.upper() / scale_;
        return {lo, hi - lo};
    }
    }
    return {};
}

std::string TailModel::to_string() const {
    if (scale_ != 1.0 || offset_ != 0.0)
        throw SequenceError("tail with an affine index map has no text representation");
    switch (kind_) {
    case Kind::none:
        return "none";
    case Kind::geometric:
        return "geometric " + format_double(q_);
    case Kind::powerlog: {
        std::string s = "powerlog " + format_double(r_) + " " + format_double(beta_) + " " +
                        format_double(k0_);
        if (shift_ != 0.0) s += " " + format_double(shift_);
        return s;
    }
    }
    return "none";
}

TailModel TailModel::parse(std::string_view text) {
    std::istringstream in{std::string(trim(text))};
    std::string kind;
    in >> kind;
    std::vector<std::string> args;
    for (std::string tok; in >> tok;) args.push_back(tok);
    auto num = [&](std::size_t i) { return parse_double(args.at(i)); };
    if (kind == "none" && args.empty()) return none();
    if (kind == "geometric" && args.size() == 1) return geometric(num(0));
    if (kind == "powerlog" && (args.size() == 3 || args.size() == 4))
        return powerlog(num(0), num(1), num(2), args.size() == 4 ? num(3) : 0.0);
    throw SequenceError("unrecognised tail model '" + std::string(text) + "'");
}

std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::literal:
        return "literal";
    case Provenance::generator:
        return "generator";
    case Provenance::convolution_square:
        return "convolution_square";
    case Provenance::interleave:
        return "interleave";
    }
    return "literal";
}

// ------------------------------------------------------------ DecaySequence

DecaySequence::DecaySequence(std::vector<double> values, TailModel tail)
    : values_(std::move(values)), tail_(tail) {
    check_entries(values_, "DecaySequence");
    for (std::size_t n = 1; n < values_.size(); ++n) {
        if (values_[n] > values_[n - 1])
            throw SequenceError("DecaySequence: not nonincreasing at index " + std::to_string(n));
    }
    if (!tail_.is_none() && !values_.empty()) {
        const double first_tail = tail_.value_at(static_cast<double>(values_.size()));
        if (first_tail > values_.back())
            throw SequenceError("DecaySequence: tail model exceeds the last stored value");
    }
}

DecaySequence DecaySequence::powerlog(double beta, std::size_t length, double k0, double r) {
    const TailModel tail = TailModel::powerlog(r, beta, k0);
    std::vector<double> v(length);
    for (std::size_t n = 0; n < length; ++n) v[n] = tail.value_at(static_cast<double>(n));
    return DecaySequence(std::move(v), tail);
}

DecaySequence DecaySequence::geometric(double q, std::size_t length) {
    const TailModel tail = TailModel::geometric(q);
    std::vector<double> v(length);
    for (std::size_t n = 0; n < length; ++n) v[n] = tail.value_at(static_cast<double>(n));
    return DecaySequence(std::move(v), tail);
}

double DecaySequence::at(std::size_t n) const {
    if (n < values_.size()) return values_[n];
    return tail_.value_at(static_cast<double>(n));
}

// --------------------------------------------------------- SpectralSequence

SpectralSequence::SpectralSequence(std::vector<double> centered, TailModel positive_tail,
                                   TailModel negative_tail, Provenance provenance)
    : values_(std::move(centered)),
      positive_tail_(positive_tail),
      negative_tail_(negative_tail),
      provenance_(provenance) {
    if (values_.size() % 2 == 0)
        throw SequenceError("SpectralSequence: centered storage needs odd length");
    check_entries(values_, "SpectralSequence");
    bandwidth_ = static_cast<std::int64_t>(values_.size() / 2);
}

SpectralSequence SpectralSequence::from_values(std::vector<double> centered, TailModel tail) {
    return SpectralSequence(std::move(centered), tail, tail, Provenance::literal);
}

SpectralSequence SpectralSequence::from_map(const std::map<std::int64_t, double>& entries) {
    std::int64_t m = 0;
    for (const auto& [j, v] : entries) m = std::max(m, j < 0 ? -j : j);
    std::vector<double> centered(static_cast<std::size_t>(2 * m + 1), 0.0);
    for (const auto& [j, v] : entries) centered[static_cast<std::size_t>(j + m)] = v;
    return from_values(std::move(centered));
}

SpectralSequence SpectralSequence::powerlog(double beta, std::int64_t bandwidth, double k0,
                                            double r) {
    if (bandwidth < 0) throw SequenceError("powerlog: negative bandwidth");
    const TailModel tail = TailModel::powerlog(r, beta, k0);
    std::vector<double> centered(static_cast<std::size_t>(2 * bandwidth + 1));
    for (std::int64_t j = -bandwidth; j <= bandwidth; ++j)
        centered[static_cast<std::size_t>(j + bandwidth)] =
            tail.value_at(static_cast<double>(j < 0 ? -j : j));
    return SpectralSequence(std::move(centered), tail, tail, Provenance::generator);
}

SpectralSequence SpectralSequence::geometric(double q, std::int64_t bandwidth) {
    if (bandwidth < 0) throw SequenceError("geometric: negative bandwidth");
    const TailModel tail = TailModel::geometric(q);
    std::vector<double> centered(static_cast<std::size_t>(2 * bandwidth + 1));
    for (std::int64_t j = -bandwidth; j <= bandwidth; ++j)
        centered[static_cast<std::size_t>(j + bandwidth)] =
            tail.value_at(static_cast<double>(j < 0 ? -j : j));
    return SpectralSequence(std::move(centered), tail, tail, Provenance::generator);
}

double SpectralSequence::at(std::int64_t j) const {
    if (j > bandwidth_) return positive_tail_.value_at(static_cast<double>(j));
    if (j < -bandwidth_) return negative_tail_.value_at(static_cast<double>(-j));
    return values_[static_cast<std::size_t>(j + bandwidth_)];
}

bool SpectralSequence::is_symmetric() const {
    if (!(positive_tail_ == negative_tail_)) return false;
    for (std::int64_t j = 1; j <= bandwidth_; ++j) {
        if (at(j) != at(-j)) return false;
    }
    return true;
}

bool SpectralSequence::square_summable() const {
    return positive_tail_.summable(2.0) && negative_tail_.summable(2.0);
}

bool SpectralSequence::nonincreasing_on_nonnegative() const {
    for (std::int64_t j = 1; j <= bandwidth_; ++j) {
        if (at(j) > at(j - 1)) return false;
    }
    return positive_tail_.value_at(static_cast<double>(bandwidth_ + 1)) <= at(bandwidth_);
}

bool SpectralSequence::negative_side_dominates() const {
    for (std::int64_t j = 1; j <= bandwidth_; ++j) {
        if (at(-j) < at(j)) return false;
    }
    if (positive_tail_.is_none() || positive_tail_ == negative_tail_) return true;
    // Same generator on both sides, the negative side sampled no later.
    const TailModel& pos = positive_tail_;
    const TailModel& neg = negative_tail_;
    const bool same_base = pos.kind() == neg.kind() && pos.r() == neg.r() &&
                           pos.beta() == neg.beta() && pos.k0() == neg.k0() &&
                           pos.shift() == neg.shift() && pos.q() == neg.q() &&
                           pos.scale() == neg.scale();
    return same_base && neg.offset() <= pos.offset();
}

SpectralSequence SpectralSequence::truncated(std::int64_t m) const {
    if (m < 0) throw SequenceError("truncated: negative bandwidth");
    std::vector<double> centered(static_cast<std::size_t>(2 * m + 1));
    for (std::int64_t j = -m; j <= m; ++j) centered[static_cast<std::size_t>(j + m)] = at(j);
    const bool exact = m >= bandwidth_ && !has_tail();
    return SpectralSequence(std::move(centered), TailModel::none(), TailModel::none(),
                            exact ? provenance_ : Provenance::literal);
}

DecaySequence nonnegative_side(const SpectralSequence& gamma) {
    std::vector<double> v(static_cast<std::size_t>(gamma.bandwidth() + 1));
    for (std::int64_t j = 0; j <= gamma.bandwidth(); ++j) v[static_cast<std::size_t>(j)] = gamma.at(j);
    return DecaySequence(std::move(v), gamma.positive_tail());
}

// ------------------------------------------------------------- operations

SpectralSequence convolution_square(const SpectralSequence& mu) {
    if (mu.has_tail())
        throw SequenceError("convolution_square: mu must be finitely supported (no tail model)");
    const std::int64_t m = mu.bandwidth();
    std::vector<std::pair<std::int64_t, double>> support;
    for (std::int64_t j = -m; j <= m; ++j) {
        if (mu.at(j) != 0.0) support.emplace_back(j, mu.at(j));
    }
    if (support.empty()) throw SequenceError("convolution_square: mu is identically zero");

    // γ²_ℓ for ℓ ≥ 0; the negative side is mirrored so the result is exactly symmetric.
    const std::int64_t out_bw = 2 * m;
    std::vector<Accumulator> acc(static_cast<std::size_t>(out_bw + 1));
    for (std::size_t a = 0; a < support.size(); ++a) {
        for (std::size_t b = a; b < support.size(); ++b) {
            const std::int64_t ell = support[b].first - support[a].first;
            acc[static_cast<std::size_t>(ell)].add(support[a].second * support[b].second);
        }
    }
    std::vector<double> centered(static_cast<std::size_t>(2 * out_bw + 1));
    for (std::int64_t ell = 0; ell <= out_bw; ++ell) {
        const double g = std::sqrt(std::max(0.0, acc[static_cast<std::size_t>(ell)].value()));
        centered[static_cast<std::size_t>(out_bw + ell)] = g;
        centered[static_cast<std::size_t>(out_bw - ell)] = g;
    }
    return SpectralSequence(std::move(centered), TailModel::none(), TailModel::none(),
                            Provenance::convolution_square);
}

SpectralSequence interleave(const DecaySequence& a) {
    const auto m = static_cast<std::int64_t>(a.size() / 2);
    std::vector<double> centered(static_cast<std::size_t>(2 * m + 1));
    centered[static_cast<std::size_t>(m)] = a.at(0);
    for (std::int64_t k = 1; k <= m; ++k) {
        centered[static_cast<std::size_t>(m + k)] = a.at(static_cast<std::size_t>(2 * k));
        centered[static_cast<std::size_t>(m - k)] = a.at(static_cast<std::size_t>(2 * k - 1));
    }
    const TailModel pos = a.tail().is_none() ? TailModel::none() : a.tail().affine(2.0, 0.0);
    const TailModel neg = a.tail().is_none() ? TailModel::none() : a.tail().affine(2.0, -1.0);
    return SpectralSequence(std::move(centered), pos, neg, Provenance::interleave);
}

DecaySequence rearrangement(const SpectralSequence& gamma, std::optional<std::size_t> count) {
    if (gamma.has_tail() && !count)
        throw SequenceError("rearrangement: sequence has an infinite tail; a count is required");
    const std::int64_t m = gamma.bandwidth();
    std::vector<std::int64_t> order(static_cast<std::size_t>(2 * m + 1));
    std::iota(order.begin(), order.end(), -m);
    std::stable_sort(order.begin(), order.end(), [&](std::int64_t i, std::int64_t j) {
        const double vi = gamma.at(i);
        const double vj = gamma.at(j);
        if (vi != vj) return vi > vj;
        if ((i < 0) != (j < 0)) return i >= 0;
        return std::abs(i) < std::abs(j);
    });

    const std::size_t total = count.value_or(order.size());
    std::vector<double> out;
    out.reserve(total);
    std::size_t s = 0;
    std::int64_t jp = m + 1;
    std::int64_t jn = m + 1;
    const bool pos_tail = !gamma.positive_tail().is_none();
    const bool neg_tail = !gamma.negative_tail().is_none();
    while (out.size() < total) {
        const double vs = s < order.size() ? gamma.at(order[s]) : -1.0;
        const double vp = pos_tail ? gamma.at(jp) : -1.0;
        const double vn = neg_tail ? gamma.at(-jn) : -1.0;
        if (vs < 0.0 && vp < 0.0 && vn < 0.0) {
            out.push_back(0.0);
        } else if (vs >= vp && vs >= vn) {
            out.push_back(vs);
            ++s;
        } else if (vp >= vn) {
            out.push_back(vp);
            ++jp;
        } else {
            out.push_back(vn);
            ++jn;
        }
    }
    return DecaySequence(std::move(out));
}

DecaySequence rearrangement(const DecaySequence& values, std::optional<std::size_t> count) {
    if (!values.tail().is_none() && !count)
        throw SequenceError("rearrangement: sequence has an infinite tail; a count is required");
    const std::size_t total = count.value_or(values.size());
    std::vector<double> out(total);
    for (std::size_t n = 0; n < total; ++n) out[n] = values.at(n);
    return DecaySequence(std::move(out));
}

Estimate tail_sum_power(const SpectralSequence& gamma, std::int64_t from, double p) {
    const std::int64_t m = gamma.bandwidth();
    Accumulator acc;
    // negative tail part (from < -m): indices -|from| .. -(m+1), smallest first
    if (from < -m) {
        for (std::int64_t j = from; j < -m; ++j) acc.add(ipow(gamma.at(j), p));
    }
    for (std::int64_t j = m; j >= std::max(from, -m); --j) acc.add(ipow(gamma.at(j), p));
    const Estimate tail =
        gamma.positive_tail().sum_power(static_cast<double>(std::max(from, m + 1)), p);
    return {acc.value() + tail.value, tail.remainder};
}

Estimate tail_sum_sq(const SpectralSequence& gamma, std::int64_t from) {
    return tail_sum_power(gamma, from, 2.0);
}

Estimate tail_sum_power(const DecaySequence& v, std::size_t from, double p) {
    Accumulator acc;
    for (std::size_t n = v.size(); n-- > from;) acc.add(ipow(v.values()[n], p));
    const Estimate tail = v.tail().sum_power(static_cast<double>(std::max(from, v.size())), p);
    return {acc.value() + tail.value, tail.remainder};
}

Estimate tail_sum_sq(const DecaySequence& v, std::size_t from) {
    return tail_sum_power(v, from, 2.0);
}

Estimate outer_sum_sq(const SpectralSequence& gamma, std::int64_t m) {
    if (m < 0) return norm_sq(gamma);
    const std::int64_t bw = gamma.bandwidth();
    Accumulator acc;
    for (std::int64_t j = bw; j > m; --j) {
        acc.add(gamma.at(j) * gamma.at(j));
        acc.add(gamma.at(-j) * gamma.at(-j));
    }
    const double first = static_cast<double>(std::max(m, bw) + 1);
    const Estimate tail =
        gamma.positive_tail().sum_power(first, 2.0) + gamma.negative_tail().sum_power(first, 2.0);
    return {acc.value() + tail.value, tail.remainder};
}

Estimate norm_sq(const SpectralSequence& gamma) {
    const std::int64_t bw = gamma.bandwidth();
    Accumulator acc;
    for (std::int64_t j = bw; j >= 1; --j) {
        acc.add(gamma.at(j) * gamma.at(j));
        acc.add(gamma.at(-j) * gamma.at(-j));
    }
    acc.add(gamma.at(0) * gamma.at(0));
    const double first = static_cast<double>(bw + 1);
    const Estimate tail =
        gamma.positive_tail().sum_power(first, 2.0) + gamma.negative_tail().sum_power(first, 2.0);
    return {acc.value() + tail.value, tail.remainder};
}

// --------------------------------------------------------------- SuffixSums

SuffixSums::SuffixSums(const SpectralSequence& gamma) : tail_(gamma.positive_tail()) {
    const auto n = static_cast<std::size_t>(gamma.bandwidth() + 1);
    sq_.resize(n);
    quartic_.resize(n);
    Accumulator a2;
    Accumulator a4;
    for (std::size_t j = n; j-- > 0;) {
        const double g = gamma.at(static_cast<std::int64_t>(j));
        a2.add(g * g);
        a4.add(g * g * g * g);
        sq_[j] = a2.value();
        quartic_[j] = a4.value();
    }
}

Estimate SuffixSums::lookup(const std::vector<double>& table, double p, std::int64_t r) const {
    if (r < 0) throw SequenceError("SuffixSums: negative start index");
    const auto end = static_cast<std::int64_t>(table.size());
    if (r >= end) return tail_.sum_power(static_cast<double>(r), p);
    const Estimate tail = tail_.sum_power(static_cast<double>(end), p);
    return {table[static_cast<std::size_t>(r)] + tail.value, tail.remainder};
}

Estimate SuffixSums::sq(std::int64_t r) const { return lookup(sq_, 2.0, r); }
Estimate SuffixSums::quartic(std::int64_t r) const { return lookup(quartic_, 4.0, r); }

// -------------------------------------------------------------- regularity

RegularityReport check_b_regular(const DecaySequence& v, double b, std::size_t first,
                                 std::optional<std::size_t> last) {
    if (!(b > 0.0)) throw SequenceError("check_b_regular: b must be positive");
    RegularityReport rep;
    rep.first = first;
    if (last) {
        rep.last = *last;
    } else if (v.size() == 0) {
        rep.last = 0;
        rep.note = "empty sequence";
        rep.first = 1;
    } else {
        rep.last = (v.size() - 1) / 2;
    }
    if (rep.first > rep.last) {
        if (rep.note.empty()) rep.note = "insufficient range";
        return rep;
    }
    for (std::size_t n = rep.first; n <= rep.last; ++n) {
        const double base = v.at(n);
        const double doubled = v.at(2 * n);
        ++rep.checked;
        if (base == 0.0) continue;
        const double ratio = doubled / base;
        if (ratio < rep.min_ratio) {
            rep.min_ratio = ratio;
            rep.argmin = n;
        }
        if (doubled < b * base) rep.regular = false;
    }
    return rep;
}

// ------------------------------------------------------------- text format

std::string emit_sequence(const SpectralSequence& gamma) {
    if (!(gamma.positive_tail() == gamma.negative_tail()))
        throw SequenceError("emit_sequence: one-sided tail models cannot be serialized");
    std::ostringstream out;
    out << "kind=spectral bandwidth=" << gamma.bandwidth()
        << " tail=" << gamma.positive_tail().to_string() << '\n';
    for (std::int64_t j = -gamma.bandwidth(); j <= gamma.bandwidth(); ++j)
        out << j << ' ' << format_double(gamma.at(j)) << '\n';
    return out.str();
}

std::string emit_sequence(const DecaySequence& v) {
    if (v.size() == 0) throw SequenceError("emit_sequence: empty decay sequence");
    std::ostringstream out;
    out << "kind=decay bandwidth=" << v.size() - 1 << " tail=" << v.tail().to_string() << '\n';
    for (std::size_t n = 0; n < v.size(); ++n) out << n << ' ' << format_double(v.at(n)) << '\n';
    return out.str();
}

ParsedSequence parse_sequence(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::string header;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        header = std::string(t);
        break;
    }
    const auto kind_pos = header.find("kind=");
    const auto bw_pos = header.find("bandwidth=");
    const auto tail_pos = header.find("tail=");
    if (kind_pos == std::string::npos || bw_pos == std::string::npos ||
        tail_pos == std::string::npos || !(kind_pos < bw_pos && bw_pos < tail_pos))
        throw SequenceError("sequence header must read 'kind=... bandwidth=... tail=...'");
    const std::string kind{trim(std::string_view(header).substr(kind_pos + 5, bw_pos - kind_pos - 5))};
    const std::int64_t bw =
        parse_int(std::string_view(header).substr(bw_pos + 10, tail_pos - bw_pos - 10));
    const TailModel tail = TailModel::parse(std::string_view(header).substr(tail_pos + 5));
    if (bw < 0) throw SequenceError("sequence header: negative bandwidth");

    std::map<std::int64_t, double> entries;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto sp = t.find_first_of(" \t");
        if (sp == std::string_view::npos) throw SequenceError("malformed entry line: " + line);
        const std::int64_t idx = parse_int(t.substr(0, sp));
        const double val = parse_double(t.substr(sp + 1));
        if (!entries.emplace(idx, val).second)
            throw SequenceError("duplicate index " + std::to_string(idx));
    }

    auto fill = [&](std::int64_t idx) {
        const auto it = entries.find(idx);
        if (it != entries.end()) return it->second;
        return tail.value_at(static_cast<double>(idx < 0 ? -idx : idx));
    };

    ParsedSequence out;
    if (kind == "spectral") {
        for (const auto& [idx, val] : entries) {
            if (idx < -bw || idx > bw) throw SequenceError("index outside bandwidth: " + std::to_string(idx));
        }
        std::vector<double> centered(static_cast<std::size_t>(2 * bw + 1));
        for (std::int64_t j = -bw; j <= bw; ++j) centered[static_cast<std::size_t>(j + bw)] = fill(j);
        out.spectral = SpectralSequence::from_values(std::move(centered), tail);
    } else if (kind == "decay") {
        for (const auto& [idx, val] : entries) {
            if (idx < 0 || idx > bw) throw SequenceError("index outside range: " + std::to_string(idx));
        }
        std::vector<double> v(static_cast<std::size_t>(bw + 1));
        for (std::int64_t n = 0; n <= bw; ++n) v[static_cast<std::size_t>(n)] = fill(n);
        out.decay = DecaySequence(std::move(v), tail);
    } else {
        throw SequenceError("unknown sequence kind '" + kind + "'");
    }
    return out;
}

ParsedSequence load_sequence_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sequence file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sequence(buf.str());
}

}  // namespace sgap
