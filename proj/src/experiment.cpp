#include "sgap/experiment.hpp"

#include "sgap/numfmt.hpp"
#include "sgap/sampling.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

namespace sgap {

std::string_view to_string(Family f) {
    switch (f) {
    case Family::powerlog:
        return "powerlog";
    case Family::geometric:
        return "geometric";
    case Family::interleaved:
        return "interleaved";
    case Family::musquare:
        return "musquare";
    case Family::file:
        return "file";
    }
    return "";
}

std::optional<Family> parse_family(std::string_view text) {
    for (auto f : {Family::powerlog, Family::geometric, Family::interleaved, Family::musquare, Family::file})
        if (to_string(f) == text) return f;
    return std::nullopt;
}

void ExperimentConfig::validate() const {
    if (n_grid.empty()) throw std::invalid_argument("n grid is empty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 0) throw std::invalid_argument("n grid has a negative entry");
        if (i > 0 && n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("n grid must be strictly increasing");
    }
    if (bandwidth <= n_grid.back())
        throw std::invalid_argument("bandwidth must exceed the largest n");
    if (family == Family::geometric && !(q > 0.0 && q < 1.0))
        throw std::invalid_argument("geometric family needs 0 < q < 1");
    if (family == Family::powerlog && !(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    if (family == Family::file && seq_file.empty())
        throw std::invalid_argument("file family needs --seq-file");
    if (j_max < 1) throw std::invalid_argument("j_max must be at least 1");
}

std::map<std::string, std::string> ExperimentConfig::family_params() const {
    std::map<std::string, std::string> p;
    p["M"] = std::to_string(bandwidth);
    switch (family) {
    case Family::powerlog:
        p["beta"] = format_double(beta);
        p["k0"] = format_double(k0);
        break;
    case Family::geometric:
        p["q"] = format_double(q);
        break;
    case Family::interleaved:
    case Family::musquare:
    case Family::file:
        if (!seq_file.empty()) p["file"] = seq_file;
        if (family == Family::interleaved && seq_file.empty()) {
            p["beta"] = format_double(beta);
            p["k0"] = format_double(k0);
        }
        break;
    }
    return p;
}

std::vector<std::int64_t> parse_n_grid(std::string_view text) {
    std::vector<std::int64_t> out;
    text = trim(text);
    if (text.starts_with("dyadic:")) {
        text.remove_prefix(7);
        const auto colon = text.find(':');
        if (colon == std::string_view::npos) throw std::invalid_argument("dyadic grid needs dyadic:a:b");
        const std::int64_t a = parse_int(text.substr(0, colon));
        const std::int64_t b = parse_int(text.substr(colon + 1));
        if (a < 0 || b < a || b > 62) throw std::invalid_argument("dyadic grid exponents out of range");
        for (std::int64_t e = a; e <= b; ++e) out.push_back(std::int64_t{1} << e);
        return out;
    }
    while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(parse_int(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

namespace {

DecaySequence load_decay(const std::string& path) {
    ParsedSequence p = load_sequence_file(path);
    if (!p.decay) throw std::invalid_argument(path + " does not hold a decay sequence");
    return *p.decay;
}

SpectralSequence load_spectral(const std::string& path) {
    ParsedSequence p = load_sequence_file(path);
    if (!p.spectral) throw std::invalid_argument(path + " does not hold a spectral sequence");
    return *p.spectral;
}

}  // namespace

SpectralSequence build_gamma(const ExperimentConfig& config) {
    switch (config.family) {
    case Family::powerlog:
        return SpectralSequence::powerlog(config.beta, config.bandwidth, config.k0);
    case Family::geometric:
        return SpectralSequence::geometric(config.q, config.bandwidth);
    case Family::interleaved: {
        const DecaySequence a =
            config.seq_file.empty()
                ? DecaySequence::powerlog(config.beta, static_cast<std::size_t>(2 * config.bandwidth + 1),
                                          config.k0)
                : load_decay(config.seq_file);
        return interleave(a);
    }
    case Family::musquare: {
        const SpectralSequence mu = config.seq_file.empty()
                                        ? SpectralSequence::from_map({{0, 1.0}, {1, 1.0}})
                                        : load_spectral(config.seq_file);
        return convolution_square(mu);
    }
    case Family::file:
        return load_spectral(config.seq_file);
    }
    throw std::invalid_argument("unknown family");
}

// ------------------------------------------------------------------- CSV

std::string csv_header() { return "family,n,lower_sq,lower_tag,measured,measured_remainder,upper,params,seed"; }

namespace {

void check_field(const std::string& s, bool in_params) {
    for (char c : s) {
        if (c == ',' || c == '\n' || c == '\r' || (in_params && (c == ';' || c == '=')))
            throw std::invalid_argument("CSV field contains a reserved character: '" + s + "'");
    }
}

std::string opt_field(const std::optional<double>& v) { return v ? format_double17(*v) : std::string(); }

std::optional<double> parse_opt(std::string_view s) {
    if (trim(s).empty()) return std::nullopt;
    return parse_double(s);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = s.find(sep);
        out.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return out;
}

}  // namespace

std::string emit_csv(const std::vector<CsvRow>& rows) {
    std::ostringstream out;
    out << csv_header() << '\n';
    for (const CsvRow& r : rows) {
        check_field(r.family, false);
        check_field(r.lower_tag, false);
        std::string params;
        for (const auto& [k, v] : r.params) {
            check_field(k, true);
            check_field(v, true);
            if (!params.empty()) params += ';';
            params += k + '=' + v;
        }
        out << r.family << ',' << r.n.str() << ',' << opt_field(r.lower_sq) << ',' << r.lower_tag << ','
            << opt_field(r.measured) << ',' << opt_field(r.measured_remainder) << ','
            << opt_field(r.upper) << ',' << params << ',' << r.seed << '\n';
    }
    return out.str();
}

std::vector<CsvRow> parse_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    bool header = true;
    for (std::string_view line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (header) {
            if (line != csv_header()) throw std::invalid_argument("CSV header mismatch");
            header = false;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 9) throw std::invalid_argument("CSV row needs 9 fields: " + std::string(line));
        CsvRow r;
        r.family = std::string(f[0]);
        try {
            r.n = BigIndex(std::string(trim(f[1])));
        } catch (const std::exception&) {
            throw std::invalid_argument("CSV row has a malformed n: " + std::string(f[1]));
        }
        r.lower_sq = parse_opt(f[2]);
        r.lower_tag = std::string(f[3]);
        r.measured = parse_opt(f[4]);
        r.measured_remainder = parse_opt(f[5]);
        r.upper = parse_opt(f[6]);
        if (!f[7].empty()) {
            for (std::string_view kv : split(f[7], ';')) {
                const auto eq = kv.find('=');
                if (eq == std::string_view::npos) throw std::invalid_argument("CSV params entry without '='");
                r.params[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
            }
        }
        const std::int64_t seed = parse_int(f[8]);
        if (seed < 0) throw std::invalid_argument("CSV seed must be nonnegative");
        r.seed = static_cast<std::uint64_t>(seed);
        rows.push_back(std::move(r));
    }
    if (header) throw std::invalid_argument("CSV input is empty");
    return rows;
}

// -------------------------------------------------------------- sandwich

namespace {

struct LowerBound {
    double bound_sq = 0.0;
    std::string tag;
    std::map<std::string, std::string> params;
};

std::optional<LowerBound> certified_lower(const SpectralSequence& gamma,
                                          const std::optional<TailBlockScanner>& blocks,
                                          std::int64_t n, std::int64_t r_limit) {
    if (gamma.provenance() == Provenance::convolution_square) {
        const Certificate c = convolution_square_lower(gamma, n);
        return LowerBound{c.bound_sq, std::string(to_string(c.tag)), {}};
    }
    if (!blocks) return std::nullopt;
    for (std::int64_t r = 0; r <= r_limit; ++r) {
        if (blocks->count(r).n_lo < n) continue;
        return LowerBound{blocks->bound_sq(r, n), std::string(to_string(CertificateTag::tail_block)),
                          {{"r", std::to_string(r)}}};
    }
    return std::nullopt;
}

std::optional<TailBlockScanner> try_blocks(const SpectralSequence& gamma) {
    try {
        return TailBlockScanner(gamma);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string describe(const BoundReport& r) {
    std::ostringstream out;
    out << "n=" << r.n;
    if (r.lower_sq) out << " lower=" << format_double17(std::sqrt(std::max(*r.lower_sq, 0.0)));
    if (r.measured) out << " measured=" << format_double17(*r.measured) << "+" << format_double17(r.measured_remainder);
    if (r.upper) out << " upper=" << format_double17(*r.upper);
    return out.str();
}

}  // namespace

SandwichOutput run_sandwich(const ExperimentConfig& config) {
    config.validate();
    const SpectralSequence gamma = build_gamma(config);
    const std::optional<TailBlockScanner> blocks = try_blocks(gamma);
    const bool dirichlet_ok = gamma.is_symmetric() && gamma.nonincreasing_on_nonnegative();
    const std::int64_t r_limit = 2 * std::max(config.bandwidth, gamma.bandwidth());

    std::vector<std::future<std::pair<BoundReport, std::map<std::string, std::string>>>> jobs;
    for (std::int64_t n : config.n_grid) {
        jobs.push_back(std::async(std::launch::async, [&, n] {
            BoundReport rep;
            rep.n = n;
            std::map<std::string, std::string> extra;
            if (auto lb = certified_lower(gamma, blocks, n, r_limit)) {
                rep.lower_sq = lb->bound_sq;
                rep.lower_tag = lb->tag;
                extra = lb->params;
            }
            const EquispacedResult eq = equispaced_integration(gamma, n);
            rep.measured = eq.error.value;
            rep.measured_remainder = eq.error.remainder;
            const std::int64_t m = (n - 1) / 2;
            if (dirichlet_ok && m >= 1) rep.upper = dirichlet_upper_bound(gamma, m);
            return std::make_pair(rep, extra);
        }));
    }

    SandwichOutput out;
    const auto base = config.family_params();
    for (auto& job : jobs) {
        auto [rep, extra] = job.get();
        if (!rep.consistent(1e-8)) out.result.violations.push_back("sandwich violated: " + describe(rep));
        CsvRow row;
        row.family = std::string(to_string(config.family));
        row.n = rep.n;
        row.lower_sq = rep.lower_sq;
        row.lower_tag = rep.lower_tag;
        row.measured = rep.measured;
        row.measured_remainder = rep.measured_remainder;
        row.upper = rep.upper;
        row.params = base;
        row.params.insert(extra.begin(), extra.end());
        row.seed = config.seed;
        out.result.rows.push_back(std::move(row));
        out.reports.push_back(rep);
    }
    return out;
}

// ------------------------------------------------------------ rate fits

std::string_view to_string(RateTarget t) {
    switch (t) {
    case RateTarget::approx:
        return "approx";
    case RateTarget::sampling:
        return "sampling";
    case RateTarget::integration:
        return "integration";
    case RateTarget::gap:
        return "gap";
    }
    return "";
}

std::optional<RateTarget> parse_rate_target(std::string_view text) {
    for (auto t : {RateTarget::approx, RateTarget::sampling, RateTarget::integration, RateTarget::gap})
        if (to_string(t) == text) return t;
    return std::nullopt;
}

RateFit fit_rate(const std::vector<std::int64_t>& n, const std::vector<double>& values) {
    if (n.size() != values.size()) throw std::invalid_argument("fit_rate: size mismatch");
    RateFit fit;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] < 16) continue;
        if (!(values[i] > 0.0)) throw std::invalid_argument("fit_rate: values must be positive");
        fit.n.push_back(n[i]);
        fit.values.push_back(values[i]);
    }
    if (fit.n.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points with n >= 16");
    const auto k = static_cast<Eigen::Index>(fit.n.size());
    Eigen::MatrixXd a(k, 3);
    Eigen::VectorXd y(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double ln = std::log(static_cast<double>(fit.n[static_cast<std::size_t>(i)]));
        a(i, 0) = 1.0;
        a(i, 1) = ln;
        a(i, 2) = std::log(ln);
        y(i) = std::log(fit.values[static_cast<std::size_t>(i)]);
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
    fit.slope = c(1);
    fit.log_exponent = c(2);
    fit.residual = std::sqrt((a * c - y).squaredNorm() / static_cast<double>(k));
    fit.n_min = fit.n.front();
    fit.n_max = fit.n.back();
    return fit;
}

RateFit run_rate_fit(const ExperimentConfig& config, RateTarget target) {
    config.validate();
    if (config.family != Family::powerlog)
        throw std::invalid_argument("rate fits are supported for the powerlog family only");
    const SpectralSequence gamma = build_gamma(config);
    const auto approx = [&](std::int64_t n) {
        return approximation_numbers(gamma, static_cast<std::size_t>(n + 1)).at(static_cast<std::size_t>(n));
    };
    const auto sampling = [&](std::int64_t n) {
        return dirichlet_upper_bound(gamma, std::max<std::int64_t>((n - 1) / 2, 1));
    };
    std::vector<double> values;
    for (std::int64_t n : config.n_grid) {
        switch (target) {
        case RateTarget::approx:
            values.push_back(approx(n));
            break;
        case RateTarget::sampling:
            values.push_back(sampling(n));
            break;
        case RateTarget::integration:
            values.push_back(equispaced_integration(gamma, n).error.value);
            break;
        case RateTarget::gap:
            values.push_back(sampling(n) / approx(n));
            break;
        }
    }
    return fit_rate(config.n_grid, values);
}

std::vector<CsvRow> rate_rows(const ExperimentConfig& config, RateTarget target, const RateFit& fit) {
    std::vector<CsvRow> rows;
    auto params = config.family_params();
    params["target"] = std::string(to_string(target));
    params["slope"] = format_double(fit.slope);
    params["log_exponent"] = format_double(fit.log_exponent);
    params["residual"] = format_double(fit.residual);
    params["window"] = std::to_string(fit.n_min) + ".." + std::to_string(fit.n_max);
    for (std::size_t i = 0; i < fit.n.size(); ++i) {
        CsvRow row;
        row.family = std::string(to_string(config.family));
        row.n = fit.n[i];
        row.lower_tag = "rate_" + std::string(to_string(target));
        row.measured = fit.values[i];
        row.params = params;
        row.seed = config.seed;
        rows.push_back(std::move(row));
    }
    return rows;
}

// ------------------------------------------------------------- certify

RunResult run_certify(const ExperimentConfig& config) {
    config.validate();
    const SpectralSequence gamma = build_gamma(config);
    std::vector<Certificate> certs;
    std::map<std::string, std::string> extra;

    switch (config.family) {
    case Family::musquare: {
        const double ratio = norm_sq(gamma).value / (gamma.at(0) * gamma.at(0));
        const auto last = static_cast<std::int64_t>(std::ceil(ratio));
        for (std::int64_t n = 0; n <= last; ++n) certs.push_back(convolution_square_lower(gamma, n));
        break;
    }
    case Family::interleaved: {
        const DecaySequence a = config.seq_file.empty()
                                    ? DecaySequence::powerlog(config.beta,
                                                              static_cast<std::size_t>(2 * config.bandwidth + 1),
                                                              config.k0)
                                    : load_decay(config.seq_file);
        certs = interleaved_lower_schedule(a, config.r_max);
        break;
    }
    case Family::powerlog:
    case Family::geometric:
    case Family::file: {
        const TailBlockScanner blocks(gamma);
        for (std::int64_t r : config.n_grid) certs.push_back(blocks.at(r));
        // Regularity constant measured on the stored range.
        const RegularityReport reg =
            check_b_regular(nonnegative_side(gamma), 1e-300, 1, static_cast<std::size_t>(gamma.bandwidth() / 2));
        extra["b_measured"] = format_double(reg.min_ratio);
        if (reg.min_ratio > 1e-3) {
            const RegularScanner scan(gamma, reg.min_ratio,
                                      {.r_budget = 2 * gamma.bandwidth(), .check_first = 1, .check_last = {}});
            for (std::int64_t n : config.n_grid) {
                if (n >= 1) certs.push_back(scan.at(n));
            }
        }
        break;
    }
    }

    RunResult out;
    const auto base = config.family_params();
    for (const Certificate& c : certs) {
        CsvRow row;
        row.family = std::string(to_string(config.family));
        row.n = c.n;
        row.lower_sq = c.bound_sq;
        row.lower_tag = std::string(to_string(c.tag));
        row.params = base;
        row.params.insert(extra.begin(), extra.end());
        for (const auto& [k, v] : c.params) row.params[k] = format_double(v);
        row.params["quantity"] = c.quantity == BoundQuantity::integration ? "integration" : "sampling";
        row.seed = config.seed;
        if (c.quantity == BoundQuantity::integration) {
            const Estimate e = equispaced_integration(gamma, c.n).error;
            row.measured = e.value;
            row.measured_remainder = e.remainder;
            if (std::sqrt(c.bound_sq) > e.upper() + 1e-8)
                out.violations.push_back("certificate exceeds measured error at n=" + std::to_string(c.n) +
                                         " (" + row.lower_tag + ")");
        }
        if (c.bound_sq < 0.0 || c.bound_sq > gamma.at(0) * gamma.at(0) * (1.0 + 1e-12))
            out.violations.push_back("certificate outside [0, gamma_0^2] at n=" + std::to_string(c.n));
        out.rows.push_back(std::move(row));
    }
    std::stable_sort(out.rows.begin(), out.rows.end(),
                     [](const CsvRow& a, const CsvRow& b) { return a.n < b.n; });
    return out;
}

// --------------------------------------------------------- trace_infty

DecaySequence trace_demo_sigma(std::size_t length) { return DecaySequence::powerlog(0.0, length, 1.0, 0.5); }

DecaySequence trace_demo_tau() {
    const TailModel tail = TailModel::powerlog(0.0, 0.5, 0.0, 2.0);
    return DecaySequence({tail.value_at(0.0)}, tail);
}

TraceInftyOutput run_trace_infty(int j_max, std::uint64_t exhaustive_count) {
    const DecaySequence sigma = trace_demo_sigma();
    const DecaySequence tau = trace_demo_tau();
    TraceInftyOutput out;
    out.selection = select_indices(sigma, tau, j_max);
    out.oracles = block_oracles(sigma, out.selection);
    const BigIndex& first = out.selection.indices.front();
    const BigIndex& last = out.selection.indices.back();

    const auto check = [&](const BigIndex& n) {
        const double bound = composed_lower_bound(out.oracles, n);
        const double t = value_at(tau, n);
        if (bound < t) out.result.violations.push_back("composed bound below tau at n=" + n.str());
    };
    for (const BlockOracle& o : out.oracles) {
        check(o.start);
        check((o.start + o.end) >> 1);
        check(o.end - 1);
    }
    for (std::uint64_t i = 0; i < exhaustive_count; ++i) {
        const BigIndex n = first + i;
        if (n >= last) break;
        check(n);
    }

    for (const BlockOracle& o : out.oracles) {
        CsvRow row;
        row.family = "trace_infty";
        row.n = o.start;
        const double bound = composed_lower_bound(out.oracles, o.start);
        row.lower_sq = bound * bound;
        row.lower_tag = "composed";
        row.measured = value_at(tau, o.start);
        row.params["j"] = std::to_string(o.j);
        row.params["end"] = o.end.str();
        row.params["end_log"] = format_double(log_of(o.end));
        row.params["threshold"] = format_double(out.selection.thresholds[static_cast<std::size_t>(o.j - 1)]);
        out.result.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace sgap
