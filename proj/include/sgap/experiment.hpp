// Experiment drivers behind the `sgap` command line tool: sandwich tables,
// rate fits, certificate sweeps and the block-composition demo, all emitting
// rows of one CSV schema
//   family,n,lower_sq,lower_tag,measured,measured_remainder,upper,params,seed
#pragma once

#include "sgap/certify.hpp"
#include "sgap/recovery.hpp"
#include "sgap/seq.hpp"
#include "sgap/trace_infty.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sgap {

enum class Family { powerlog, geometric, interleaved, musquare, file };

std::string_view to_string(Family f);
std::optional<Family> parse_family(std::string_view text);

struct ExperimentConfig {
    Family family = Family::powerlog;
    double beta = 1.0;
    double k0 = 3.0;
    double q = 0.5;
    std::string seq_file;  // interleaved: decay a; musquare: μ; file: γ
    std::vector<std::int64_t> n_grid;
    std::int64_t bandwidth = 1 << 16;
    std::uint64_t seed = 0;
    std::string output_path;
    std::int64_t r_max = 64;  // interleaved certificate schedule
    int j_max = 6;            // block composition

    /// Throws std::invalid_argument on a malformed config.
    void validate() const;
    /// `key=value;...` summary of the family parameters.
    std::map<std::string, std::string> family_params() const;
};

/// `dyadic:a:b` (2^a..2^b) or a comma-separated list.
std::vector<std::int64_t> parse_n_grid(std::string_view text);

/// γ for the configured family.
SpectralSequence build_gamma(const ExperimentConfig& config);

struct CsvRow {
    std::string family;
    BigIndex n;
    std::optional<double> lower_sq;
    std::string lower_tag;
    std::optional<double> measured;
    std::optional<double> measured_remainder;
    std::optional<double> upper;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 0;

    friend bool operator==(const CsvRow&, const CsvRow&) = default;
};

std::string csv_header();
std::string emit_csv(const std::vector<CsvRow>& rows);
/// Inverse of emit_csv; throws std::invalid_argument on malformed input.
std::vector<CsvRow> parse_csv(std::string_view text);

struct RunResult {
    std::vector<CsvRow> rows;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

struct SandwichOutput {
    std::vector<BoundReport> reports;
    RunResult result;
};

/// Per n: certified lower bound, optimal equispaced quadrature error, and the
/// Dirichlet bound at m = ⌊(n-1)/2⌋ (valid for n nodes since the aliased mass
/// only shrinks as the node count grows, for symmetric nonincreasing γ).
SandwichOutput run_sandwich(const ExperimentConfig& config);

enum class RateTarget { approx, sampling, integration, gap };

std::string_view to_string(RateTarget t);
std::optional<RateTarget> parse_rate_target(std::string_view text);

struct RateFit {
    double slope = 0.0;
    double log_exponent = 0.0;
    double residual = 0.0;  // RMS of the log residuals
    std::int64_t n_min = 0;
    std::int64_t n_max = 0;
    std::vector<std::int64_t> n;
    std::vector<double> values;
};

/// Least squares fit of log v(n) = c + slope·log n + log_exponent·log log n
/// over the grid points with n ≥ 16.
RateFit fit_rate(const std::vector<std::int64_t>& n, const std::vector<double>& values);

/// Values for the powerlog family: approx a_n, sampling = Dirichlet bound at
/// ⌊(n-1)/2⌋, integration = optimal equispaced error, gap = sampling/approx.
RateFit run_rate_fit(const ExperimentConfig& config, RateTarget target);
std::vector<CsvRow> rate_rows(const ExperimentConfig& config, RateTarget target, const RateFit& fit);

/// Certificate sweep for the configured family; every integration
/// certificate is compared with the optimal equispaced error at its n.
RunResult run_certify(const ExperimentConfig& config);

struct TraceInftyOutput {
    IndexSelection selection;
    std::vector<BlockOracle> oracles;
    RunResult result;
};

/// σ_k = k^{-1/2}, τ_n = log^{-1/2}(n+2): selects n_0..n_{j_max}, composes
/// the block bounds and checks composed ≥ τ at each block start and on every
/// n < n_0 + exhaustive_count.
TraceInftyOutput run_trace_infty(int j_max, std::uint64_t exhaustive_count = 100000);

/// σ_k = k^{-1/2} (σ_0 = 1) and τ_n = log^{-1/2}(n+2) as sequences.
DecaySequence trace_demo_sigma(std::size_t length = 1 << 12);
DecaySequence trace_demo_tau();

}  // namespace sgap
