// sgap: sandwich tables, rate fits, certificate sweeps and the block
// composition demo.  Exit codes: 0 all checks passed, 1 violation, 2 usage.
#include "sgap/experiment.hpp"
#include "sgap/numfmt.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

namespace {

struct Options {
    std::string family = "powerlog";
    double beta = 1.0;
    double k0 = 3.0;
    double q = 0.5;
    std::string seq_file;
    std::string n_grid = "dyadic:4:12";
    std::int64_t bandwidth = 1 << 16;
    std::uint64_t seed = 0;
    std::string out;
    std::string target = "approx";
    std::int64_t r_max = 64;
    int j_max = 6;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--family", o.family, "powerlog | geometric | interleaved | musquare | file");
    cmd->add_option("--beta", o.beta, "log exponent of the powerlog family");
    cmd->add_option("--k0", o.k0, "plateau index of the powerlog family");
    cmd->add_option("--q", o.q, "ratio of the geometric family");
    cmd->add_option("--seq-file", o.seq_file, "sequence file (decay a, mu, or gamma)");
    cmd->add_option("--n-grid", o.n_grid, "dyadic:a:b or a comma-separated list");
    cmd->add_option("--bandwidth", o.bandwidth, "stored bandwidth M");
    cmd->add_option("--seed", o.seed, "seed recorded in every row");
    cmd->add_option("--out", o.out, "CSV output path (stdout when empty)");
}

sgap::ExperimentConfig make_config(const Options& o) {
    sgap::ExperimentConfig c;
    const auto family = sgap::parse_family(o.family);
    if (!family) throw std::invalid_argument("unknown family '" + o.family + "'");
    c.family = *family;
    c.beta = o.beta;
    c.k0 = o.k0;
    c.q = o.q;
    c.seq_file = o.seq_file;
    c.n_grid = sgap::parse_n_grid(o.n_grid);
    c.bandwidth = o.bandwidth;
    c.seed = o.seed;
    c.output_path = o.out;
    c.r_max = o.r_max;
    c.j_max = o.j_max;
    c.validate();
    return c;
}

void write_rows(const std::string& path, const std::vector<sgap::CsvRow>& rows) {
    const std::string text = sgap::emit_csv(rows);
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

int report(const sgap::RunResult& r) {
    for (const auto& v : r.violations) std::cerr << "violation: " << v << '\n';
    return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampling versus approximation numbers on H_gamma"};
    app.require_subcommand(1);
    Options o;

    auto* sandwich = app.add_subcommand("sandwich", "lower / measured / upper table per n");
    add_common(sandwich, o);
    auto* rates = app.add_subcommand("rates", "fit log v = c + s log n + e log log n");
    add_common(rates, o);
    rates->add_option("--target", o.target, "approx | sampling | integration | gap");
    auto* certify = app.add_subcommand("certify", "certificate sweep for a family");
    add_common(certify, o);
    certify->add_option("--r-max", o.r_max, "largest r of the interleaved schedule");
    auto* trace = app.add_subcommand("trace-infty", "block composition with sigma_k = k^-1/2");
    trace->add_option("--j-max", o.j_max, "number of blocks");
    trace->add_option("--out", o.out, "CSV output path (stdout when empty)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*trace) {
            if (o.j_max < 1) throw std::invalid_argument("--j-max must be at least 1");
            const auto res = sgap::run_trace_infty(o.j_max);
            write_rows(o.out, res.result.rows);
            return report(res.result);
        }
        const sgap::ExperimentConfig config = make_config(o);
        if (*sandwich) {
            const auto res = sgap::run_sandwich(config);
            write_rows(o.out, res.result.rows);
            return report(res.result);
        }
        if (*rates) {
            const auto target = sgap::parse_rate_target(o.target);
            if (!target) throw std::invalid_argument("unknown target '" + o.target + "'");
            const auto fit = sgap::run_rate_fit(config, *target);
            write_rows(o.out, sgap::rate_rows(config, *target, fit));
            std::cerr << "slope=" << sgap::format_double(fit.slope)
                      << " log_exponent=" << sgap::format_double(fit.log_exponent)
                      << " window=" << fit.n_min << ".." << fit.n_max << '\n';
            return 0;
        }
        if (*certify) {
            const auto res = sgap::run_certify(config);
            write_rows(o.out, res.rows);
            return report(res);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
