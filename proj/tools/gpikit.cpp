#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gpikit/errors.hpp"
#include "gpikit/moments.hpp"
#include "gpikit/polynomial.hpp"
#include "gpikit/verifier.hpp"
#include "gpikit/version.hpp"

namespace {

using namespace gpikit;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

ExponentVector parse_exponents(const std::string& text) {
    ExponentVector p;
    for (const std::string& part : split(text, ',')) {
        std::size_t used = 0;
        const int value = std::stoi(part, &used);
        if (used != part.size()) throw InvalidArgument("bad exponent '" + part + "'");
        p.push_back(value);
    }
    if (p.empty()) throw InvalidArgument("empty exponent list");
    return p;
}

std::vector<Rational> parse_rationals(const std::string& text) {
    std::vector<Rational> values;
    for (const std::string& part : split(text, ',')) values.push_back(parse_rational(part));
    return values;
}

CovarianceMatrix<Rational> parse_covariance(const std::string& corr, const std::string& cov,
                                            std::size_t arity) {
    if (!corr.empty() && !cov.empty())
        throw InvalidArgument("give either --corr or --cov, not both");
    if (!corr.empty()) {
        const auto values = parse_rationals(corr);
        if (values.size() != 3) throw InvalidArgument("--corr needs exactly a,b,c");
        if (arity != 3) throw InvalidArgument("--corr implies three exponents");
        return unit_diagonal3<Rational>(values[0], values[1], values[2]);
    }
    if (cov.empty()) throw InvalidArgument("provide --corr a,b,c or --cov row-major entries");
    const auto values = parse_rationals(cov);
    const auto n = arity;
    if (values.size() != n * n)
        throw InvalidArgument("--cov needs n*n row-major entries matching --p");
    CovarianceMatrix<Rational> matrix(static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (values[i * n + j] != values[j * n + i])
                throw InvalidArgument("--cov must be symmetric");
            matrix.set(static_cast<int>(i), static_cast<int>(j), values[i * n + j]);
        }
    return matrix;
}

void write_or_print(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot open output file '" + path + "'");
    out << payload;
}

std::string records_json(const Poly3& poly) {
    std::ostringstream out;
    out << "[";
    bool first = true;
    for (const PolyTermRecord& rec : to_records(poly)) {
        out << (first ? "" : ",") << "\n  [" << rec.i << ", " << rec.j << ", " << rec.k << ", \""
            << rec.numerator << "\", \"" << rec.denominator << "\"]";
        first = false;
    }
    out << (first ? "" : "\n") << "]\n";
    return out.str();
}

int run(int argc, char** argv) {
    CLI::App app{"exact Gaussian moment engine and GPI(3) verification toolkit"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::string p_text, corr_text, cov_text, out_path;
    std::string format = "text";
    double resolution = 0.05;
    int sample_count = 1000000;
    std::uint64_t seed = 0;
    int workers = 0;
    int dimension = 3;
    int count = 200;

    auto* cmd_moment = app.add_subcommand("moment", "exact moment E[prod X_i^{k_i}]");
    cmd_moment->add_option("--p", p_text, "exponents k1,k2,...")->required();
    cmd_moment->add_option("--corr", corr_text, "unit-diagonal off-diagonals a,b,c");
    cmd_moment->add_option("--cov", cov_text, "row-major covariance entries");

    auto* cmd_phi = app.add_subcommand("phi", "moment polynomial Phi_p(a,b,c)");
    cmd_phi->add_option("--p", p_text, "exponents p1,p2,p3")->required();
    cmd_phi->add_option("--format", format, "text | json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd_phi->add_option("--out", out_path, "write output to file");

    auto* cmd_verify = app.add_subcommand("verify", "full GPI(3) verification");
    cmd_verify->add_option("--p", p_text, "even exponents p1,p2,p3")->required();
    cmd_verify->add_option("--resolution", resolution, "grid spacing (default 0.05)");
    cmd_verify->add_option("--samples", sample_count, "Monte Carlo sample count");
    cmd_verify->add_option("--seed", seed, "random seed");
    cmd_verify->add_option("--workers", workers, "worker threads (0 = auto/GPIKIT_WORKERS)");
    cmd_verify->add_option("--out", out_path, "write JSON report to file");
    cmd_verify->add_option("--format", format, "stdout format: text | json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* cmd_identities = app.add_subcommand("identities", "exact identity suites");
    cmd_identities->add_option("--p", p_text, "exponents p1,p2,p3")->required();

    auto* cmd_chain = app.add_subcommand("chain", "induction chain down to (2,2,2)");
    cmd_chain->add_option("--p", p_text, "even exponents p1,p2,p3")->required();
    cmd_chain->add_option("--resolution", resolution, "grid spacing for the base verify");
    cmd_chain->add_option("--samples", sample_count, "Monte Carlo sample count");
    cmd_chain->add_option("--seed", seed, "random seed");
    cmd_chain->add_option("--workers", workers, "worker threads");
    cmd_chain->add_option("--out", out_path, "write JSON report to file");

    auto* cmd_scan = app.add_subcommand("scan", "grid scan CSV (a,b,c,phi,margin)");
    cmd_scan->add_option("--p", p_text, "even exponents p1,p2,p3")->required();
    cmd_scan->add_option("--resolution", resolution, "grid spacing (default 0.05)");
    cmd_scan->add_option("--workers", workers, "worker threads");
    cmd_scan->add_option("--out", out_path, "write CSV to file (default stdout)");

    auto* cmd_alltwos = app.add_subcommand("alltwos", "GPI_n(2,...,2) sampled exact check");
    cmd_alltwos->add_option("--n", dimension, "dimension 2..6")->required();
    cmd_alltwos->add_option("--count", count, "number of random matrices");
    cmd_alltwos->add_option("--seed", seed, "random seed");
    cmd_alltwos->add_option("--out", out_path, "write JSON report to file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_moment->parsed()) {
            const ExponentVector k = parse_exponents(p_text);
            const auto cov = parse_covariance(corr_text, cov_text, k.size());
            const Rational value = moment(cov, k);
            std::cout << to_string(value) << " (" << to_double(value) << ")\n";
            return 0;
        }
        if (cmd_phi->parsed()) {
            const ExponentVector p = parse_exponents(p_text);
            const Poly3 poly = phi_polynomial(p);
            write_or_print(out_path, format == "json" ? records_json(poly) : poly.to_text() + "\n");
            return 0;
        }
        if (cmd_verify->parsed()) {
            const RunConfig config{parse_exponents(p_text), resolution, sample_count, seed, workers};
            const VerificationReport report = verify_gpi3(config);
            std::cout << (format == "json" ? to_json(report) : to_text(report));
            if (!out_path.empty()) write_or_print(out_path, to_json(report));
            return report.pass ? 0 : 1;
        }
        if (cmd_identities->parsed()) {
            const ExponentVector p = parse_exponents(p_text);
            bool pass = true;
            const auto print = [&pass](const char* title, const IdentityReport& report) {
                std::cout << title << ": " << (report.pass ? "pass" : "FAIL") << "\n";
                for (const IdentityCheck& check : report.checks) {
                    std::cout << "  " << (check.pass ? "pass" : "FAIL") << "  " << check.name << "\n";
                    if (!check.pass) std::cout << "        residual " << check.residual.to_text() << "\n";
                }
                pass = pass && report.pass;
            };
            print("derivative identity", check_derivative_identity(p));
            print("stein reduction", check_stein_reduction(p));
            print("edge reduction", check_edge_reduction(p));
            return pass ? 0 : 1;
        }
        if (cmd_chain->parsed()) {
            const ExponentVector p = parse_exponents(p_text);
            RunConfig base;
            base.resolution = resolution;
            base.sample_count = sample_count;
            base.seed = seed;
            base.workers = workers;
            const ChainReport report = induction_chain(p, base);
            std::cout << to_text(report);
            if (!out_path.empty()) write_or_print(out_path, to_json(report));
            return report.pass ? 0 : 1;
        }
        if (cmd_scan->parsed()) {
            const ScanResult scan =
                grid_scan(parse_exponents(p_text), resolution, workers, /*keep_rows=*/true);
            std::ostringstream csv;
            write_scan_csv(csv, scan);
            write_or_print(out_path, csv.str());
            if (!out_path.empty())
                std::cout << "scanned " << scan.points << " points, min " << scan.min_value_exact
                          << ", margin " << scan.margin_exact << ", "
                          << (scan.pass ? "pass" : "FAIL") << "\n";
            return scan.pass ? 0 : 1;
        }
        if (cmd_alltwos->parsed()) {
            const AllTwosReport report = check_all_twos(dimension, count, seed);
            std::cout << to_text(report);
            if (!out_path.empty()) write_or_print(out_path, to_json(report));
            return report.pass ? 0 : 1;
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    return run(argc, argv);
}
