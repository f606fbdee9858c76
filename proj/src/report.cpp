#include <cmath>
#include <sstream>

#include "json.hpp"

#include "gpikit/verifier.hpp"
#include "gpikit/version.hpp"

namespace gpikit {

namespace {

using nlohmann::json;

// JSON has no infinities; clamp so failure reports stay well-typed.
double finite(double v) {
    if (std::isnan(v)) return 0.0;
    if (std::isinf(v)) return v > 0 ? 1e308 : -1e308;
    return v;
}

json to_json(const CorrelationPoint& p) {
    return json::array({p.a, p.b, p.c});
}

json to_json(const RunConfig& config) {
    return {{"p", config.p},
            {"resolution", config.resolution},
            {"sample_count", config.sample_count},
            {"seed", config.seed}};
}

json to_json(const ScanResult& scan) {
    return {{"points", scan.points},
            {"resolution", scan.resolution},
            {"phi_at_identity", scan.phi_at_identity},
            {"phi_at_identity_exact", scan.phi_at_identity_exact},
            {"min_value", scan.min_value},
            {"min_value_exact", scan.min_value_exact},
            {"argmin", to_json(scan.argmin)},
            {"margin", scan.margin},
            {"margin_exact", scan.margin_exact},
            {"origin_on_grid", scan.origin_on_grid},
            {"origin_is_argmin", scan.origin_is_argmin},
            {"strict_away_from_origin", scan.strict_away_from_origin},
            {"pass", scan.pass}};
}

json to_json(const CriticalPointRecord& rec) {
    return {{"start", to_json(rec.start)},
            {"point", to_json(rec.point)},
            {"grad_norm", finite(rec.grad_norm)},
            {"phi_value", rec.phi_value},
            {"iterations", rec.iterations},
            {"converged", rec.converged},
            {"at_origin", rec.at_origin}};
}

json to_json(const CriticalScanResult& result) {
    json records = json::array();
    for (const auto& rec : result.records) records.push_back(to_json(rec));
    json clusters = json::array();
    for (const auto& rep : result.clusters) clusters.push_back(to_json(rep));
    return {{"records", records},
            {"clusters", clusters},
            {"converged", result.converged},
            {"single_origin_cluster", result.single_origin_cluster},
            {"pass", result.pass}};
}

json to_json(const BoundaryScanResult& result) {
    return {{"phi_at_identity", result.phi_at_identity},
            {"face_count", result.face_count},
            {"face_min", result.face_min},
            {"face_argmin", to_json(result.face_argmin)},
            {"edge_count", result.edge_count},
            {"edge_min", result.edge_min},
            {"edge_min_exact", result.edge_min_exact},
            {"edge_argmin", to_json(result.edge_argmin)},
            {"min_value", result.min_value},
            {"margin", result.margin},
            {"pass", result.pass}};
}

json to_json(const LagrangeReport& report) {
    return {{"count", report.count},
            {"worst_residual", finite(report.worst_residual)},
            {"worst_point", to_json(report.worst_point)},
            {"pass", report.pass}};
}

json to_json(const AdjugateSweepReport& report) {
    return {{"count", report.count},
            {"worst_residual", finite(report.worst_residual)},
            {"worst_point", to_json(report.worst_point)},
            {"lambda_at_worst", report.lambda_at_worst},
            {"pass", report.pass}};
}

json to_json(const HessianReport& report) {
    return {{"diag", report.diag},
            {"diag_exact", report.diag_exact},
            {"diag_formula", report.diag_formula},
            {"off_diagonal_zero", report.off_diagonal_zero},
            {"formula_matches", report.formula_matches},
            {"positive_definite", report.positive_definite},
            {"pass", report.pass}};
}

json to_json(const std::vector<IdentitySummary>& checks) {
    json out = json::array();
    for (const auto& check : checks)
        out.push_back({{"name", check.name}, {"pass", check.pass}, {"residual", check.residual}});
    return out;
}

json to_json(const McSpotReport& report) {
    json checks = json::array();
    for (const auto& check : report.checks)
        checks.push_back({{"point", to_json(check.point)},
                          {"exact_value", check.exact_value},
                          {"estimate", check.estimate},
                          {"std_error", check.std_error},
                          {"error_in_se", finite(check.error_in_se)},
                          {"pass", check.pass}});
    return {{"points", report.points},
            {"sample_count", report.sample_count},
            {"seed", report.seed},
            {"checks", checks},
            {"pass", report.pass}};
}

json report_body(const VerificationReport& report) {
    return {{"schema", kReportSchemaVersion},
            {"tool_version", kToolVersion},
            {"config", to_json(report.config)},
            {"phi_identity", report.phi_identity},
            {"phi_identity_exact", report.phi_identity_exact},
            {"grid", to_json(report.grid)},
            {"critical", to_json(report.critical)},
            {"boundary", to_json(report.boundary)},
            {"lagrange", to_json(report.lagrange)},
            {"adjugate", to_json(report.adjugate)},
            {"hessian", to_json(report.hessian)},
            {"derivative_identity", to_json(report.derivative_identity)},
            {"stein_reduction", to_json(report.stein_reduction)},
            {"edge_reduction", to_json(report.edge_reduction)},
            {"mc", to_json(report.mc)},
            {"verdict", report.pass ? "PASS" : "FAIL"},
            {"pass", report.pass}};
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

const char* passfail(bool pass) {
    return pass ? "pass" : "FAIL";
}

std::string point_text(const CorrelationPoint& p) {
    std::ostringstream out;
    out << "(" << p.a << ", " << p.b << ", " << p.c << ")";
    return out.str();
}

std::string exponents_text(const ExponentVector& p) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i];
    out << ")";
    return out.str();
}

void identity_lines(std::ostringstream& out, const char* title,
                    const std::vector<IdentitySummary>& checks) {
    bool ok = !checks.empty();
    for (const auto& check : checks) ok = ok && check.pass;
    out << "  " << title << ": " << checks.size() << " checks, " << passfail(ok) << "\n";
    for (const auto& check : checks)
        if (!check.pass) out << "    FAIL " << check.name << " residual " << check.residual << "\n";
}

}  // namespace

std::string to_json(const VerificationReport& report) {
    return dump(report_body(report));
}

std::string to_json(const ChainReport& report) {
    json links = json::array();
    for (const auto& link : report.links)
        links.push_back(
            {{"from", link.from}, {"coordinate", link.coordinate}, {"pass", link.pass}});
    return dump({{"schema", kReportSchemaVersion},
                 {"tool_version", kToolVersion},
                 {"p", report.p},
                 {"links", links},
                 {"length", report.length},
                 {"base", report_body(report.base)},
                 {"verdict", report.pass ? "PASS" : "FAIL"},
                 {"pass", report.pass}});
}

std::string to_json(const AllTwosReport& report) {
    return dump({{"schema", kReportSchemaVersion},
                 {"tool_version", kToolVersion},
                 {"n", report.n},
                 {"count", report.count},
                 {"seed", report.seed},
                 {"min_ratio", report.min_ratio},
                 {"min_ratio_exact", report.min_ratio_exact},
                 {"equality_cases", report.equality_cases},
                 {"equality_only_at_diagonal", report.equality_only_at_diagonal},
                 {"violations", report.violations},
                 {"verdict", report.pass ? "PASS" : "FAIL"},
                 {"pass", report.pass}});
}

std::string to_text(const VerificationReport& report) {
    std::ostringstream out;
    out << "gpikit " << kToolVersion << " verify p=" << exponents_text(report.config.p)
        << " resolution=" << report.config.resolution << " seed=" << report.config.seed
        << " samples=" << report.config.sample_count << "\n";
    out << "  Phi(I3) = " << report.phi_identity_exact << "\n";
    out << "  grid scan: " << report.grid.points << " points, min " << report.grid.min_value_exact
        << " at " << point_text(report.grid.argmin) << ", margin " << report.grid.margin_exact
        << ", " << passfail(report.grid.pass) << "\n";
    out << "  critical points: " << report.critical.converged << "/"
        << report.critical.records.size() << " converged, " << report.critical.clusters.size()
        << " cluster(s), origin cluster: " << (report.critical.single_origin_cluster ? "yes" : "no")
        << ", " << passfail(report.critical.pass) << "\n";
    out << "  boundary scan: face min " << report.boundary.face_min << " at "
        << point_text(report.boundary.face_argmin) << ", edge min "
        << report.boundary.edge_min_exact << " at " << point_text(report.boundary.edge_argmin)
        << ", margin " << report.boundary.margin << ", " << passfail(report.boundary.pass) << "\n";
    out << "  lagrange combination: " << report.lagrange.count << " face points, worst residual "
        << report.lagrange.worst_residual << ", " << passfail(report.lagrange.pass) << "\n";
    out << "  adjugate identity: " << report.adjugate.count << " face points, worst residual "
        << report.adjugate.worst_residual << ", " << passfail(report.adjugate.pass) << "\n";
    out << "  hessian at origin: diag (" << report.hessian.diag_exact[0] << ", "
        << report.hessian.diag_exact[1] << ", " << report.hessian.diag_exact[2]
        << "), off-diagonal zero: " << (report.hessian.off_diagonal_zero ? "yes" : "no")
        << ", formula match: " << (report.hessian.formula_matches ? "yes" : "no") << ", "
        << passfail(report.hessian.pass) << "\n";
    identity_lines(out, "derivative identity", report.derivative_identity);
    identity_lines(out, "stein reduction", report.stein_reduction);
    identity_lines(out, "edge reduction", report.edge_reduction);
    out << "  monte carlo: " << report.mc.checks.size() << " points x " << report.mc.sample_count
        << " samples, " << passfail(report.mc.pass) << "\n";
    for (const auto& check : report.mc.checks)
        out << "    " << point_text(check.point) << " exact " << check.exact_value << " estimate "
            << check.estimate << " (" << check.error_in_se << " se)\n";
    out << "  verdict: " << (report.pass ? "PASS" : "FAIL") << " (" << report.elapsed_ms
        << " ms)\n";
    return out.str();
}

std::string to_text(const ChainReport& report) {
    std::ostringstream out;
    out << "gpikit " << kToolVersion << " chain p=" << exponents_text(report.p) << " length "
        << report.length << "\n";
    for (const auto& link : report.links)
        out << "  " << exponents_text(link.from) << " reduce p" << link.coordinate + 1 << ": "
            << passfail(link.pass) << "\n";
    out << "  base (2,2,2): " << passfail(report.base.pass) << "\n";
    out << "  verdict: " << (report.pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

std::string to_text(const AllTwosReport& report) {
    std::ostringstream out;
    out << "gpikit " << kToolVersion << " alltwos n=" << report.n << " count=" << report.count
        << " seed=" << report.seed << "\n";
    out << "  min ratio " << report.min_ratio_exact << " (" << report.min_ratio << ")\n";
    out << "  equality cases " << report.equality_cases << " (diagonal only: "
        << (report.equality_only_at_diagonal ? "yes" : "no") << "), violations "
        << report.violations << "\n";
    out << "  verdict: " << (report.pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace gpikit
