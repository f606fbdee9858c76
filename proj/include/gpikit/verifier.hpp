#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gpikit/elliptope.hpp"
#include "gpikit/kernels.hpp"
#include "gpikit/moments.hpp"
#include "gpikit/polynomial.hpp"

namespace gpikit {

inline constexpr double kGradTol = 1e-9;     // critical-point convergence
inline constexpr double kClusterTol = 1e-6;  // critical-point dedup radius
inline constexpr double kLagrangeTol = 1e-8;
inline constexpr int kNewtonMaxIter = 10000;
inline constexpr int kMaxHalvings = 60;
inline constexpr int kDefaultStarts = 50;
inline constexpr int kDefaultFacePoints = 100;
inline constexpr int kDefaultMcPoints = 3;

struct RunConfig {
    ExponentVector p{2, 2, 2};
    double resolution = 0.05;
    int sample_count = 1000000;
    std::uint64_t seed = 0;
    int workers = 0;  // 0 = auto; execution detail, never serialized
};

struct GridRow {
    CorrelationPoint point;
    double phi = 0.0;
    double margin = 0.0;
};

/// Exhaustive elliptope lattice scan; evaluation and comparisons are exact
/// rational, doubles are views for reporting.
struct ScanResult {
    ExponentVector p;
    double resolution = 0.0;  // effective lattice spacing 2/m
    long long points = 0;
    double phi_at_identity = 0.0;
    std::string phi_at_identity_exact;
    double min_value = 0.0;
    std::string min_value_exact;
    CorrelationPoint argmin;
    double margin = 0.0;
    std::string margin_exact;
    bool origin_on_grid = false;
    bool origin_is_argmin = false;
    bool strict_away_from_origin = false;  // strict above Phi(I3) once ||.||inf >= 2 spacings
    bool pass = false;
    std::vector<GridRow> rows;  // populated only when keep_rows
};

ScanResult grid_scan(const ExponentVector& p, double resolution, int workers = 0,
                     bool keep_rows = false);

/// CSV rows `a,b,c,phi,margin` in lattice order; needs keep_rows data.
void write_scan_csv(std::ostream& out, const ScanResult& scan);

struct BoundaryScanResult {
    ExponentVector p;
    double phi_at_identity = 0.0;
    long long face_count = 0;
    double face_min = 0.0;
    CorrelationPoint face_argmin;
    long long edge_count = 0;
    double edge_min = 0.0;
    std::string edge_min_exact;
    CorrelationPoint edge_argmin;
    double min_value = 0.0;
    double margin = 0.0;  // min over Face and edges minus Phi(I3); must be > 0
    bool pass = false;
};

/// Minimizes Phi over both Face sheets (float) and the six edge curves
/// (exact rational parameter values).
BoundaryScanResult boundary_scan(const ExponentVector& p, double resolution, int workers = 0);

struct CriticalPointRecord {
    CorrelationPoint start;
    CorrelationPoint point;
    double grad_norm = 0.0;
    double phi_value = 0.0;
    int iterations = 0;
    bool converged = false;
    bool at_origin = false;  // within kClusterTol of (0,0,0)
};

/// Damped Newton on grad Phi = 0 (gradient-descent fallback when the Hessian
/// is not positive definite), line-searched on Phi and projected into the
/// open elliptope. Starts must classify Interior.
std::vector<CriticalPointRecord> interior_critical_points(const ExponentVector& p,
                                                          const std::vector<CorrelationPoint>& starts,
                                                          int workers = 0);

struct CriticalScanResult {
    std::vector<CriticalPointRecord> records;
    std::vector<CorrelationPoint> clusters;  // first converged representative each
    int converged = 0;
    bool single_origin_cluster = false;
    bool pass = false;
};

CriticalScanResult cluster_critical_points(std::vector<CriticalPointRecord> records);

struct LagrangeReport {
    ExponentVector p;
    int count = 0;
    double worst_residual = 0.0;
    CorrelationPoint worst_point;
    bool pass = false;
};

/// p1 a1 dPhi/dc + p2 a2 dPhi/db + p3 a3 dPhi/da == 0 at singular points,
/// with alpha the kernel vector; residual relative to the largest term
/// (floored at 1 so near-zero-gradient points are not amplified).
LagrangeReport lagrange_combination_check(const ExponentVector& p,
                                          const std::vector<CorrelationPoint>& points);
LagrangeReport lagrange_combination_check(const ExponentVector& p, int count, std::uint64_t seed);

struct AdjugateSweepReport {
    int count = 0;
    double worst_residual = 0.0;
    CorrelationPoint worst_point;
    double lambda_at_worst = 0.0;
    bool pass = false;
};

AdjugateSweepReport adjugate_sweep(const std::vector<CorrelationPoint>& points);

struct HessianReport {
    ExponentVector p;
    std::array<double, 3> diag{};
    std::array<std::string, 3> diag_exact;    // exact second derivatives at 0
    std::array<std::string, 3> diag_formula;  // p_i p_j (p_i-1)(p_j-1)(p_i-3)!!(p_j-3)!!(p_k-1)!!
    bool off_diagonal_zero = false;           // exact zeros at the origin
    bool formula_matches = false;
    bool positive_definite = false;
    bool pass = false;
};

HessianReport hessian_at_origin(const ExponentVector& p);

struct McSpotCheck {
    CorrelationPoint point;
    double exact_value = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;
    double error_in_se = 0.0;  // |estimate - exact| / std_error
    bool pass = false;         // within 5 standard errors
};

struct McSpotReport {
    int points = 0;
    int sample_count = 0;
    std::uint64_t seed = 0;
    std::vector<McSpotCheck> checks;
    bool pass = false;
};

McSpotReport mc_spot_check(const ExponentVector& p, int points, int sample_count,
                           std::uint64_t seed, int workers = 0);

struct IdentitySummary {
    std::string name;
    bool pass = false;
    std::string residual;  // "0" when exact, offending polynomial otherwise
};

std::vector<IdentitySummary> summarize(const IdentityReport& report);

struct VerificationReport {
    RunConfig config;
    std::string phi_identity_exact;  // Phi(I3) = prod (p_i - 1)!!
    double phi_identity = 0.0;
    ScanResult grid;
    CriticalScanResult critical;
    BoundaryScanResult boundary;
    LagrangeReport lagrange;
    AdjugateSweepReport adjugate;
    HessianReport hessian;
    std::vector<IdentitySummary> derivative_identity;
    std::vector<IdentitySummary> stein_reduction;
    std::vector<IdentitySummary> edge_reduction;
    McSpotReport mc;
    bool pass = false;
    double elapsed_ms = 0.0;  // text summary only, never serialized
};

/// The full Theorem 1 verification: exact scans, critical-point descent,
/// boundary cases, identity suite, Monte Carlo cross-check.
VerificationReport verify_gpi3(const RunConfig& config);

struct ChainLink {
    ExponentVector from;
    int coordinate = 0;  // exponent decremented by 2 (largest, first on ties)
    bool pass = false;   // exact Stein reduction at this link
};

struct ChainReport {
    ExponentVector p;
    std::vector<ChainLink> links;
    int length = 0;  // (p1+p2+p3-6)/2
    VerificationReport base;
    bool pass = false;
};

ChainReport induction_chain(const ExponentVector& p, const RunConfig& base_config);
ChainReport induction_chain(const ExponentVector& p);

struct AllTwosReport {
    int n = 0;
    int count = 0;
    std::uint64_t seed = 0;
    std::string min_ratio_exact;  // min over matrices of moment / prod diag
    double min_ratio = 0.0;
    int equality_cases = 0;
    int violations = 0;
    bool equality_only_at_diagonal = false;
    bool pass = false;
};

/// Frenkel's all-twos case on random factor-model correlation matrices,
/// checked in exact rational arithmetic.
AllTwosReport check_all_twos(int n, int count, std::uint64_t seed);

/// JSON (sorted keys, 2-space indent, trailing newline; no timing fields so
/// reports are byte-identical across runs and worker counts).
std::string to_json(const VerificationReport& report);
std::string to_json(const ChainReport& report);
std::string to_json(const AllTwosReport& report);

/// Human-readable summaries; these include timings.
std::string to_text(const VerificationReport& report);
std::string to_text(const ChainReport& report);
std::string to_text(const AllTwosReport& report);

}  // namespace gpikit
