#include "gpikit/verifier.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "gpikit/errors.hpp"

namespace gpikit {

namespace {

void validate_even_exponents(const ExponentVector& p) {
    validate_exponents(p, 3);
    for (int e : p) {
        if (e < 2) throw InvalidArgument("exponents must be >= 2");
        if (e % 2 != 0) throw InvalidArgument("exponents must be even");
    }
}

Rational lattice_coord(int i, int m) {
    Rational q(2 * i - m, m);
    q.canonicalize();
    return q;
}

double phi_at(const Poly3& phi, const CorrelationPoint& x) {
    return phi.evaluate(x.a, x.b, x.c);
}

}  // namespace

ScanResult grid_scan(const ExponentVector& p, double resolution, int workers, bool keep_rows) {
    validate_even_exponents(p);
    const Poly3 phi = phi_polynomial(p);
    const Rational phi0(gaussian_moment_product(p));

    const GridLattice lattice = grid_lattice(resolution);
    const int m = lattice.m;
    std::vector<Rational> coords(m + 1);
    for (int i = 0; i <= m; ++i) coords[i] = lattice_coord(i, m);

    const long long n = static_cast<long long>(lattice.points.size());
    std::vector<Rational> values(n);
    const int nw = resolve_workers(workers);
#pragma omp parallel for num_threads(nw) schedule(dynamic, 64)
    for (long long t = 0; t < n; ++t) {
        const GridPoint& gp = lattice.points[t];
        values[t] = phi.evaluate(coords[gp.i], coords[gp.j], coords[gp.k]);
    }

    long long best = 0;
    bool strict = true;
    for (long long t = 0; t < n; ++t) {
        if (values[t] < values[best]) best = t;
        const GridPoint& gp = lattice.points[t];
        const int away =
            std::max({std::abs(2 * gp.i - m), std::abs(2 * gp.j - m), std::abs(2 * gp.k - m)});
        if (away >= 4 && values[t] <= phi0) strict = false;
    }

    ScanResult scan;
    scan.p = p;
    scan.resolution = 2.0 / m;
    scan.points = n;
    scan.phi_at_identity = to_double(phi0);
    scan.phi_at_identity_exact = to_string(phi0);
    scan.min_value = to_double(values[best]);
    scan.min_value_exact = to_string(values[best]);
    scan.argmin = lattice.points[best].point;
    const Rational margin = values[best] - phi0;
    scan.margin = to_double(margin);
    scan.margin_exact = to_string(margin);
    scan.origin_on_grid = m % 2 == 0;
    scan.origin_is_argmin = scan.origin_on_grid && lattice.points[best].i * 2 == m &&
                            lattice.points[best].j * 2 == m && lattice.points[best].k * 2 == m;
    scan.strict_away_from_origin = strict;
    scan.pass = margin >= 0 && strict && (!scan.origin_on_grid || scan.origin_is_argmin);

    if (keep_rows) {
        scan.rows.reserve(n);
        for (long long t = 0; t < n; ++t)
            scan.rows.push_back({lattice.points[t].point, to_double(values[t]),
                                 to_double(Rational(values[t] - phi0))});
    }
    return scan;
}

void write_scan_csv(std::ostream& out, const ScanResult& scan) {
    out << "a,b,c,phi,margin\n";
    char line[256];
    for (const GridRow& row : scan.rows) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", row.point.a,
                      row.point.b, row.point.c, row.phi, row.margin);
        out << line;
    }
}

BoundaryScanResult boundary_scan(const ExponentVector& p, double resolution, int workers) {
    validate_even_exponents(p);
    const Poly3 phi = phi_polynomial(p);
    const Rational phi0(gaussian_moment_product(p));

    const int m = lattice_size(resolution);
    const auto coord = [m](int i) { return static_cast<double>(2 * i - m) / m; };

    // Face sheets: one cell per (a, b) lattice pair, both roots evaluated.
    const long long cells = static_cast<long long>(m + 1) * (m + 1);
    std::vector<double> cell_min(cells);
    std::vector<double> cell_c(cells);
    std::vector<int> cell_roots(cells);
    const int nw = resolve_workers(workers);
#pragma omp parallel for num_threads(nw) schedule(dynamic, 64)
    for (long long cell = 0; cell < cells; ++cell) {
        const double a = coord(static_cast<int>(cell / (m + 1)));
        const double b = coord(static_cast<int>(cell % (m + 1)));
        double best_value = 0.0, best_c = 0.0;
        int roots = 0;
        for (double c : boundary_sheets(a, b)) {
            const double value = phi.evaluate(a, b, c);
            if (roots == 0 || value < best_value) {
                best_value = value;
                best_c = c;
            }
            ++roots;
        }
        cell_min[cell] = best_value;
        cell_c[cell] = best_c;
        cell_roots[cell] = roots;
    }

    BoundaryScanResult result;
    result.p = p;
    result.phi_at_identity = to_double(phi0);
    long long best_cell = 0;
    for (long long cell = 0; cell < cells; ++cell) {
        result.face_count += cell_roots[cell];
        if (cell_min[cell] < cell_min[best_cell]) best_cell = cell;
    }
    result.face_min = cell_min[best_cell];
    result.face_argmin = {coord(static_cast<int>(best_cell / (m + 1))),
                          coord(static_cast<int>(best_cell % (m + 1))), cell_c[best_cell]};

    // The six edge curves: |c|=1, |a|=1, |b|=1 each force the remaining two
    // coordinates equal up to sign; rational parameters, exact evaluation.
    struct Curve {
        int sa, sb, sc;  // (point) = t*(sa, sb, sc) with the fixed coordinate overridden
        int fixed;       // which coordinate is +/-1
        int fixed_sign;
    };
    const std::array<Curve, 6> curves{{{1, 1, 0, 2, 1},
                                       {1, -1, 0, 2, -1},
                                       {0, 1, 1, 0, 1},
                                       {0, 1, -1, 0, -1},
                                       {1, 0, 1, 1, 1},
                                       {1, 0, -1, 1, -1}}};

    bool edge_first = true;
    Rational edge_min;
    CorrelationPoint edge_argmin;
    for (const Curve& curve : curves) {
        for (int i = 0; i <= m; ++i) {
            const Rational t = lattice_coord(i, m);
            std::array<Rational, 3> x{t * curve.sa, t * curve.sb, t * curve.sc};
            x[curve.fixed] = Rational(curve.fixed_sign);
            const Rational value = phi.evaluate(x[0], x[1], x[2]);
            ++result.edge_count;
            if (edge_first || value < edge_min) {
                edge_first = false;
                edge_min = value;
                edge_argmin = {to_double(x[0]), to_double(x[1]), to_double(x[2])};
            }
        }
    }
    result.edge_min = to_double(edge_min);
    result.edge_min_exact = to_string(edge_min);
    result.edge_argmin = edge_argmin;

    result.min_value = std::min(result.face_min, result.edge_min);
    result.margin = result.min_value - result.phi_at_identity;
    result.pass = result.margin > 0.0;
    return result;
}

namespace {

struct PhiSystem {
    Poly3 phi;
    std::array<Poly3, 3> grad;
    std::array<std::array<Poly3, 3>, 3> hess;

    explicit PhiSystem(const ExponentVector& p) : phi(phi_polynomial(p)) {
        for (int v = 0; v < 3; ++v) grad[v] = differentiate(phi, v);
        for (int v = 0; v < 3; ++v)
            for (int w = v; w < 3; ++w) hess[v][w] = hess[w][v] = differentiate(grad[v], w);
    }

    Eigen::Vector3d grad_at(const CorrelationPoint& x) const {
        return {grad[0].evaluate(x.a, x.b, x.c), grad[1].evaluate(x.a, x.b, x.c),
                grad[2].evaluate(x.a, x.b, x.c)};
    }

    Eigen::Matrix3d hess_at(const CorrelationPoint& x) const {
        Eigen::Matrix3d h;
        for (int v = 0; v < 3; ++v)
            for (int w = 0; w < 3; ++w) h(v, w) = hess[v][w].evaluate(x.a, x.b, x.c);
        return h;
    }
};

bool inside_open(const CorrelationPoint& x) {
    return std::max({std::fabs(x.a), std::fabs(x.b), std::fabs(x.c)}) < 1.0 && det3(x) > 0.0;
}

CriticalPointRecord descend(const PhiSystem& sys, const CorrelationPoint& start) {
    CriticalPointRecord rec;
    rec.start = start;
    CorrelationPoint x = start;
    for (; rec.iterations < kNewtonMaxIter; ++rec.iterations) {
        const Eigen::Vector3d g = sys.grad_at(x);
        rec.grad_norm = g.norm();
        if (rec.grad_norm <= kGradTol) {
            rec.converged = true;
            break;
        }

        Eigen::Vector3d delta;
        const Eigen::LLT<Eigen::Matrix3d> llt(sys.hess_at(x));
        if (llt.info() == Eigen::Success)
            delta = -llt.solve(g);
        else
            delta = -g;  // Hessian not PD: plain descent direction
        double slope = g.dot(delta);
        if (slope >= 0.0) {
            delta = -g;
            slope = -g.squaredNorm();
        }

        const double fx = phi_at(sys.phi, x);
        double step = 1.0;
        bool accepted = false;
        for (int h = 0; h < kMaxHalvings; ++h, step /= 2.0) {
            const CorrelationPoint xn{x.a + step * delta[0], x.b + step * delta[1],
                                      x.c + step * delta[2]};
            if (!inside_open(xn)) continue;
            if (phi_at(sys.phi, xn) <= fx + 1e-4 * step * slope) {
                x = xn;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // line search hit the numerical floor
    }
    rec.point = x;
    rec.phi_value = phi_at(sys.phi, x);
    rec.at_origin = std::sqrt(x.a * x.a + x.b * x.b + x.c * x.c) <= kClusterTol;
    return rec;
}

}  // namespace

std::vector<CriticalPointRecord> interior_critical_points(const ExponentVector& p,
                                                          const std::vector<CorrelationPoint>& starts,
                                                          int workers) {
    validate_even_exponents(p);
    for (const CorrelationPoint& s : starts)
        if (classify(s) != RegionLabel::Interior)
            throw InvalidArgument("critical-point starts must lie in the open elliptope");

    const PhiSystem sys(p);
    std::vector<CriticalPointRecord> records(starts.size());
    const long long n = static_cast<long long>(starts.size());
    const int nw = resolve_workers(workers);
#pragma omp parallel for num_threads(nw) schedule(dynamic)
    for (long long i = 0; i < n; ++i) records[i] = descend(sys, starts[i]);
    return records;
}

CriticalScanResult cluster_critical_points(std::vector<CriticalPointRecord> records) {
    CriticalScanResult result;
    for (const CriticalPointRecord& rec : records) {
        if (!rec.converged) continue;
        ++result.converged;
        bool merged = false;
        for (const CorrelationPoint& rep : result.clusters) {
            const double da = rec.point.a - rep.a, db = rec.point.b - rep.b, dc = rec.point.c - rep.c;
            if (std::sqrt(da * da + db * db + dc * dc) <= kClusterTol) {
                merged = true;
                break;
            }
        }
        if (!merged) result.clusters.push_back(rec.point);
    }
    const auto norm = [](const CorrelationPoint& x) {
        return std::sqrt(x.a * x.a + x.b * x.b + x.c * x.c);
    };
    result.single_origin_cluster =
        result.clusters.size() == 1 && norm(result.clusters.front()) <= kClusterTol;
    result.pass = result.converged > 0 && result.single_origin_cluster;
    result.records = std::move(records);
    return result;
}

LagrangeReport lagrange_combination_check(const ExponentVector& p,
                                          const std::vector<CorrelationPoint>& points) {
    validate_even_exponents(p);
    const Poly3 phi = phi_polynomial(p);
    const Poly3 da = differentiate(phi, 0), db = differentiate(phi, 1), dc = differentiate(phi, 2);

    LagrangeReport report;
    report.p = p;
    report.count = static_cast<int>(points.size());
    for (const CorrelationPoint& x : points) {
        double residual;
        try {
            const KernelVector kv = kernel_vector(x);
            // E[U(a1 X1 + a2 X2 + a3 X3)] = 0 scaled by p1 p2 p3: alpha_i pairs
            // with the derivative in the variable not involving X_i.
            const double t1 = p[0] * kv.alpha[0] * dc.evaluate(x.a, x.b, x.c);
            const double t2 = p[1] * kv.alpha[1] * db.evaluate(x.a, x.b, x.c);
            const double t3 = p[2] * kv.alpha[2] * da.evaluate(x.a, x.b, x.c);
            const double denom =
                std::max({std::fabs(t1), std::fabs(t2), std::fabs(t3), 1.0});
            residual = std::fabs(t1 + t2 + t3) / denom;
        } catch (const std::domain_error&) {
            residual = std::numeric_limits<double>::infinity();
        }
        if (residual > report.worst_residual) {
            report.worst_residual = residual;
            report.worst_point = x;
        }
    }
    report.pass = report.count > 0 && report.worst_residual <= kLagrangeTol;
    return report;
}

LagrangeReport lagrange_combination_check(const ExponentVector& p, int count, std::uint64_t seed) {
    return lagrange_combination_check(p, face_points(count, seed));
}

AdjugateSweepReport adjugate_sweep(const std::vector<CorrelationPoint>& points) {
    AdjugateSweepReport report;
    report.count = static_cast<int>(points.size());
    bool all_pass = report.count > 0;
    for (const CorrelationPoint& x : points) {
        double residual, lambda = 0.0;
        try {
            const AdjugateReport one = check_adjugate_identity(x);
            residual = one.residual;
            lambda = one.lambda;
            all_pass = all_pass && one.pass;
        } catch (const std::domain_error&) {
            residual = std::numeric_limits<double>::infinity();
            all_pass = false;
        }
        if (residual > report.worst_residual) {
            report.worst_residual = residual;
            report.worst_point = x;
            report.lambda_at_worst = lambda;
        }
    }
    report.pass = all_pass && report.worst_residual <= kAdjugateTol;
    return report;
}

HessianReport hessian_at_origin(const ExponentVector& p) {
    validate_even_exponents(p);
    const Poly3 phi = phi_polynomial(p);

    HessianReport report;
    report.p = p;
    std::array<Rational, 3> diag_exact;
    std::array<Poly3, 3> grad{differentiate(phi, 0), differentiate(phi, 1), differentiate(phi, 2)};
    for (int v = 0; v < 3; ++v) {
        diag_exact[v] = differentiate(grad[v], v).constant_term();
        report.diag[v] = to_double(diag_exact[v]);
        report.diag_exact[v] = to_string(diag_exact[v]);
    }
    report.off_diagonal_zero = differentiate(grad[0], 1).constant_term() == 0 &&
                               differentiate(grad[0], 2).constant_term() == 0 &&
                               differentiate(grad[1], 2).constant_term() == 0;

    // Variable v couples coordinates (i, j); the spectator k only contributes
    // its even moment: p_i p_j (p_i-1)(p_j-1) (p_i-3)!! (p_j-3)!! (p_k-1)!!.
    const std::array<std::array<int, 3>, 3> roles{{{0, 1, 2}, {0, 2, 1}, {1, 2, 0}}};
    report.formula_matches = true;
    for (int v = 0; v < 3; ++v) {
        const auto [i, j, k] = roles[v];
        mpz_class formula = mpz_class(p[i]) * p[j] * (p[i] - 1) * (p[j] - 1);
        formula *= double_factorial(p[i] - 3) * double_factorial(p[j] - 3) *
                   double_factorial(p[k] - 1);
        report.diag_formula[v] = formula.get_str();
        report.formula_matches = report.formula_matches && Rational(formula) == diag_exact[v];
    }
    report.positive_definite =
        diag_exact[0] > 0 && diag_exact[1] > 0 && diag_exact[2] > 0 && report.off_diagonal_zero;
    report.pass = report.off_diagonal_zero && report.formula_matches && report.positive_definite;
    return report;
}

McSpotReport mc_spot_check(const ExponentVector& p, int points, int sample_count,
                           std::uint64_t seed, int workers) {
    validate_exponents(p, 3);
    if (points < 1) throw InvalidArgument("mc spot check needs at least one point");
    if (sample_count < 2) throw InvalidArgument("mc spot check needs at least two samples");

    const Poly3 phi = phi_polynomial(p);
    McSpotReport report;
    report.points = points;
    report.sample_count = sample_count;
    report.seed = seed;
    report.pass = true;
    const auto interior = gpikit::interior_points(points, mix_seed(seed, 7));
    for (int i = 0; i < points; ++i) {
        const CorrelationPoint& x = interior[i];
        const auto cov = unit_diagonal3<double>(x.a, x.b, x.c);
        const SampleMatrix samples = sample_gaussian(cov, sample_count, mix_seed(seed, 100 + i), workers);
        const McEstimate estimate = mc_moment(samples, p, workers);

        McSpotCheck check;
        check.point = x;
        check.exact_value = phi.evaluate(x.a, x.b, x.c);
        check.estimate = estimate.estimate;
        check.std_error = estimate.std_error;
        check.error_in_se = estimate.std_error > 0.0
                                ? std::fabs(estimate.estimate - check.exact_value) / estimate.std_error
                                : (estimate.estimate == check.exact_value ? 0.0 : 1e308);
        check.pass = check.error_in_se <= 5.0;
        report.pass = report.pass && check.pass;
        report.checks.push_back(check);
    }
    return report;
}

std::vector<IdentitySummary> summarize(const IdentityReport& report) {
    std::vector<IdentitySummary> out;
    out.reserve(report.checks.size());
    for (const IdentityCheck& check : report.checks)
        out.push_back({check.name, check.pass, check.pass ? "0" : check.residual.to_text()});
    return out;
}

namespace {

bool all_pass(const std::vector<IdentitySummary>& checks) {
    for (const IdentitySummary& check : checks)
        if (!check.pass) return false;
    return !checks.empty();
}

}  // namespace

VerificationReport verify_gpi3(const RunConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    validate_even_exponents(config.p);

    VerificationReport report;
    report.config = config;
    const Rational phi0(gaussian_moment_product(config.p));
    report.phi_identity_exact = to_string(phi0);
    report.phi_identity = to_double(phi0);

    report.grid = grid_scan(config.p, config.resolution, config.workers);
    report.critical = cluster_critical_points(interior_critical_points(
        config.p, interior_points(kDefaultStarts, mix_seed(config.seed, 1)), config.workers));
    report.boundary = boundary_scan(config.p, config.resolution, config.workers);

    const std::uint64_t face_seed = mix_seed(config.seed, 2);
    report.lagrange = lagrange_combination_check(config.p, kDefaultFacePoints, face_seed);
    report.adjugate = adjugate_sweep(face_points(kDefaultFacePoints, face_seed));

    report.hessian = hessian_at_origin(config.p);
    report.derivative_identity = summarize(check_derivative_identity(config.p));
    report.stein_reduction = summarize(check_stein_reduction(config.p));
    report.edge_reduction = summarize(check_edge_reduction(config.p));
    report.mc = mc_spot_check(config.p, kDefaultMcPoints, config.sample_count,
                              mix_seed(config.seed, 3), config.workers);

    report.pass = report.grid.pass && report.critical.pass && report.boundary.pass &&
                  report.lagrange.pass && report.adjugate.pass && report.hessian.pass &&
                  all_pass(report.derivative_identity) && all_pass(report.stein_reduction) &&
                  all_pass(report.edge_reduction) && report.mc.pass;

    report.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    return report;
}

ChainReport induction_chain(const ExponentVector& p, const RunConfig& base_config) {
    validate_even_exponents(p);

    ChainReport report;
    report.p = p;
    report.pass = true;
    ExponentVector current = p;
    const ExponentVector base{2, 2, 2};
    while (current != base) {
        const int coordinate =
            static_cast<int>(std::max_element(current.begin(), current.end()) - current.begin());
        IdentityCheck link = stein_reduction_check(current, coordinate);
        link.pass = link.residual.is_zero();
        report.links.push_back({current, coordinate, link.pass});
        report.pass = report.pass && link.pass;
        current[coordinate] -= 2;
    }
    report.length = static_cast<int>(report.links.size());

    RunConfig config = base_config;
    config.p = base;
    report.base = verify_gpi3(config);
    report.pass = report.pass && report.base.pass;
    return report;
}

ChainReport induction_chain(const ExponentVector& p) {
    return induction_chain(p, RunConfig{});
}

AllTwosReport check_all_twos(int n, int count, std::uint64_t seed) {
    if (n < 2 || n > 6) throw InvalidArgument("all-twos dimension must lie in [2, 6]");
    if (count < 1) throw InvalidArgument("all-twos needs at least one matrix");

    AllTwosReport report;
    report.n = n;
    report.count = count;
    report.seed = seed;
    report.equality_only_at_diagonal = true;

    std::mt19937_64 engine(seed);
    std::uniform_int_distribution<int> entry(-8, 8);
    const ExponentVector twos(static_cast<std::size_t>(n), 2);

    Rational min_ratio;
    bool first = true;
    for (int trial = 0; trial < count; ++trial) {
        // Factor model: A = Q^T Q with eighth-integer entries; redraw until
        // every column is nonzero so the diagonal is positive.
        std::vector<int> q(static_cast<std::size_t>(n) * n);
        bool ok = false;
        while (!ok) {
            for (int& v : q) v = entry(engine);
            ok = true;
            for (int col = 0; col < n && ok; ++col) {
                bool nonzero = false;
                for (int row = 0; row < n; ++row) nonzero = nonzero || q[row * n + col] != 0;
                ok = nonzero;
            }
        }

        CovarianceMatrix<Rational> a(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                long dot = 0;
                for (int row = 0; row < n; ++row)
                    dot += static_cast<long>(q[row * n + i]) * q[row * n + j];
                Rational value(dot, 64);
                value.canonicalize();
                a.set(i, j, value);
            }

        const Rational m = moment(a, twos);
        Rational denom(1);
        for (int i = 0; i < n; ++i) denom *= a(i, i);
        const Rational ratio = m / denom;

        if (first || ratio < min_ratio) {
            first = false;
            min_ratio = ratio;
        }
        if (ratio < 1) ++report.violations;
        if (ratio == 1) {
            ++report.equality_cases;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (a(i, j) != 0) report.equality_only_at_diagonal = false;
        }
    }

    report.min_ratio_exact = to_string(min_ratio);
    report.min_ratio = to_double(min_ratio);
    report.pass = report.violations == 0 && report.equality_only_at_diagonal;
    return report;
}

}  // namespace gpikit
