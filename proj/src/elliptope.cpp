#include "gpikit/elliptope.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "gpikit/errors.hpp"

namespace gpikit {

std::string to_string(RegionLabel label) {
    switch (label) {
        case RegionLabel::Interior: return "Interior";
        case RegionLabel::Face: return "Face";
        case RegionLabel::Edge: return "Edge";
        case RegionLabel::Outside: return "Outside";
    }
    return "Outside";
}

double det3(double a, double b, double c) {
    return 1.0 + 2.0 * a * b * c - a * a - b * b - c * c;
}

double det3(const CorrelationPoint& p) {
    return det3(p.a, p.b, p.c);
}

Rational det3(const Rational& a, const Rational& b, const Rational& c) {
    return Rational(1) + 2 * a * b * c - a * a - b * b - c * c;
}

std::array<double, 3> grad_det(const CorrelationPoint& p) {
    return {2.0 * (p.b * p.c - p.a), 2.0 * (p.a * p.c - p.b), 2.0 * (p.a * p.b - p.c)};
}

RegionLabel classify(const CorrelationPoint& p) {
    const double biggest = std::max({std::fabs(p.a), std::fabs(p.b), std::fabs(p.c)});
    const double det = det3(p);
    if (biggest > 1.0 + kEdgeTol || det < -kDetTol) return RegionLabel::Outside;
    if (biggest >= 1.0 - kEdgeTol) return RegionLabel::Edge;
    if (det > kDetTol) return RegionLabel::Interior;
    return RegionLabel::Face;
}

std::vector<double> boundary_sheets(double a, double b) {
    if (std::fabs(a) > 1.0 || std::fabs(b) > 1.0)
        throw InvalidArgument("boundary_sheets needs |a| <= 1 and |b| <= 1");
    const double radicand = std::max(0.0, (1.0 - a * a) * (1.0 - b * b));
    const double offset = std::sqrt(radicand);
    const double hi = std::min(1.0, a * b + offset);
    const double lo = std::max(-1.0, a * b - offset);
    if (offset == 0.0) return {hi};
    return {hi, lo};
}

namespace {

Eigen::Matrix3d to_matrix(const CorrelationPoint& p) {
    Eigen::Matrix3d m;
    m << 1.0, p.a, p.b, p.a, 1.0, p.c, p.b, p.c, 1.0;
    return m;
}

Eigen::MatrixXd to_matrix(const CovarianceMatrix<double>& cov) {
    Eigen::MatrixXd m(cov.size(), cov.size());
    for (int i = 0; i < cov.size(); ++i)
        for (int j = 0; j < cov.size(); ++j) m(i, j) = cov(i, j);
    return m;
}

}  // namespace

KernelVector kernel_vector(const CorrelationPoint& p) {
    if (std::fabs(det3(p)) > kSingularTol)
        throw NotSingular("kernel_vector needs a singular correlation matrix");

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(to_matrix(p));
    const auto& values = solver.eigenvalues();  // ascending
    if (values[1] <= kSingularTol) throw RankDeficient("correlation matrix has rank <= 1");

    Eigen::Vector3d v = solver.eigenvectors().col(0);
    for (int i = 0; i < 3; ++i) {
        if (std::fabs(v[i]) <= 1e-12) continue;
        if (v[i] < 0.0) v = -v;
        break;
    }
    return {{v[0], v[1], v[2]}, std::fabs(values[0])};
}

AdjugateReport check_adjugate_identity(const CorrelationPoint& p) {
    const KernelVector kv = kernel_vector(p);
    const auto& al = kv.alpha;
    const std::array<double, 3> w{al[0] * al[1], al[0] * al[2], al[1] * al[2]};
    const std::array<double, 3> g = grad_det(p);

    double gw = 0.0, ww = 0.0, gmax = 0.0;
    for (int i = 0; i < 3; ++i) {
        gw += g[i] * w[i];
        ww += w[i] * w[i];
        gmax = std::max(gmax, std::fabs(g[i]));
    }
    const double lambda2 = ww > 0.0 ? std::max(0.0, gw / ww) : 0.0;

    double mismatch = 0.0;
    for (int i = 0; i < 3; ++i) mismatch = std::max(mismatch, std::fabs(g[i] - lambda2 * w[i]));

    AdjugateReport report;
    report.point = p;
    report.lambda = std::sqrt(lambda2);
    report.residual = mismatch / std::max(gmax, 1e-300);
    report.pass = lambda2 > 0.0 && report.residual <= kAdjugateTol;
    return report;
}

int lattice_size(double resolution) {
    if (!(resolution > 0.0) || resolution > 1.0)
        throw InvalidArgument("grid resolution must lie in (0, 1]");
    const int m = static_cast<int>(std::lround(2.0 / resolution));
    if (m < 1) throw InvalidArgument("grid resolution too coarse");
    return m;
}

GridLattice grid_lattice(double resolution) {
    const int m = lattice_size(resolution);

    const auto coord = [m](int i) { return static_cast<double>(2 * i - m) / m; };
    const auto exact = [m](int i) {
        Rational q(2 * i - m, m);
        q.canonicalize();
        return q;
    };

    GridLattice lattice;
    lattice.m = m;
    for (int i = 0; i <= m; ++i) {
        const Rational qa = exact(i);
        for (int j = 0; j <= m; ++j) {
            const Rational qb = exact(j);
            for (int k = 0; k <= m; ++k) {
                if (det3(qa, qb, exact(k)) < 0) continue;
                lattice.points.push_back({i, j, k, {coord(i), coord(j), coord(k)}});
            }
        }
    }
    return lattice;
}

std::vector<CorrelationPoint> grid(double resolution) {
    GridLattice lattice = grid_lattice(resolution);
    std::vector<CorrelationPoint> points;
    points.reserve(lattice.points.size());
    for (const auto& gp : lattice.points) points.push_back(gp.point);
    return points;
}

SampleStats sample_elliptope_counted(int count, std::uint64_t seed) {
    if (count < 0) throw InvalidArgument("sample count must be nonnegative");
    SampleStats stats;
    stats.points.reserve(count);
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    while (static_cast<int>(stats.points.size()) < count) {
        CorrelationPoint p{unit(engine), unit(engine), unit(engine)};
        ++stats.proposals;
        if (det3(p) >= 0.0) stats.points.push_back(p);
    }
    return stats;
}

std::vector<CorrelationPoint> sample_elliptope(int count, std::uint64_t seed) {
    return sample_elliptope_counted(count, seed).points;
}

std::vector<CorrelationPoint> interior_points(int count, std::uint64_t seed) {
    if (count < 0) throw InvalidArgument("point count must be nonnegative");
    std::vector<CorrelationPoint> points;
    points.reserve(count);
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    while (static_cast<int>(points.size()) < count) {
        CorrelationPoint p{unit(engine), unit(engine), unit(engine)};
        if (classify(p) == RegionLabel::Interior) points.push_back(p);
    }
    return points;
}

std::vector<CorrelationPoint> face_points(int count, std::uint64_t seed) {
    if (count < 0) throw InvalidArgument("point count must be nonnegative");
    std::vector<CorrelationPoint> points;
    points.reserve(count);
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    while (static_cast<int>(points.size()) < count) {
        const double a = unit(engine);
        const double b = unit(engine);
        const auto sheets = boundary_sheets(a, b);
        const double c = sheets[engine() % sheets.size()];
        CorrelationPoint p{a, b, c};
        if (classify(p) == RegionLabel::Face) points.push_back(p);
    }
    return points;
}

void write_points_csv(std::ostream& out, const std::vector<CorrelationPoint>& points) {
    out << "a,b,c,det,region\n";
    char line[256];
    for (const auto& p : points) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,", p.a, p.b, p.c, det3(p));
        out << line << to_string(classify(p)) << '\n';
    }
}

double min_eigenvalue(const CovarianceMatrix<double>& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_matrix(cov));
    return solver.eigenvalues()[0];
}

CovarianceMatrix<double> sqrt_psd(const CovarianceMatrix<double>& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_matrix(cov));
    Eigen::VectorXd values = solver.eigenvalues();
    for (int i = 0; i < values.size(); ++i) {
        if (values[i] < -kPsdTol) throw NotPSD("matrix has an eigenvalue below -1e-12");
        // |value| <= tolerance is indistinguishable from a zero eigenvalue;
        // clamping keeps degenerate covariances exactly degenerate.
        values[i] = values[i] <= kPsdTol ? 0.0 : std::sqrt(values[i]);
    }
    const Eigen::MatrixXd& vectors = solver.eigenvectors();
    Eigen::MatrixXd root = vectors * values.asDiagonal() * vectors.transpose();
    root = ((root + root.transpose()) / 2.0).eval();

    CovarianceMatrix<double> out(cov.size());
    for (int i = 0; i < cov.size(); ++i)
        for (int j = i; j < cov.size(); ++j) out.set(i, j, root(i, j));
    return out;
}

}  // namespace gpikit
