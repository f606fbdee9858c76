#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gpikit/covariance.hpp"
#include "gpikit/rational.hpp"

namespace gpikit {

/// Off-diagonal correlations (s12, s13, s23) of a unit-diagonal 3x3 matrix.
struct CorrelationPoint {
    double a = 0.0, b = 0.0, c = 0.0;
};

enum class RegionLabel { Interior, Face, Edge, Outside };

std::string to_string(RegionLabel label);

inline constexpr double kDetTol = 1e-12;       // membership: det3 >= -kDetTol
inline constexpr double kEdgeTol = 1e-12;      // |coordinate| >= 1 - kEdgeTol is an edge
inline constexpr double kSingularTol = 1e-9;   // |det3| below this counts as singular
inline constexpr double kAdjugateTol = 1e-8;   // relative residual for the adjugate identity
inline constexpr double kPsdTol = 1e-12;       // eigenvalue clamp threshold for sqrt_psd

/// det of the unit-diagonal matrix: 1 + 2abc - a^2 - b^2 - c^2.
double det3(double a, double b, double c);
double det3(const CorrelationPoint& p);
Rational det3(const Rational& a, const Rational& b, const Rational& c);

/// Gradient of det3: (2(bc-a), 2(ac-b), 2(ab-c)); twice the adjugate
/// entries (1,2), (1,3), (2,3).
std::array<double, 3> grad_det(const CorrelationPoint& p);

/// Interior: det3 > kDetTol and every |coordinate| < 1 - kEdgeTol.
/// Face: |det3| <= kDetTol with all coordinates strictly inside.
/// Edge: some |coordinate| >= 1 - kEdgeTol while still a member.
/// Outside: det3 < -kDetTol or a coordinate beyond [-1, 1].
RegionLabel classify(const CorrelationPoint& p);

/// The boundary values c = ab +/- sqrt((1-a^2)(1-b^2)), larger root first,
/// collapsed to one value at a double root. Requires |a| <= 1 and |b| <= 1.
std::vector<double> boundary_sheets(double a, double b);

/// Unit kernel vector of a singular correlation matrix, sign fixed so the
/// first component of magnitude > 1e-12 is positive. residual = ||Sigma
/// alpha||, the smallest eigenvalue magnitude.
struct KernelVector {
    std::array<double, 3> alpha{};
    double residual = 0.0;
};

/// Throws NotSingular when |det3| > kSingularTol and RankDeficient when the
/// second-smallest eigenvalue is also within kSingularTol of zero (rank <= 1,
/// which happens only at the four cube corners of the elliptope).
KernelVector kernel_vector(const CorrelationPoint& p);

struct AdjugateReport {
    CorrelationPoint point;
    double lambda = 0.0;    // grad_det == lambda^2 * (a1 a2, a1 a3, a2 a3)
    double residual = 0.0;  // max component mismatch relative to ||grad||_inf
    bool pass = false;
};

/// Least-squares fit of lambda^2 followed by a componentwise comparison at
/// relative tolerance kAdjugateTol. Accepts any rank-2 singular point (Face
/// or Edge); propagates kernel_vector errors otherwise.
AdjugateReport check_adjugate_identity(const CorrelationPoint& p);

/// Cube lattice used by the scans: coordinate i of m+1 maps to (2i-m)/m with
/// m = round(2/resolution), so 0 and +/-1 are exact. Points are kept when
/// det3 >= 0 holds for the exact rational lattice coordinates.
struct GridPoint {
    int i = 0, j = 0, k = 0;  // lattice indices in [0, m]
    CorrelationPoint point;
};

struct GridLattice {
    int m = 0;
    std::vector<GridPoint> points;
};

/// Lattice subdivisions m = round(2/resolution); validates resolution in (0, 1].
int lattice_size(double resolution);

GridLattice grid_lattice(double resolution);

/// The elliptope members of the lattice, in lattice order.
std::vector<CorrelationPoint> grid(double resolution);

/// Uniform rejection sampler over the elliptope; deterministic in (count, seed).
std::vector<CorrelationPoint> sample_elliptope(int count, std::uint64_t seed);

struct SampleStats {
    std::vector<CorrelationPoint> points;
    long long proposals = 0;  // cube draws consumed, for acceptance-rate checks
};

SampleStats sample_elliptope_counted(int count, std::uint64_t seed);

/// `count` points classified Interior, from the same rejection stream.
std::vector<CorrelationPoint> interior_points(int count, std::uint64_t seed);

/// Random Face points: (a, b) uniform in the open square, c drawn from one of
/// the two boundary sheets, rejecting anything not classified Face.
std::vector<CorrelationPoint> face_points(int count, std::uint64_t seed);

/// CSV with header a,b,c,det,region; floats at full precision.
void write_points_csv(std::ostream& out, const std::vector<CorrelationPoint>& points);

/// Largest eigenvalue deficit: min eigenvalue, for PSD validation.
double min_eigenvalue(const CovarianceMatrix<double>& cov);

/// Symmetric PSD square root by spectral decomposition; eigenvalues in
/// [-kPsdTol, 0) are clamped to zero, below that throws NotPSD.
CovarianceMatrix<double> sqrt_psd(const CovarianceMatrix<double>& cov);

}  // namespace gpikit
