#pragma once

#include <cstdint>
#include <vector>

#include "gpikit/covariance.hpp"
#include "gpikit/elliptope.hpp"
#include "gpikit/moments.hpp"
#include "gpikit/polynomial.hpp"

namespace gpikit {

/// Row-major count x dim matrix of correlated Gaussian draws.
struct SampleMatrix {
    int count = 0;
    int dim = 0;
    std::uint64_t seed = 0;
    std::vector<double> data;

    double value(int row, int coordinate) const {
        return data[static_cast<std::size_t>(row) * dim + coordinate];
    }
};

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Effective worker count: `requested` when positive, else the
/// GPIKIT_WORKERS environment variable, else the OpenMP default.
int resolve_workers(int requested);

/// splitmix64 step; used to derive independent per-block RNG streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// All kernels are block-partitioned with a fixed block size and merged in
/// block order, so results are byte-identical for every worker count and for
/// the serial reference implementations.
inline constexpr int kKernelBlock = 4096;

/// Draws `count` i.i.d. N(0, cov) rows via X = sqrt_psd(cov) * G.
/// Deterministic in (cov, count, seed) and independent of `workers`.
SampleMatrix sample_gaussian(const CovarianceMatrix<double>& cov, int count, std::uint64_t seed,
                             int workers = 0);
SampleMatrix sample_gaussian_serial(const CovarianceMatrix<double>& cov, int count, std::uint64_t seed);

/// Sample mean and standard error of prod_i X_i^{k_i} over the rows.
McEstimate mc_moment(const SampleMatrix& samples, const ExponentVector& k, int workers = 0);
McEstimate mc_moment_serial(const SampleMatrix& samples, const ExponentVector& k);

/// Evaluates a polynomial at every point; output[i] belongs to points[i].
std::vector<double> eval_at_points(const Poly3& q, const std::vector<CorrelationPoint>& points,
                                   int workers = 0);
std::vector<double> eval_at_points_serial(const Poly3& q, const std::vector<CorrelationPoint>& points);

}  // namespace gpikit
