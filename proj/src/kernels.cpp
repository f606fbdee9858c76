#include "gpikit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gpikit/errors.hpp"

namespace gpikit {

int resolve_workers(int requested) {
    int n = requested;
    if (n <= 0)
        if (const char* env = std::getenv("GPIKIT_WORKERS")) n = std::atoi(env);
    if (n <= 0) {
#ifdef _OPENMP
        n = omp_get_max_threads();
#else
        n = 1;
#endif
    }
    return std::clamp(n, 1, 256);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + (salt + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

int block_count(int total) {
    return (total + kKernelBlock - 1) / kKernelBlock;
}

// Rows [first, last) drawn from the block's own engine; writing disjoint
// ranges keeps the output independent of scheduling.
void fill_block(const CovarianceMatrix<double>& root, std::uint64_t seed, int block, int first,
                int last, std::vector<double>& data) {
    const int dim = root.size();
    std::mt19937_64 engine(mix_seed(seed, static_cast<std::uint64_t>(block)));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> g(dim);
    for (int row = first; row < last; ++row) {
        for (int i = 0; i < dim; ++i) g[i] = normal(engine);
        double* x = data.data() + static_cast<std::size_t>(row) * dim;
        for (int i = 0; i < dim; ++i) {
            double acc = 0.0;
            for (int j = 0; j < dim; ++j) acc += root(i, j) * g[j];
            x[i] = acc;
        }
    }
}

struct BlockSums {
    double sum = 0.0;
    double sumsq = 0.0;
};

BlockSums mc_block(const SampleMatrix& samples, const ExponentVector& k, int first, int last) {
    BlockSums sums;
    for (int row = first; row < last; ++row) {
        double value = 1.0;
        for (int i = 0; i < samples.dim; ++i) {
            const double x = samples.value(row, i);
            for (int e = 0; e < k[i]; ++e) value *= x;
        }
        sums.sum += value;
        sums.sumsq += value * value;
    }
    return sums;
}

McEstimate combine(const std::vector<BlockSums>& blocks, int count) {
    double sum = 0.0, sumsq = 0.0;
    for (const BlockSums& b : blocks) {
        sum += b.sum;
        sumsq += b.sumsq;
    }
    McEstimate out;
    out.estimate = sum / count;
    if (count > 1) {
        const double variance = std::max(0.0, (sumsq - count * out.estimate * out.estimate) / (count - 1));
        out.std_error = std::sqrt(variance / count);
    }
    return out;
}

}  // namespace

SampleMatrix sample_gaussian_serial(const CovarianceMatrix<double>& cov, int count, std::uint64_t seed) {
    if (count < 1) throw InvalidArgument("sample count must be positive");
    const CovarianceMatrix<double> root = sqrt_psd(cov);
    SampleMatrix samples{count, cov.size(), seed, {}};
    samples.data.resize(static_cast<std::size_t>(count) * cov.size());
    for (int b = 0; b < block_count(count); ++b)
        fill_block(root, seed, b, b * kKernelBlock, std::min(count, (b + 1) * kKernelBlock),
                   samples.data);
    return samples;
}

SampleMatrix sample_gaussian(const CovarianceMatrix<double>& cov, int count, std::uint64_t seed,
                             int workers) {
    if (count < 1) throw InvalidArgument("sample count must be positive");
    const CovarianceMatrix<double> root = sqrt_psd(cov);
    SampleMatrix samples{count, cov.size(), seed, {}};
    samples.data.resize(static_cast<std::size_t>(count) * cov.size());
    const int blocks = block_count(count);
    const int nw = resolve_workers(workers);
#pragma omp parallel for num_threads(nw) schedule(dynamic)
    for (int b = 0; b < blocks; ++b)
        fill_block(root, seed, b, b * kKernelBlock, std::min(count, (b + 1) * kKernelBlock),
                   samples.data);
    return samples;
}

McEstimate mc_moment_serial(const SampleMatrix& samples, const ExponentVector& k) {
    if (samples.count < 1) throw EmptySamples("mc_moment needs at least one sample");
    validate_exponents(k, samples.dim);
    std::vector<BlockSums> blocks(block_count(samples.count));
    for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
        blocks[b] = mc_block(samples, k, b * kKernelBlock,
                             std::min(samples.count, (b + 1) * kKernelBlock));
    return combine(blocks, samples.count);
}

McEstimate mc_moment(const SampleMatrix& samples, const ExponentVector& k, int workers) {
    if (samples.count < 1) throw EmptySamples("mc_moment needs at least one sample");
    validate_exponents(k, samples.dim);
    std::vector<BlockSums> blocks(block_count(samples.count));
    const int nblocks = static_cast<int>(blocks.size());
    const int nw = resolve_workers(workers);
#pragma omp parallel for num_threads(nw) schedule(dynamic)
    for (int b = 0; b < nblocks; ++b)
        blocks[b] = mc_block(samples, k, b * kKernelBlock,
                             std::min(samples.count, (b + 1) * kKernelBlock));
    // Merging in block order keeps the float sums identical across worker counts.
    return combine(blocks, samples.count);
}

std::vector<double> eval_at_points_serial(const Poly3& q, const std::vector<CorrelationPoint>& points) {
    std::vector<double> values(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        values[i] = q.evaluate(points[i].a, points[i].b, points[i].c);
    return values;
}

std::vector<double> eval_at_points(const Poly3& q, const std::vector<CorrelationPoint>& points,
                                   int workers) {
    std::vector<double> values(points.size());
    const long long n = static_cast<long long>(points.size());
    const int nw = resolve_workers(workers);
#pragma omp parallel for num_threads(nw) schedule(dynamic, 256)
    for (long long i = 0; i < n; ++i)
        values[i] = q.evaluate(points[i].a, points[i].b, points[i].c);
    return values;
}

}  // namespace gpikit
