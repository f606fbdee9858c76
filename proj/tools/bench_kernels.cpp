#include <chrono>
#include <cstdio>
#include <string>

#include "gpikit/kernels.hpp"
#include "gpikit/polynomial.hpp"
#include "gpikit/verifier.hpp"

using namespace gpikit;

namespace {

template <class F>
double time_ms(F&& work) {
    const auto start = std::chrono::steady_clock::now();
    work();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
    int workers = 0;
    int samples = 4000000;
    double resolution = 0.02;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--workers") workers = std::stoi(argv[i + 1]);
        if (flag == "--samples") samples = std::stoi(argv[i + 1]);
        if (flag == "--resolution") resolution = std::stod(argv[i + 1]);
    }
    workers = resolve_workers(workers);

    std::printf("gpikit kernel benchmark, %d workers\n", workers);
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    const ExponentVector p{6, 4, 2};
    const Poly3 phi = phi_polynomial(p);
    const auto points = grid(resolution);
    std::vector<double> serial_values, parallel_values;
    const double eval_serial = time_ms([&] { serial_values = eval_at_points_serial(phi, points); });
    const double eval_parallel =
        time_ms([&] { parallel_values = eval_at_points(phi, points, workers); });
    report("phi grid eval (6,4,2)", eval_serial, eval_parallel);
    if (serial_values != parallel_values) {
        std::printf("MISMATCH: serial and parallel grid evaluations differ\n");
        return 1;
    }

    const auto cov = unit_diagonal3<double>(0.3, 0.2, 0.1);
    SampleMatrix serial_samples, parallel_samples;
    const double draw_serial =
        time_ms([&] { serial_samples = sample_gaussian_serial(cov, samples, 42); });
    const double draw_parallel =
        time_ms([&] { parallel_samples = sample_gaussian(cov, samples, 42, workers); });
    report("gaussian sampling", draw_serial, draw_parallel);
    if (serial_samples.data != parallel_samples.data) {
        std::printf("MISMATCH: serial and parallel samples differ\n");
        return 1;
    }

    McEstimate serial_mc, parallel_mc;
    const double mc_serial = time_ms([&] { serial_mc = mc_moment_serial(parallel_samples, p); });
    const double mc_parallel =
        time_ms([&] { parallel_mc = mc_moment(parallel_samples, p, workers); });
    report("mc moment (6,4,2)", mc_serial, mc_parallel);
    if (serial_mc.estimate != parallel_mc.estimate || serial_mc.std_error != parallel_mc.std_error) {
        std::printf("MISMATCH: serial and parallel MC estimates differ\n");
        return 1;
    }

    std::printf("estimate %.6f (se %.6f), %zu grid points\n", parallel_mc.estimate,
                parallel_mc.std_error, points.size());
    return 0;
}
