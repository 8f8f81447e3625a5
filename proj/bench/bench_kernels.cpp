// Timing comparison of the OpenMP kernels against the serial reference.
// Not a test; run `flocksim-bench [max_n]` for a table of microseconds/call.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "flocksim/detail/uniform.hpp"
#include "flocksim/kernels.hpp"

using namespace flocksim;

namespace {

std::vector<double> random_flat(int count, int dim, std::uint64_t seed) {
    std::vector<double> out(static_cast<std::size_t>(count) * dim);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = 4.0 * detail::mixed_uniform(seed, k) - 2.0;
    return out;
}

template <typename F>
double time_us(F&& body, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) body();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::micro>(t1 - t0).count() / reps;
}

} // namespace

int main(int argc, char** argv) {
    const int max_n = argc > 1 ? std::atoi(argv[1]) : 2048;
    const int dim = 3;
    const auto psi = InfluenceFunction::power_law(1.0, 0.4);

    std::printf("%-10s %8s %14s %14s %9s\n", "kernel", "n", "serial us", "parallel us", "speedup");
    for (int n = 32; n <= max_n; n *= 4) {
        const auto x = random_flat(n, dim, 1);
        const auto w = random_flat(n, dim, 2);
        const auto xd = random_flat(n, dim, 3);
        const auto wd = random_flat(n, dim, 4);
        std::vector<double> out(x.size());
        const int reps = std::max(1, 100000 / n);

        const double ser = time_us(
            [&] { kernels::serial::pointwise_accel(n, dim, psi, x, w, xd, wd, out); }, reps);
        const double par =
            time_us([&] { kernels::pointwise_accel(n, dim, psi, x, w, xd, wd, out); }, reps);
        std::printf("%-10s %8d %14.2f %14.2f %8.2fx\n", "pointwise", n, ser, par, ser / par);

        const double dser =
            time_us([&] { (void)kernels::serial::cloud_diameter(n, dim, x); }, reps);
        const double dpar = time_us([&] { (void)kernels::cloud_diameter(n, dim, x); }, reps);
        std::printf("%-10s %8d %14.2f %14.2f %8.2fx\n", "diameter", n, dser, dpar, dser / dpar);
    }

    const int n = 64, m = 8;
    const auto x = random_flat(n, dim, 5);
    const auto v = random_flat(n, dim, 6);
    std::vector<std::vector<double>> xn(m), vn(m);
    std::vector<double> weight(m, 0.125);
    for (int q = 0; q < m; ++q) {
        xn[q] = random_flat(n, dim, 100 + q);
        vn[q] = random_flat(n, dim, 200 + q);
    }
    std::vector<double> out(x.size());
    const double ser = time_us(
        [&] { kernels::serial::distributed_accel(n, dim, psi, x, v, weight, xn, vn, out); }, 500);
    const double par = time_us(
        [&] { kernels::distributed_accel(n, dim, psi, x, v, weight, xn, vn, out); }, 500);
    std::printf("%-10s %8d %14.2f %14.2f %8.2fx  (m = %d nodes)\n", "distrib", n, ser, par,
                ser / par, m);
    return 0;
}
