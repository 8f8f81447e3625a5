#include <doctest.h>

#include <vector>

#include "flocksim/detail/uniform.hpp"
#include "flocksim/kernels.hpp"

using namespace flocksim;

TEST_SUITE_BEGIN("kernels");

namespace {

std::vector<double> random_flat(int count, int dim, std::uint64_t seed) {
    std::vector<double> out(static_cast<std::size_t>(count) * dim);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = 4.0 * detail::mixed_uniform(seed, k) - 2.0;
    return out;
}

} // namespace

TEST_CASE("parallel pointwise kernel is bitwise identical to the serial reference") {
    const auto psi = InfluenceFunction::power_law(1.3, 0.45);
    for (int n : {2, 5, 33, 128}) {
        const int d = 3;
        const auto x = random_flat(n, d, 1);
        const auto w = random_flat(n, d, 2);
        const auto xd = random_flat(n, d, 3);
        const auto wd = random_flat(n, d, 4);
        std::vector<double> out_par(x.size()), out_ser(x.size());
        kernels::pointwise_accel(n, d, psi, x, w, xd, wd, out_par);
        kernels::serial::pointwise_accel(n, d, psi, x, w, xd, wd, out_ser);
        for (std::size_t k = 0; k < out_par.size(); ++k) CHECK(out_par[k] == out_ser[k]);
    }
}

TEST_CASE("parallel distributed kernel is bitwise identical to the serial reference") {
    const auto psi = InfluenceFunction::oscillating(0.3, 0.9, 2.0);
    const int n = 17, d = 2, m = 6;
    const auto x = random_flat(n, d, 5);
    const auto v = random_flat(n, d, 6);
    std::vector<std::vector<double>> xn(m), vn(m);
    std::vector<double> weight(m);
    for (int q = 0; q < m; ++q) {
        xn[q] = random_flat(n, d, 100 + q);
        vn[q] = random_flat(n, d, 200 + q);
        weight[q] = detail::mixed_uniform(7, q);
    }
    std::vector<double> out_par(x.size()), out_ser(x.size());
    kernels::distributed_accel(n, d, psi, x, v, weight, xn, vn, out_par);
    kernels::serial::distributed_accel(n, d, psi, x, v, weight, xn, vn, out_ser);
    for (std::size_t k = 0; k < out_par.size(); ++k) CHECK(out_par[k] == out_ser[k]);
}

TEST_CASE("diameter and norm folds match the serial reference exactly") {
    for (int count : {3, 64, 301}) {
        const int d = 3;
        const auto pts = random_flat(count, d, 42 + count);
        CHECK(kernels::cloud_diameter(count, d, pts) ==
              kernels::serial::cloud_diameter(count, d, pts));
        CHECK(kernels::max_row_norm(count, d, pts) ==
              kernels::serial::max_row_norm(count, d, pts));
    }
}

TEST_CASE("diameter of a known configuration") {
    const std::vector<double> pts{0.0, 0.0, 3.0, 4.0, 1.0, 1.0};
    CHECK(kernels::cloud_diameter(3, 2, pts) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(kernels::serial::max_row_norm(3, 2, pts) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_SUITE_END();
